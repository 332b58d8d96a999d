#include <gtest/gtest.h>

#include <cmath>

#include "gerbekit/central_ext.hpp"
#include "gerbekit/rng.hpp"

using namespace gerbekit;

namespace {

AlgebraLoop sampled(int n, const std::function<AlgebraElement(double)>& f) {
  AlgebraLoop out;
  for (int j = 0; j < n; ++j) out.samples.push_back(f(2 * M_PI * j / n));
  return out;
}

AlgebraLoop random_loop(SampleRng& rng, int n, int modes, double scale) {
  std::vector<Eigen::Vector3d> a;
  std::vector<Eigen::Vector3d> b;
  for (int m = 0; m <= modes; ++m) {
    a.push_back(rng.vector(3, scale));
    b.push_back(rng.vector(3, scale));
  }
  return sampled(n, [&](double t) {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (int m = 0; m <= modes; ++m) v += std::cos(m * t) * a[m] + std::sin(m * t) * b[m];
    return AlgebraElement::su2(v);
  });
}

LinearShift shift_of(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  int i = 0;
  for (double x : c) v(i++) = x;
  return {v};
}

std::vector<CocycleSample<GroupElement, AlgebraElement>> finite_samples(GroupKind kind, int count, int seed) {
  SampleRng rng(seed, to_string(kind));
  std::vector<CocycleSample<GroupElement, AlgebraElement>> out;
  for (int i = 0; i < count; ++i) {
    out.push_back({rng.group(kind), rng.group(kind), rng.algebra(kind, 1.0), rng.algebra(kind, 1.0),
                   rng.algebra(kind, 1.0)});
  }
  return out;
}

}  // namespace

TEST(CentralExt, HeisenbergLieCocycleOnBasis) {
  const auto model = FiniteExtension::heisenberg();
  const auto e1 = AlgebraElement::r2(Eigen::Vector2d(1, 0));
  const auto e2 = AlgebraElement::r2(Eigen::Vector2d(0, 1));
  EXPECT_EQ(model.lie_cocycle(e1, e2), Imag(1.0));
  EXPECT_EQ(model.lie_cocycle(e2, e1), Imag(-1.0));
  EXPECT_EQ(model.group_cocycle(exp(e1), e2), Imag(1.0));
}

TEST(CentralExt, HeisenbergScalesWithKappa) {
  const auto model = FiniteExtension::heisenberg(2.5);
  const auto e1 = AlgebraElement::r2(Eigen::Vector2d(1, 0));
  const auto e2 = AlgebraElement::r2(Eigen::Vector2d(0, 1));
  EXPECT_DOUBLE_EQ(model.lie_cocycle(e1, e2).value, 2.5);
}

TEST(CentralExt, TrivialExtensionHasZeroCocycles) {
  SampleRng rng(20);
  const auto model = FiniteExtension::trivial(GroupKind::SU2);
  for (int i = 0; i < 20; ++i) {
    const auto x = rng.algebra(GroupKind::SU2, 1.0);
    const auto y = rng.algebra(GroupKind::SU2, 1.0);
    EXPECT_EQ(model.lie_cocycle(x, y), Imag(0.0));
    EXPECT_EQ(model.group_cocycle(rng.group(GroupKind::SU2), x), Imag(0.0));
  }
}

TEST(CentralExt, GroupCocycleAtIdentityVanishes) {
  SampleRng rng(21);
  const auto heis = FiniteExtension::heisenberg(1.3, shift_of({0.4, -0.7}));
  const auto su2 = FiniteExtension::trivial(GroupKind::SU2, shift_of({0.2, 0.5, -0.1}));
  for (int i = 0; i < 20; ++i) {
    EXPECT_LT(abs(heis.group_cocycle(GroupElement::identity(GroupKind::R2), rng.algebra(GroupKind::R2, 1.0))), 1e-15);
    EXPECT_LT(abs(su2.group_cocycle(GroupElement::identity(GroupKind::SU2), rng.algebra(GroupKind::SU2, 1.0))),
              1e-15);
  }
}

TEST(CentralExt, LoopLieCocycleOnFourierModes) {
  const auto e = Eigen::Vector3d(1, 0, 0);
  ASSERT_LT((AlgebraElement::su2(e).matrix() - Eigen::Vector2cd(std::complex<double>(0, 1), std::complex<double>(0, -1))
                                                   .asDiagonal()
                                                   .toDenseMatrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  const LoopExtension model(1);
  for (int n : {32, 64, 256}) {
    const auto x = sampled(n, [&](double t) { return AlgebraElement::su2(std::cos(t) * e); });
    const auto y = sampled(n, [&](double t) { return AlgebraElement::su2(std::sin(t) * e); });
    const double dt = x.step();
    EXPECT_NEAR(model.lie_cocycle(x, y).value, -1.0, std::pow(dt, 6) / 100 + 1e-13);
  }
}

TEST(CentralExt, LoopLieCocycleScalesWithLevel) {
  SampleRng rng(22);
  const auto x = random_loop(rng, 128, 3, 0.5);
  const auto y = random_loop(rng, 128, 3, 0.5);
  const double one = LoopExtension(1).lie_cocycle(x, y).value;
  EXPECT_NEAR(LoopExtension(3).lie_cocycle(x, y).value, 3 * one, 1e-12 * (1 + std::abs(one)));
}

TEST(CentralExt, LoopGroupCocycleOfConstantLoopVanishes) {
  SampleRng rng(23);
  const LoopExtension model(2);
  const GroupLoop g(64, rng.group(GroupKind::SU2));
  EXPECT_LT(abs(model.group_cocycle(g, random_loop(rng, 64, 2, 1.0))), 1e-14);
}

TEST(CentralExt, LoopProductCocycleHasNoGlobalModel) {
  const LoopExtension model(1);
  const GroupLoop g(16, GroupElement::identity(GroupKind::SU2));
  EXPECT_THROW(model.product_cocycle(g, g), NoGlobalModel);
}

TEST(CentralExt, LoopGridMismatchThrows) {
  const LoopExtension model(1);
  const AlgebraLoop a(16, AlgebraElement::zero(GroupKind::SU2));
  const AlgebraLoop b(32, AlgebraElement::zero(GroupKind::SU2));
  EXPECT_THROW(model.lie_cocycle(a, b), GridMismatch);
}

TEST(CentralExt, ShiftSizeMismatchThrows) {
  const auto model = FiniteExtension::heisenberg(1.0, shift_of({1.0, 2.0, 3.0}));
  EXPECT_THROW(model.split_shift(AlgebraElement::r2(Eigen::Vector2d(1, 0))), InvalidArgument);
}

TEST(CentralExt, ClosedFormsMatchTwistedProduct) {
  const FiniteExtension models[] = {FiniteExtension::heisenberg(1.0), FiniteExtension::heisenberg(0.7, shift_of({0.3, -1.1})),
                                    FiniteExtension::trivial(GroupKind::SU2, shift_of({0.5, -0.2, 0.9}))};
  for (const auto& model : models) {
    SampleRng rng(24, to_string(model.kind()));
    for (int i = 0; i < 20; ++i) {
      const auto g = rng.group(model.kind());
      const auto x = rng.algebra(model.kind(), 1.0);
      const auto y = rng.algebra(model.kind(), 1.0);
      EXPECT_LT(abs(model.group_cocycle_numeric(g, x, 1e-3) - model.group_cocycle(g, x)), 1e-9);
      EXPECT_LT(abs(model.lie_cocycle_numeric(x, y, 1e-3) - model.lie_cocycle(x, y)), 1e-8);
    }
  }
}

TEST(CentralExt, ProductIsAssociative) {
  const auto model = FiniteExtension::heisenberg(1.7);
  SampleRng rng(25);
  for (int i = 0; i < 50; ++i) {
    const ExtendedGroupElement a{rng.group(GroupKind::R2), std::polar(1.0, rng.uniform(-3, 3))};
    const ExtendedGroupElement b{rng.group(GroupKind::R2), std::polar(1.0, rng.uniform(-3, 3))};
    const ExtendedGroupElement c{rng.group(GroupKind::R2), std::polar(1.0, rng.uniform(-3, 3))};
    EXPECT_LT(distance(model.multiply(model.multiply(a, b), c), model.multiply(a, model.multiply(b, c))), 1e-13);
    const auto e = model.multiply(a, model.inverse(a));
    EXPECT_LT(distance(e, ExtendedGroupElement{GroupElement::identity(GroupKind::R2), {1.0, 0.0}}), 1e-13);
  }
}

TEST(CentralExt, FiniteCocycleIdentities) {
  const auto extra = shift_of({0.6, -0.4});
  const auto heis = FiniteExtension::heisenberg(1.0, shift_of({0.2, 0.3}));
  const auto r = cocycle_identities_residual(heis, heis.shifted(extra), extra, finite_samples(GroupKind::R2, 100, 26),
                                             1e-4);
  EXPECT_LT(r.z_adjoint, 1e-10);
  EXPECT_LT(r.z_shift, 1e-10);
  EXPECT_LT(r.antisymmetry, 1e-10);
  EXPECT_LT(r.jacobi, 1e-10);
  EXPECT_LT(r.derivative_link, 1e-6);
  ASSERT_TRUE(r.group_two_cocycle.has_value());
  EXPECT_LT(*r.group_two_cocycle, 1e-10);

  const auto su_extra = shift_of({0.1, 0.2, -0.3});
  const auto su2 = FiniteExtension::trivial(GroupKind::SU2, shift_of({1.0, 0.0, 0.5}));
  const auto s = cocycle_identities_residual(su2, su2.shifted(su_extra), su_extra,
                                             finite_samples(GroupKind::SU2, 100, 27), 1e-4);
  EXPECT_LT(s.z_adjoint, 1e-10);
  EXPECT_LT(s.z_shift, 1e-10);
  EXPECT_LT(s.antisymmetry, 1e-10);
  EXPECT_LT(s.jacobi, 1e-10);
  EXPECT_LT(s.derivative_link, 1e-6);
}

TEST(CentralExt, LoopCocycleIdentities) {
  const int n = 256;
  SampleRng rng(28);
  LoopShift extra;
  extra.cos_coefficients = {rng.vector(3, 0.5), rng.vector(3, 0.5)};
  extra.sin_coefficients = {Eigen::Vector3d::Zero(), rng.vector(3, 0.5)};
  const LoopExtension model(2);
  std::vector<CocycleSample<GroupLoop, AlgebraLoop>> samples;
  for (int i = 0; i < 5; ++i) {
    samples.push_back({exp(random_loop(rng, n, 2, 0.4)), exp(random_loop(rng, n, 2, 0.4)), random_loop(rng, n, 2, 0.5),
                       random_loop(rng, n, 2, 0.5), random_loop(rng, n, 2, 0.5)});
  }
  const auto r = cocycle_identities_residual(model, model.shifted(extra), extra, samples, 1e-4);
  EXPECT_LT(r.z_adjoint, 1e-6);
  EXPECT_LT(r.z_shift, 1e-12);
  EXPECT_LT(r.antisymmetry, 1e-10);
  // The difference quotient satisfies Leibniz only to the stencil order.
  EXPECT_LT(r.jacobi, 1e-8);
  EXPECT_LT(r.derivative_link, 1e-6);
  EXPECT_FALSE(r.group_two_cocycle.has_value());
}

TEST(CentralExt, NuNormalizedOnVerticalVectors) {
  const auto model = FiniteExtension::heisenberg(1.0, shift_of({0.3, 0.8}));
  SampleRng rng(29);
  for (int i = 0; i < 10; ++i) {
    const ExtendedGroupElement p{rng.group(GroupKind::R2), std::polar(1.0, rng.uniform(-3, 3))};
    const auto v = model.nu_connection(p, AlgebraElement::zero(GroupKind::R2), Imag(1.0), 1e-3);
    EXPECT_LT(abs(v - Imag(1.0)), 1e-10);
  }
}

TEST(CentralExt, NuIsLeftInvariantAndRightEquivariant) {
  const auto model = FiniteExtension::heisenberg(1.2, shift_of({-0.5, 0.4}));
  const auto nu = nu_form(model, 1e-3);
  SampleRng rng(30);
  for (int i = 0; i < 20; ++i) {
    const ExtendedGroupElement p{rng.group(GroupKind::R2), std::polar(1.0, rng.uniform(-3, 3))};
    const ExtendedGroupElement a{rng.group(GroupKind::R2), std::polar(1.0, rng.uniform(-3, 3))};
    const ExtendedAlgebraElement v{rng.algebra(GroupKind::R2, 1.0), Imag(rng.uniform(-1, 1))};
    EXPECT_LT(abs(nu(model.multiply(a, p), {v}) - nu(p, {v})), 1e-9);

    // R_a pushes the left-invariant field v at p to Ad_{a⁻¹}v at pa.
    const auto moved = model.adjoint(a.base.inverse(), v);
    const Imag expected = nu(p, {v}) + model.group_cocycle(a.base.inverse(), v.base);
    EXPECT_LT(abs(nu(model.multiply(p, a), {moved}) - expected), 1e-9);
  }
}

TEST(CentralExt, NuCurvatureMatchesLieCocycle) {
  const FiniteExtension models[] = {FiniteExtension::heisenberg(1.0, shift_of({0.7, -0.2})),
                                    FiniteExtension::trivial(GroupKind::SU2, shift_of({0.3, 0.1, -0.6}))};
  for (const auto& model : models) {
    const ExtendedGroupSpace space{model};
    const auto curvature = exterior_derivative(space, nu_form(model, 1e-3), 1e-3);
    SampleRng rng(31, to_string(model.kind()));
    for (int i = 0; i < 10; ++i) {
      const ExtendedGroupElement p{rng.group(model.kind()), std::polar(1.0, rng.uniform(-3, 3))};
      const ExtendedAlgebraElement x{rng.algebra(model.kind(), 1.0), Imag(rng.uniform(-1, 1))};
      const ExtendedAlgebraElement y{rng.algebra(model.kind(), 1.0), Imag(rng.uniform(-1, 1))};
      EXPECT_LT(abs(curvature(p, {x, y}) - model.nu_curvature(x.base, y.base)), 1e-6);
    }
  }
}
