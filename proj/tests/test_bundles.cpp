#include <gtest/gtest.h>

#include <cmath>

#include "gerbekit/bundles.hpp"

using namespace gerbekit;

namespace {

LinearShift shift_of(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  int i = 0;
  for (double x : c) v(i++) = x;
  return {v};
}

std::shared_ptr<const BundleData> random_gauge(GroupKind kind, int seed) {
  SampleRng rng(seed);
  return gauge_bundle(GaugeFamily::random(kind, rng, 0.4, 0.5));
}

GaugeFamily zero_family(GroupKind kind) {
  GaugeFamily f;
  f.group = kind;
  const auto z = AlgebraElement::zero(kind);
  f.eta_constant.assign(3, z);
  f.eta_linear.assign(3, std::vector<AlgebraElement>(3, z));
  f.phi_constant.assign(4, z);
  f.phi_linear.assign(4, std::vector<AlgebraElement>(3, z));
  return f;
}

}  // namespace

TEST(Bundles, GaugeTransitionsFormACocycle) {
  for (GroupKind kind : {GroupKind::SU2, GroupKind::R2, GroupKind::U2}) {
    const auto bundle = random_gauge(kind, 40);
    SampleRng rng(41, to_string(kind));
    EXPECT_LT(transition_cocycle_residual(*bundle, rng, 20), 1e-10);
    EXPECT_LT(connection_compatibility_residual(*bundle, rng, 20), 1e-8);
  }
}

TEST(Bundles, NerveOfFourHalfSpaces) {
  const auto bundle = random_gauge(GroupKind::SU2, 42);
  EXPECT_EQ(bundle->nerve.simplices_of_size(2).size(), 6u);
  EXPECT_EQ(bundle->nerve.simplices_of_size(3).size(), 4u);
  EXPECT_EQ(bundle->nerve.simplices_of_size(4).size(), 1u);
  SampleRng rng(43);
  for (int i = 0; i < 50; ++i) {
    const auto x = bundle->nerve.sample(rng, {0, 1, 2, 3});
    for (int a = 0; a < 4; ++a) EXPECT_GE(bundle->base.clearance(a, x), bundle->margin);
  }
}

TEST(Bundles, ConnectionReproducesVerticalComponent) {
  const auto bundle = random_gauge(GroupKind::SU2, 44);
  SampleRng rng(45);
  for (int i = 0; i < 20; ++i) {
    const auto b = sample_point(*bundle, rng, rng.integer(0, 3));
    const auto x = rng.algebra(GroupKind::SU2, 1.0);
    EXPECT_LT((global_connection(*bundle, b, vertical(b, x)) - x).norm(), 1e-15);
  }
}

TEST(Bundles, FlatTrivialHorizontalTangentIsAnnihilated) {
  const auto bundle = gauge_bundle(zero_family(GroupKind::SU2));
  SampleRng rng(46);
  const auto b = sample_point(*bundle, rng, 0);
  EXPECT_EQ(global_connection(*bundle, b, {sample_base_tangent(*bundle, rng), AlgebraElement::zero(GroupKind::SU2)})
                .norm(),
            0.0);
}

TEST(Bundles, HorizontalLiftIsHorizontal) {
  const auto bundle = random_gauge(GroupKind::U2, 47);
  SampleRng rng(48);
  for (int i = 0; i < 20; ++i) {
    const auto b = sample_point(*bundle, rng, rng.integer(0, 3));
    EXPECT_LT(global_connection(*bundle, b, horizontal_lift(*bundle, b, sample_base_tangent(*bundle, rng))).norm(),
              1e-14);
  }
}

TEST(Bundles, ChartChangeRoundTrip) {
  const auto bundle = random_gauge(GroupKind::SU2, 49);
  SampleRng rng(50);
  for (const auto& s : bundle->nerve.simplices_of_size(2)) {
    const BundlePoint b{s[0], bundle->nerve.sample(rng, s), rng.group(GroupKind::SU2)};
    const auto back = change_chart(*bundle, change_chart(*bundle, b, s[1]), s[0]);
    EXPECT_LT(distance(back.g, b.g), 1e-14);
    EXPECT_LT((back.x - b.x).norm(), 1e-15);
  }
}

TEST(Bundles, ConnectionAndCurvatureAreChartIndependent) {
  const auto bundle = random_gauge(GroupKind::SU2, 51);
  const TotalSpace space(bundle);
  SampleRng rng(52);
  for (const auto& s : bundle->nerve.simplices_of_size(2)) {
    for (int i = 0; i < 5; ++i) {
      const BundlePoint b{s[0], bundle->nerve.sample(rng, s), rng.group(GroupKind::SU2)};
      const auto v = sample_tangent(*bundle, rng);
      const auto w = sample_tangent(*bundle, rng);
      const auto b2 = change_chart(*bundle, b, s[1]);
      const auto v2 = change_chart(*bundle, b, v, s[1]);
      const auto w2 = change_chart(*bundle, b, w, s[1]);
      EXPECT_LT((global_connection(*bundle, b, v) - global_connection(*bundle, b2, v2)).norm(), 1e-8);
      EXPECT_LT((curvature(space, b, v, w, 1e-3) - curvature(space, b2, v2, w2, 1e-3)).norm(), 1e-5);
      EXPECT_LT((analytic_curvature(*bundle, b, v, w) - analytic_curvature(*bundle, b2, v2, w2)).norm(), 1e-8);
    }
  }
}

TEST(Bundles, FiniteDifferenceCurvatureMatchesClosedForm) {
  for (GroupKind kind : {GroupKind::SU2, GroupKind::U2, GroupKind::R2}) {
    const auto bundle = random_gauge(kind, 53);
    const TotalSpace space(bundle);
    SampleRng rng(54, to_string(kind));
    for (int i = 0; i < 10; ++i) {
      const auto b = sample_point(*bundle, rng, rng.integer(0, 3));
      const auto v = sample_tangent(*bundle, rng);
      const auto w = sample_tangent(*bundle, rng);
      EXPECT_LT((curvature(space, b, v, w, 1e-3) - analytic_curvature(*bundle, b, v, w)).norm(), 1e-5);
    }
  }
}

TEST(Bundles, AbelianCurvatureOfXdY) {
  auto family = zero_family(GroupKind::R2);
  const auto e1 = AlgebraElement::r2(Eigen::Vector2d(1, 0));
  family.eta_linear[1][0] = e1;
  const auto bundle = gauge_bundle(family);
  const TotalSpace space(bundle);
  const BundlePoint b{0, Eigen::Vector3d(0.2, -0.3, 0.1), GroupElement::identity(GroupKind::R2)};
  const BundleTangent ex{Eigen::Vector3d::UnitX(), AlgebraElement::zero(GroupKind::R2)};
  const BundleTangent ey{Eigen::Vector3d::UnitY(), AlgebraElement::zero(GroupKind::R2)};
  EXPECT_LT((curvature(space, b, ex, ey, 1e-3) - e1).norm(), 1e-6);
}

TEST(Bundles, CurvatureIsHorizontalAndEquivariant) {
  const auto bundle = random_gauge(GroupKind::SU2, 55);
  const TotalSpace space(bundle);
  SampleRng rng(56);
  for (int i = 0; i < 20; ++i) {
    const auto b = sample_point(*bundle, rng, rng.integer(0, 3));
    const auto v = sample_tangent(*bundle, rng);
    const auto w = sample_tangent(*bundle, rng);
    const auto g = rng.group(GroupKind::SU2);
    const auto push = [&](const BundleTangent& t) { return BundleTangent{t.base, adjoint(g.inverse(), t.fiber)}; };
    const auto moved = curvature(space, act(b, g), push(v), push(w), 1e-3);
    EXPECT_LT((moved - adjoint(g.inverse(), curvature(space, b, v, w, 1e-3))).norm(), 1e-5);
    EXPECT_LT(curvature(space, b, v, vertical(b, rng.algebra(GroupKind::SU2, 1.0)), 1e-3).norm(), 1e-5);
  }
}

TEST(Bundles, ClearanceIsEnforced) {
  const auto bundle = random_gauge(GroupKind::SU2, 57);
  const TotalSpace space(bundle);
  const BundlePoint b{0, Eigen::Vector3d(0.59, 0.0, 0.0), GroupElement::identity(GroupKind::SU2)};
  const BundleTangent v{Eigen::Vector3d::UnitX(), AlgebraElement::zero(GroupKind::SU2)};
  EXPECT_THROW(curvature(space, b, v, v, 0.1), ChartClearanceError);
}

TEST(Bundles, TrivializedSplittingIsEquivariant) {
  const auto heis_bundle = random_gauge(GroupKind::R2, 58);
  const auto heis = FiniteExtension::heisenberg(1.0, shift_of({0.3, -0.2}));
  const auto su_bundle = random_gauge(GroupKind::SU2, 59);
  const auto su2 = FiniteExtension::trivial(GroupKind::SU2, shift_of({0.4, 0.1, -0.5}));
  const std::tuple<std::shared_ptr<const BundleData>, FiniteExtension, BundleSplitting> cases[] = {
      {heis_bundle, heis, trivialized_splitting(heis_bundle, heis, Eigen::Vector2d(0.7, 1.1))},
      {su_bundle, su2, trivialized_splitting(su_bundle, su2, Eigen::Vector3d(0.2, -0.3, 0.9))},
      {su_bundle, su2, shift_splitting(su2)},
  };
  for (const auto& [bundle, model, l] : cases) {
    SampleRng rng(60, to_string(model.kind()));
    std::vector<std::tuple<BundlePoint, GroupElement, AlgebraElement>> samples;
    for (int i = 0; i < 100; ++i)
      samples.emplace_back(sample_point(*bundle, rng, rng.integer(0, 3)), rng.group(model.kind()),
                           rng.algebra(model.kind(), 1.0));
    const double r = reduced_splitting_equivariance_residual(
        model, l, [](const BundlePoint& b, const GroupElement& g) { return act(b, g); }, samples);
    EXPECT_LT(r, 1e-10);
  }
}

TEST(Bundles, SplittingRoundtrip) {
  const auto bundle = random_gauge(GroupKind::R2, 61);
  const auto model = FiniteExtension::heisenberg(1.0, shift_of({0.2, 0.5}));
  const auto l = trivialized_splitting(bundle, model, Eigen::Vector2d(-0.4, 0.6));
  SampleRng rng(62);
  std::vector<std::tuple<BundlePoint, GroupElement, AlgebraElement>> samples;
  for (int i = 0; i < 50; ++i)
    samples.emplace_back(sample_point(*bundle, rng, rng.integer(0, 3)), rng.group(GroupKind::R2),
                         rng.algebra(GroupKind::R2, 1.0));
  const std::vector<Imag> central{Imag(1.0), Imag(-2.5)};

  const auto zero = splitting_roundtrip(model, l, shift_of({0.0, 0.0}), samples, central);
  EXPECT_EQ(zero.relation, 0.0);
  EXPECT_LT(zero.central, 1e-15);

  const auto r = splitting_roundtrip(model, l, shift_of({1.0, 0.0}), samples, central);
  EXPECT_LT(r.central, 1e-15);
  EXPECT_LT(r.relation, 1e-10);
  EXPECT_LT(r.equivariance, 1e-10);
}

TEST(Bundles, ZeroCochainHasZeroResiduals) {
  const auto bundle = random_gauge(GroupKind::SU2, 63);
  SampleRng rng(64);
  const auto r = cech_deligne_residual(zero_cochain(), *bundle, rng, 5, 1e-3);
  EXPECT_EQ(r.max(), 0.0);
  ASSERT_TRUE(r.delta_z.has_value());
}

TEST(Bundles, CoboundaryPassesDeligneResidual) {
  const auto bundle = random_gauge(GroupKind::SU2, 65);
  SampleRng coeffs(66);
  std::vector<Eigen::VectorXd> hc(16);
  std::vector<Eigen::MatrixXd> kc(4);
  for (auto& c : hc) c = coeffs.vector(4, 1.0);
  for (auto& c : kc) c = coeffs.vector(12, 1.0).reshaped(3, 4);
  DeligneOneCochain c;
  c.h = [hc](const std::array<int, 2>& s, int, const Eigen::VectorXd& x) {
    const Eigen::VectorXd& a = hc[static_cast<std::size_t>(4 * s[0] + s[1])];
    return std::polar(1.0, a(0) + a(1) * x(0) + a(2) * std::sin(x(1)) + a(3) * x(0) * x(2));
  };
  c.k = [kc](int a, int, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const Eigen::MatrixXd& m = kc[static_cast<std::size_t>(a)];
    Eigen::VectorXd feats(4);
    feats << 1.0, x(0) * x(1), std::cos(x(2)), x(1);
    return Imag(u.dot(m * feats));
  };
  SampleRng rng(67);
  const auto r = cech_deligne_residual(coboundary(c, 1e-3), *bundle, rng, 10, 1e-3);
  EXPECT_LT(r.max(), 1e-6);
  EXPECT_LT(*r.delta_z, 1e-12);
}
