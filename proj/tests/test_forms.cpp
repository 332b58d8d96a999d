#include <gtest/gtest.h>

#include <cmath>

#include "gerbekit/forms.hpp"
#include "gerbekit/mapping.hpp"
#include "gerbekit/rng.hpp"

using namespace gerbekit;

namespace {

using Vec = Eigen::VectorXd;
using Form = DifferentialForm<EuclideanSpace, double>;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Random quadratic polynomial 1-form Σ_i P_i(x) dx^i on Rⁿ, with its exact exterior derivative.
struct PolyOneForm {
  int n;
  std::vector<Vec> linear;            // ∂P_i/∂x at 0 is linear[i]
  std::vector<Eigen::MatrixXd> quad;  // P_i(x) = c_i + linear[i]·x + xᵀ quad[i] x
  Vec constant;

  PolyOneForm(int dim, SampleRng& rng) : n(dim), constant(rng.vector(dim, 1.0)) {
    for (int i = 0; i < n; ++i) {
      linear.push_back(rng.vector(n, 1.0));
      Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) q(a, b) = 0.5 * rng.normal();
      quad.push_back(q);
    }
  }
  double coeff(int i, const Vec& x) const { return constant(i) + linear[i].dot(x) + x.dot(quad[i] * x); }
  Vec grad(int i, const Vec& x) const { return linear[i] + (quad[i] + quad[i].transpose()) * x; }
  Form form() const {
    return {1, [*this](const Vec& x, const std::vector<Vec>& v) {
              double s = 0;
              for (int i = 0; i < n; ++i) s += coeff(i, x) * v[0](i);
              return s;
            }};
  }
  // dα(u, w) = Σ_i (∇P_i·u) w_i − (∇P_i·w) u_i
  double d(const Vec& x, const Vec& u, const Vec& w) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += grad(i, x).dot(u) * w(i) - grad(i, x).dot(w) * u(i);
    return s;
  }
};

}  // namespace

TEST(Forms, DerivativeOfConstantFunctionVanishes) {
  const EuclideanSpace r3("R3", 3);
  const Form c{0, [](const Vec&, const std::vector<Vec>&) { return 2.5; }};
  EXPECT_EQ(exterior_derivative(r3, c, vec({0.1, 0.2, 0.3}), {vec({1, 2, 3})}, 1e-3), 0.0);
}

TEST(Forms, DerivativeOfXdY) {
  const EuclideanSpace r2("R2", 2);
  const Form xdy{1, [](const Vec& x, const std::vector<Vec>& v) { return x(0) * v[0](1); }};
  SampleRng rng(1);
  for (int i = 0; i < 10; ++i) {
    const Vec p = rng.vector(2, 1.0);
    EXPECT_NEAR(exterior_derivative(r2, xdy, p, {vec({1, 0}), vec({0, 1})}, 1e-3), 1.0, 1e-6);
  }
}

TEST(Forms, DerivativeMatchesSymbolicOracle) {
  SampleRng rng(2);
  const EuclideanSpace r4("R4", 4);
  for (int trial = 0; trial < 10; ++trial) {
    const PolyOneForm a(4, rng);
    const Vec x = rng.vector(4, 0.5);
    const Vec u = rng.vector(4, 1.0);
    const Vec w = rng.vector(4, 1.0);
    EXPECT_NEAR(exterior_derivative(r4, a.form(), x, {u, w}, 1e-3), a.d(x, u, w), 1e-8);
  }
}

TEST(Forms, DerivativeSquaredVanishes) {
  SampleRng rng(3);
  const EuclideanSpace r3("R3", 3);
  for (int trial = 0; trial < 5; ++trial) {
    const PolyOneForm a(3, rng);
    const Form alpha = a.form();
    for (double h : {1e-2, 5e-3}) {
      const auto dd = exterior_derivative(r3, exterior_derivative(r3, alpha, h), h);
      EXPECT_LT(std::abs(dd(rng.vector(3, 0.5), {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})})), 1e-6);
    }
  }
}

TEST(Forms, ClearanceErrorNamesTheChart) {
  const EuclideanSpace half("upper-half", 2, [](const Vec& x) { return x(1); });
  const Form f{0, [](const Vec& x, const std::vector<Vec>&) { return x(0); }};
  try {
    exterior_derivative(half, f, vec({0.0, 1e-4}), {vec({0, 1})}, 1e-3);
    FAIL() << "expected a clearance error";
  } catch (const ChartClearanceError& e) {
    EXPECT_EQ(e.chart(), "upper-half");
  }
}

TEST(Forms, WedgeIsAlternatingAndMultilinear) {
  SampleRng rng(4);
  const PolyOneForm a(4, rng);
  const PolyOneForm b(4, rng);
  const PolyOneForm c(4, rng);
  const auto mul = [](double x, double y) { return x * y; };
  const auto ab = wedge<EuclideanSpace>(a.form(), b.form(), mul);
  const auto abc = wedge<EuclideanSpace>(ab, c.form(), mul);
  const Vec x = rng.vector(4, 0.5);
  std::vector<Vec> v;
  for (int i = 0; i < 3; ++i) v.push_back(rng.vector(4, 1.0));
  const double base = abc(x, v);
  EXPECT_NEAR(abc(x, {v[1], v[0], v[2]}), -base, 1e-9);
  EXPECT_NEAR(abc(x, {v[0], v[2], v[1]}), -base, 1e-9);
  EXPECT_NEAR(abc(x, {v[2], v[1], v[0]}), -base, 1e-9);
  const Vec extra = rng.vector(4, 1.0);
  EXPECT_NEAR(abc(x, {v[0] + 2.0 * extra, v[1], v[2]}), base + 2.0 * abc(x, {extra, v[1], v[2]}), 1e-9);
  // (α∧β)(u, w) = α(u)β(w) − α(w)β(u)
  const double ua = a.form()(x, {v[0]}), wa = a.form()(x, {v[1]});
  const double ub = b.form()(x, {v[0]}), wb = b.form()(x, {v[1]});
  EXPECT_NEAR(ab(x, {v[0], v[1]}), ua * wb - wa * ub, 1e-12);
}

TEST(Forms, PullbackCommutesWithDerivative) {
  // Quaternionic inversion x ↦ x̄/|x|², a chart transition of S⁴.
  const auto inv = [](const Vec& x) -> Vec {
    Vec y = x / x.squaredNorm();
    y.tail<3>() *= -1.0;
    return y;
  };
  SampleRng rng(5);
  const EuclideanSpace r4("R4", 4);
  const PolyOneForm a(4, rng);
  const auto push = [inv](const Vec& x, const Vec& v) -> Vec { return jacobian(inv, x, 1e-3) * v; };
  const auto pulled = pullback<EuclideanSpace, EuclideanSpace, double>(a.form(), inv, push);
  const double h = 1e-4;
  for (int i = 0; i < 5; ++i) {
    Vec x = rng.vector(4, 1.0);
    x *= 1.2 / x.norm();
    const Vec u = rng.vector(4, 1.0);
    const Vec w = rng.vector(4, 1.0);
    const double lhs = exterior_derivative(r4, pulled, x, {u, w}, h);
    const double rhs = a.d(inv(x), push(x, u), push(x, w));
    EXPECT_NEAR(lhs, rhs, 1e-5);
  }
}

TEST(Forms, CircleTransgressionOfExactFormVanishes) {
  const EuclideanSpace r2("R2", 2);
  // dφ for φ = x² y + sin(x)
  const Form dphi{1, [](const Vec& x, const std::vector<Vec>& v) {
                    return (2 * x(0) * x(1) + std::cos(x(0))) * v[0](0) + x(0) * x(0) * v[0](1);
                  }};
  const auto tau = transgress_loop(r2, dphi);
  std::vector<double> err;
  for (int n : {64, 128, 256}) {
    Loop<Vec> p;
    for (int j = 0; j < n; ++j) {
      const double t = 2 * M_PI * j / n;
      p.samples.push_back(vec({0.3 + std::cos(t) + 0.2 * std::sin(2 * t), 0.5 * std::sin(t)}));
    }
    err.push_back(std::abs(tau(p, {})));
  }
  // The velocity is a sixth-order central difference.
  EXPECT_LT(err[2], 1e-8);
  EXPECT_GT(std::log2(err[0] / err[1]), 5.5);
}

TEST(Forms, CircleTransgressionOfAngleForm) {
  const EuclideanSpace plane("R2-minus-origin", 2, [](const Vec& x) { return x.norm(); });
  const Form angle{1, [](const Vec& x, const std::vector<Vec>& v) {
                     return (x(0) * v[0](1) - x(1) * v[0](0)) / x.squaredNorm();
                   }};
  for (int n : {64, 256}) {
    Loop<Vec> p;
    for (int j = 0; j < n; ++j) p.samples.push_back(vec({std::cos(2 * M_PI * j / n), std::sin(2 * M_PI * j / n)}));
    const double dt = 2 * M_PI / n;
    EXPECT_NEAR(transgress_loop(plane, angle)(p, {}), 2 * M_PI, 2 * M_PI * dt * dt / 6 * 1.01);
  }
}

TEST(Forms, DiskTransgressionOfAreaForm) {
  const EuclideanSpace r2("R2", 2);
  const Form area{2, [](const Vec&, const std::vector<Vec>& v) { return v[0](0) * v[1](1) - v[0](1) * v[1](0); }};
  const auto grid = std::make_shared<const DiskGrid>(64, 256);
  const auto identity = sample_disk<Vec>(grid, [](const Eigen::Vector2d& s) -> Vec { return s; });
  const double polygon = 0.5 * 256 * std::sin(2 * M_PI / 256);
  EXPECT_NEAR(transgress_disk(r2, area)(identity, {}), polygon, 1e-12);
  EXPECT_NEAR(transgress_disk(r2, area)(identity, {}), M_PI, 1e-3);
}

namespace {

struct DiskFixture {
  std::shared_ptr<const DiskGrid> grid;
  DiskMap<Vec> map;
  DiskMap<Vec> tangent;
};

DiskFixture random_disk(SampleRng& rng, int rings, int sectors) {
  DiskFixture f;
  f.grid = std::make_shared<const DiskGrid>(rings, sectors);
  const Vec c = rng.vector(3, 0.3);
  Eigen::MatrixXd a(3, 4);
  Eigen::MatrixXd b(3, 3);
  for (int i = 0; i < 4; ++i) a.col(i) = rng.vector(3, 0.3);
  for (int i = 0; i < 3; ++i) b.col(i) = rng.vector(3, 0.3);
  f.map = sample_disk<Vec>(f.grid, [&](const Eigen::Vector2d& s) -> Vec {
    const double x = s(0), y = s(1);
    return c + a.col(0) * x + a.col(1) * y + a.col(2) * (x * x - y * y) + a.col(3) * x * y;
  });
  f.tangent = sample_disk<Vec>(f.grid, [&](const Eigen::Vector2d& s) -> Vec {
    return b.col(0) + b.col(1) * s(0) + b.col(2) * s(0) * s(1);
  });
  return f;
}

Form polynomial_two_form() {
  // α = x y dx∧dy + z² dy∧dz + (1 + x) dz∧dx
  return {2, [](const Vec& p, const std::vector<Vec>& v) {
            const Vec& u = v[0];
            const Vec& w = v[1];
            return p(0) * p(1) * (u(0) * w(1) - u(1) * w(0)) + p(2) * p(2) * (u(1) * w(2) - u(2) * w(1)) +
                   (1 + p(0)) * (u(2) * w(0) - u(0) * w(2));
          }};
}

}  // namespace

TEST(Forms, StokesOnTheDisk) {
  SampleRng rng(6);
  const EuclideanSpace r3("R3", 3);
  const auto f = random_disk(rng, 64, 256);
  EXPECT_LT(stokes_residual(r3, polynomial_two_form(), f.map, {f.tangent}, 1e-3), 1e-4);
}

TEST(Forms, StokesOnTheCircleForClosedForms) {
  const EuclideanSpace r3("R3", 3);
  const Form closed{2, [](const Vec& p, const std::vector<Vec>& v) {
                      return (1 + p(0) * p(0) * p(1)) * (v[0](0) * v[1](1) - v[0](1) * v[1](0));
                    }};
  SampleRng rng(7);
  Loop<Vec> p;
  Loop<Vec> t;
  Loop<Vec> s;
  for (int j = 0; j < 256; ++j) {
    const double th = 2 * M_PI * j / 256;
    p.samples.push_back(vec({std::cos(th), 0.5 * std::sin(th), 0.2 * std::sin(2 * th)}));
    t.samples.push_back(vec({0.3 * std::sin(th), 0.1, std::cos(3 * th)}));
    s.samples.push_back(vec({0.2, std::cos(2 * th), 0.4 * std::sin(th)}));
  }
  const LoopSpace<EuclideanSpace> loops{r3};
  const auto tau = transgress_loop(r3, closed);
  EXPECT_LT(std::abs(exterior_derivative(loops, tau, p, {t, s}, 1e-3)), 1e-6);
}

TEST(Forms, StokesDefectIsLinear) {
  SampleRng rng(8);
  const EuclideanSpace r3("R3", 3);
  const auto f = random_disk(rng, 16, 32);
  const Form alpha = polynomial_two_form();
  const Form twice{2, [alpha](const Vec& p, const std::vector<Vec>& v) { return 2.0 * alpha(p, v); }};
  const double one = stokes_defect(r3, alpha, f.map, {f.tangent}, 1e-3);
  const double two = stokes_defect(r3, twice, f.map, {f.tangent}, 1e-3);
  EXPECT_LT(std::abs(two - 2.0 * one), 1e-10);
}

TEST(Forms, TransgressionIsLinear) {
  SampleRng rng(9);
  const EuclideanSpace r3("R3", 3);
  const PolyOneForm a(3, rng);
  const PolyOneForm b(3, rng);
  const Form sum{1, [a, b](const Vec& x, const std::vector<Vec>& v) {
                   return a.form()(x, v) - 3.0 * b.form()(x, v);
                 }};
  Loop<Vec> p;
  for (int j = 0; j < 64; ++j) p.samples.push_back(rng.vector(3, 1.0));
  const double lhs = transgress_loop(r3, sum)(p, {});
  const double rhs = transgress_loop(r3, a.form())(p, {}) - 3.0 * transgress_loop(r3, b.form())(p, {});
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(Forms, DegreeChecks) {
  const EuclideanSpace r3("R3", 3);
  const Form f{0, [](const Vec& x, const std::vector<Vec>&) { return x(0); }};
  EXPECT_THROW(transgress_loop(r3, f), DegreeError);
  EXPECT_THROW(f(vec({0, 0, 0}), {vec({1, 0, 0})}), DegreeError);
}
