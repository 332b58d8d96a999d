#include <gtest/gtest.h>

#include <cmath>

#include "gerbekit/lie.hpp"
#include "gerbekit/rng.hpp"

using namespace gerbekit;

namespace {

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k + (1 - std::cos(angle)) * k * k;
}

Eigen::Matrix2cd series_exp(const Eigen::Matrix2cd& x) {
  Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sum = term;
  for (int n = 1; n < 40; ++n) {
    term = term * x / static_cast<double>(n);
    sum += term;
  }
  return sum;
}

const GroupKind kAllKinds[] = {GroupKind::SU2, GroupKind::U2, GroupKind::R2};

}  // namespace

TEST(Lie, AdjointOfIdentityIsIdentity) {
  SampleRng rng(1);
  for (GroupKind kind : kAllKinds) {
    const auto x = rng.algebra(kind, 1.0);
    EXPECT_LT((adjoint(GroupElement::identity(kind), x) - x).norm(), 1e-15);
  }
}

TEST(Lie, AbelianAdjointIsTrivial) {
  SampleRng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto g = rng.group(GroupKind::R2);
    const auto x = rng.algebra(GroupKind::R2, 1.0);
    EXPECT_EQ((adjoint(g, x) - x).norm(), 0.0);
  }
}

TEST(Lie, Su2AdjointMatchesRotationMatrix) {
  const auto g = exp(AlgebraElement::su2(Eigen::Vector3d(0, 0, M_PI / 4)));
  const auto e1 = AlgebraElement::su2(Eigen::Vector3d(1, 0, 0));
  const Eigen::Vector3d oracle = rodrigues(Eigen::Vector3d::UnitZ(), M_PI / 2) * Eigen::Vector3d::UnitX();
  EXPECT_LT((adjoint(g, e1).as_su2() - oracle).norm(), 1e-14);
  EXPECT_LT((oracle - Eigen::Vector3d::UnitY()).norm(), 1e-15);

  SampleRng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d v = rng.vector(3, 1.0);
    const Eigen::Vector3d x = rng.vector(3, 1.0);
    const Eigen::Vector3d expected = rodrigues(v.normalized(), 2 * v.norm()) * x;
    EXPECT_LT((adjoint(exp(AlgebraElement::su2(v)), AlgebraElement::su2(x)).as_su2() - expected).norm(), 1e-12);
  }
}

TEST(Lie, AdjointVariantMismatchThrows) {
  EXPECT_THROW(adjoint(GroupElement::identity(GroupKind::SU2), AlgebraElement::zero(GroupKind::R2)), VariantMismatch);
  EXPECT_THROW(bracket(AlgebraElement::zero(GroupKind::U2), AlgebraElement::zero(GroupKind::SU2)), VariantMismatch);
}

TEST(Lie, ExpOfZeroIsIdentity) {
  for (GroupKind kind : kAllKinds)
    EXPECT_EQ(distance(exp(AlgebraElement::zero(kind)), GroupElement::identity(kind)), 0.0);
}

TEST(Lie, R2ExpIsIdentityMap) {
  const auto g = exp(AlgebraElement::r2(Eigen::Vector2d(0.3, -1.7)));
  EXPECT_EQ(g.as_r2(), Eigen::Vector2d(0.3, -1.7));
}

TEST(Lie, Su2ExpMatchesPowerSeries) {
  const auto x = AlgebraElement::su2(Eigen::Vector3d(0, 0, M_PI / 2));
  EXPECT_LT((exp(x).matrix() - series_exp(x.matrix())).cwiseAbs().maxCoeff(), 1e-12);
  SampleRng rng(4);
  for (GroupKind kind : {GroupKind::SU2, GroupKind::U2}) {
    for (int i = 0; i < 20; ++i) {
      const auto y = rng.algebra(kind, 1.0);
      EXPECT_LT((exp(y).matrix() - series_exp(y.matrix())).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Lie, LogInvertsExp) {
  SampleRng rng(5);
  for (GroupKind kind : kAllKinds) {
    for (int i = 0; i < 50; ++i) {
      const auto x = rng.algebra(kind, 0.5);
      EXPECT_LT((log(exp(x)) - x).norm(), 1e-12);
    }
  }
}

TEST(Lie, ProductsStayOnTheGroup) {
  SampleRng rng(6);
  GroupElement q = GroupElement::identity(GroupKind::SU2);
  GroupElement u = GroupElement::identity(GroupKind::U2);
  for (int i = 0; i < 1000; ++i) {
    q = q * rng.group(GroupKind::SU2);
    u = u * rng.group(GroupKind::U2);
  }
  EXPECT_LT(std::abs(q.as_su2().norm() - 1.0), 1e-12);
  EXPECT_LT((u.matrix() * u.matrix().adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  const auto x = rng.algebra(GroupKind::U2, 1.0).matrix();
  EXPECT_LT((x + x.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lie, QuaternionRepresentationIsAHomomorphism) {
  SampleRng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto a = rng.group(GroupKind::SU2);
    const auto b = rng.group(GroupKind::SU2);
    EXPECT_LT(((a * b).matrix() - a.matrix() * b.matrix()).cwiseAbs().maxCoeff(), 1e-14);
    const auto x = rng.algebra(GroupKind::SU2, 1.0);
    const auto y = rng.algebra(GroupKind::SU2, 1.0);
    const Eigen::Matrix2cd comm = x.matrix() * y.matrix() - y.matrix() * x.matrix();
    EXPECT_LT((bracket(x, y).matrix() - comm).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(trace_product(x, y), (x.matrix() * y.matrix()).trace().real(), 1e-14);
  }
}

TEST(Lie, AdjointIsAGroupAction) {
  for (GroupKind kind : kAllKinds) {
    SampleRng rng(8, to_string(kind));
    for (int i = 0; i < 100; ++i) {
      const auto g = rng.group(kind);
      const auto h = rng.group(kind);
      const auto x = rng.algebra(kind, 1.0);
      EXPECT_LT((adjoint(g * h, x) - adjoint(g, adjoint(h, x))).norm(), 1e-10);
    }
  }
}

TEST(Lie, AdjointPreservesBracket) {
  for (GroupKind kind : kAllKinds) {
    SampleRng rng(9, to_string(kind));
    for (int i = 0; i < 100; ++i) {
      const auto g = rng.group(kind);
      const auto x = rng.algebra(kind, 1.0);
      const auto y = rng.algebra(kind, 1.0);
      EXPECT_LT((adjoint(g, bracket(x, y)) - bracket(adjoint(g, x), adjoint(g, y))).norm(), 1e-10);
    }
  }
}

TEST(Lie, LeftDexpMatchesFiniteDifference) {
  for (GroupKind kind : kAllKinds) {
    SampleRng rng(10, to_string(kind));
    for (int i = 0; i < 20; ++i) {
      const auto u = rng.algebra(kind, 0.7);
      const auto y = rng.algebra(kind, 1.0);
      const double h = 1e-5;
      const auto fd = (log(exp(u).inverse() * exp(u + h * y)) - log(exp(u).inverse() * exp(u - h * y))) / (2 * h);
      EXPECT_LT((left_dexp(u, y) - fd).norm(), 1e-8);
    }
  }
}

TEST(Lie, McPullbackOfConstantLoopVanishes) {
  const GroupLoop path(64, exp(AlgebraElement::su2(Eigen::Vector3d(0.3, 0.1, -0.2))));
  EXPECT_LT(norm(mc_pullback(path)), 1e-15);
}

TEST(Lie, McPullbackOfOneParameterSubgroup) {
  for (GroupKind kind : {GroupKind::SU2, GroupKind::U2}) {
    SampleRng rng(11, to_string(kind));
    const auto x = rng.algebra(kind, 0.4);
    for (int n : {16, 64}) {
      GroupLoop path;
      for (int j = 0; j < n; ++j) path.samples.push_back(exp((2 * M_PI * j / n) * x));
      // exp(2πX) is not the identity for generic X, so only interior samples see a smooth path.
      const double dt = path.step();
      for (int j = 3; j < n - 3; ++j) EXPECT_LT((mc_pullback(path, j) - x).norm(), 1e-12 + dt * dt);
    }
  }
}

TEST(Lie, McPullbackOfAbelianCircle) {
  for (int n : {32, 64, 128}) {
    GroupLoop path;
    for (int j = 0; j < n; ++j) {
      const double t = 2 * M_PI * j / n;
      path.samples.push_back(GroupElement::r2(Eigen::Vector2d(std::cos(t), std::sin(t))));
    }
    const double dt = path.step();
    for (int j = 0; j < n; ++j) {
      const double t = path.theta(j);
      const Eigen::Vector2d expected(-std::sin(t), std::cos(t));
      EXPECT_LT((mc_pullback(path, j).as_r2() - expected).norm(), dt * dt / 6 + 1e-14);
    }
  }
}

TEST(Lie, McPullbackRejectsShortLoops) {
  const GroupLoop path(4, GroupElement::identity(GroupKind::SU2));
  EXPECT_THROW(mc_pullback(path, 0), InvalidArgument);
}

TEST(Lie, McPullbackIsLeftInvariant) {
  SampleRng rng(12);
  const auto a = rng.algebra(GroupKind::SU2, 0.4);
  const auto b = rng.algebra(GroupKind::SU2, 0.4);
  const auto c = rng.group(GroupKind::SU2);
  for (int n : {32, 64, 128}) {
    GroupLoop path;
    GroupLoop moved;
    for (int j = 0; j < n; ++j) {
      const double t = 2 * M_PI * j / n;
      const auto g = exp(std::cos(t) * a + std::sin(2 * t) * b);
      path.samples.push_back(g);
      moved.samples.push_back(c * g);
    }
    EXPECT_LT(norm(mc_pullback(moved) - mc_pullback(path)), 1e-12);
  }
}

TEST(Lie, SmoothnessBudget) {
  GroupLoop path;
  const int n = 64;
  for (int j = 0; j < n; ++j)
    path.samples.push_back(exp(AlgebraElement::su2(Eigen::Vector3d(0.3 * std::cos(2 * M_PI * j / n), 0, 0))));
  const double dt = path.step();
  EXPECT_LT(max_second_difference(path), 0.3 * dt * dt * 1.01);
}
