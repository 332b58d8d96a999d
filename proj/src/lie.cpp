#include "gerbekit/lie.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace gerbekit {

namespace {

using cd = std::complex<double>;
constexpr cd I1{0.0, 1.0};

Eigen::Matrix2cd quaternion_matrix(double a, double b, double c, double d) {
  Eigen::Matrix2cd m;
  m << cd(a, b), cd(c, d), cd(-c, d), cd(a, -b);
  return m;
}

Eigen::Quaterniond pure(const Eigen::Vector3d& v) { return Eigen::Quaterniond(0.0, v.x(), v.y(), v.z()); }

Eigen::Matrix2cd u2_exp(const Eigen::Matrix2cd& x) {
  const Eigen::Matrix2cd h = -I1 * x;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(0.5 * (h + h.adjoint()));
  Eigen::Vector2cd phases;
  for (int i = 0; i < 2; ++i) phases(i) = std::exp(I1 * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix2cd u2_log(const Eigen::Matrix2cd& g) {
  Eigen::ComplexSchur<Eigen::Matrix2cd> schur(g);
  const Eigen::Matrix2cd& q = schur.matrixU();
  const Eigen::Matrix2cd& t = schur.matrixT();
  Eigen::Vector2cd logs;
  for (int i = 0; i < 2; ++i) logs(i) = I1 * std::arg(t(i, i));
  Eigen::Matrix2cd x = q * logs.asDiagonal() * q.adjoint();
  return 0.5 * (x - x.adjoint());
}

Eigen::Matrix2cd anti_hermitian_part(const Eigen::Matrix2cd& m) { return 0.5 * (m - m.adjoint()); }

// Closed form of Σ (-ad_u)^n / (n+1)! for su(2) with ad_u = 2 u×.
Eigen::Vector3d su2_dexp(const Eigen::Vector3d& u, const Eigen::Vector3d& y) {
  const double r = u.norm();
  if (r < 1e-8) return y - u.cross(y) + (2.0 / 3.0) * u.cross(u.cross(y));
  const double a = 2.0 * r;
  const Eigen::Vector3d n = u / r;
  const Eigen::Vector3d ky = n.cross(y);
  const Eigen::Vector3d kky = n.cross(ky);
  return y - ((1.0 - std::cos(a)) / a) * ky + ((a - std::sin(a)) / a) * kky;
}

}  // namespace

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::SU2:
      return "su2";
    case GroupKind::U2:
      return "u2";
    case GroupKind::R2:
      return "r2";
  }
  return "?";
}

int coordinate_count(GroupKind kind) {
  switch (kind) {
    case GroupKind::SU2:
      return 3;
    case GroupKind::U2:
      return 4;
    case GroupKind::R2:
      return 2;
  }
  return 0;
}

void require_same_kind(GroupKind a, GroupKind b, const char* where) {
  if (a != b) {
    throw VariantMismatch(std::string(where) + ": " + std::string(to_string(a)) + " vs " +
                          std::string(to_string(b)));
  }
}

AlgebraElement AlgebraElement::u2(const Eigen::Matrix2cd& m) { return AlgebraElement(Payload(m)); }

AlgebraElement AlgebraElement::zero(GroupKind kind) {
  switch (kind) {
    case GroupKind::SU2:
      return su2(Eigen::Vector3d::Zero());
    case GroupKind::U2:
      return u2(Eigen::Matrix2cd::Zero());
    case GroupKind::R2:
      return r2(Eigen::Vector2d::Zero());
  }
  return {};
}

AlgebraElement AlgebraElement::from_coordinates(GroupKind kind, const Eigen::VectorXd& c) {
  if (c.size() != coordinate_count(kind)) throw InvalidArgument("from_coordinates: wrong coordinate count");
  switch (kind) {
    case GroupKind::SU2:
      return su2(c.head<3>());
    case GroupKind::U2: {
      Eigen::Matrix2cd m;
      m << cd(0, c(0)), cd(c(1), c(2)), cd(-c(1), c(2)), cd(0, c(3));
      return u2(m);
    }
    case GroupKind::R2:
      return r2(c.head<2>());
  }
  return {};
}

const Eigen::Vector3d& AlgebraElement::as_su2() const {
  require_same_kind(kind(), GroupKind::SU2, "AlgebraElement::as_su2");
  return std::get<0>(payload_);
}
const Eigen::Matrix2cd& AlgebraElement::as_u2() const {
  require_same_kind(kind(), GroupKind::U2, "AlgebraElement::as_u2");
  return std::get<1>(payload_);
}
const Eigen::Vector2d& AlgebraElement::as_r2() const {
  require_same_kind(kind(), GroupKind::R2, "AlgebraElement::as_r2");
  return std::get<2>(payload_);
}

Eigen::VectorXd AlgebraElement::coordinates() const {
  switch (kind()) {
    case GroupKind::SU2:
      return as_su2();
    case GroupKind::U2: {
      const auto& m = as_u2();
      Eigen::VectorXd c(4);
      c << m(0, 0).imag(), 0.5 * (m(0, 1).real() - m(1, 0).real()), 0.5 * (m(0, 1).imag() + m(1, 0).imag()),
          m(1, 1).imag();
      return c;
    }
    case GroupKind::R2:
      return as_r2();
  }
  return {};
}

Eigen::Matrix2cd AlgebraElement::matrix() const {
  switch (kind()) {
    case GroupKind::SU2: {
      const auto& v = as_su2();
      return quaternion_matrix(0.0, v.x(), v.y(), v.z());
    }
    case GroupKind::U2:
      return as_u2();
    case GroupKind::R2:
      break;
  }
  throw VariantMismatch("AlgebraElement::matrix: R2 has no matrix representation");
}

double AlgebraElement::norm() const { return coordinates().lpNorm<Eigen::Infinity>(); }

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same_kind(kind(), o.kind(), "AlgebraElement +");
  std::visit(
      [&](auto& a) {
        using T = std::decay_t<decltype(a)>;
        a += std::get<T>(o.payload_);
      },
      payload_);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same_kind(kind(), o.kind(), "AlgebraElement -");
  std::visit(
      [&](auto& a) {
        using T = std::decay_t<decltype(a)>;
        a -= std::get<T>(o.payload_);
      },
      payload_);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double s) {
  std::visit([&](auto& a) { a *= s; }, payload_);
  return *this;
}

GroupElement GroupElement::su2(const Eigen::Quaterniond& q) { return GroupElement(Payload(q.normalized())); }
GroupElement GroupElement::u2(const Eigen::Matrix2cd& m) { return GroupElement(Payload(m)); }

GroupElement GroupElement::identity(GroupKind kind) {
  switch (kind) {
    case GroupKind::SU2:
      return su2(Eigen::Quaterniond::Identity());
    case GroupKind::U2:
      return u2(Eigen::Matrix2cd::Identity());
    case GroupKind::R2:
      return r2(Eigen::Vector2d::Zero());
  }
  return {};
}

const Eigen::Quaterniond& GroupElement::as_su2() const {
  require_same_kind(kind(), GroupKind::SU2, "GroupElement::as_su2");
  return std::get<0>(payload_);
}
const Eigen::Matrix2cd& GroupElement::as_u2() const {
  require_same_kind(kind(), GroupKind::U2, "GroupElement::as_u2");
  return std::get<1>(payload_);
}
const Eigen::Vector2d& GroupElement::as_r2() const {
  require_same_kind(kind(), GroupKind::R2, "GroupElement::as_r2");
  return std::get<2>(payload_);
}

Eigen::Matrix2cd GroupElement::matrix() const {
  switch (kind()) {
    case GroupKind::SU2: {
      const auto& q = as_su2();
      return quaternion_matrix(q.w(), q.x(), q.y(), q.z());
    }
    case GroupKind::U2:
      return as_u2();
    case GroupKind::R2:
      break;
  }
  throw VariantMismatch("GroupElement::matrix: R2 has no matrix representation");
}

GroupElement GroupElement::inverse() const {
  switch (kind()) {
    case GroupKind::SU2:
      return GroupElement(Payload(as_su2().conjugate()));
    case GroupKind::U2:
      return GroupElement(Payload(Eigen::Matrix2cd(as_u2().adjoint())));
    case GroupKind::R2:
      return GroupElement(Payload(Eigen::Vector2d(-as_r2())));
  }
  return {};
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  require_same_kind(a.kind(), b.kind(), "GroupElement *");
  switch (a.kind()) {
    case GroupKind::SU2:
      return GroupElement::su2(a.as_su2() * b.as_su2());
    case GroupKind::U2:
      return GroupElement::u2(a.as_u2() * b.as_u2());
    case GroupKind::R2:
      return GroupElement::r2(a.as_r2() + b.as_r2());
  }
  return {};
}

double distance(const GroupElement& a, const GroupElement& b) {
  require_same_kind(a.kind(), b.kind(), "distance");
  switch (a.kind()) {
    case GroupKind::SU2:
      return (a.as_su2().coeffs() - b.as_su2().coeffs()).lpNorm<Eigen::Infinity>();
    case GroupKind::U2:
      return (a.as_u2() - b.as_u2()).cwiseAbs().maxCoeff();
    case GroupKind::R2:
      return (a.as_r2() - b.as_r2()).lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

GroupElement exp(const AlgebraElement& x) {
  switch (x.kind()) {
    case GroupKind::SU2: {
      const auto& v = x.as_su2();
      const double a = v.norm();
      const double s = a < 1e-12 ? 1.0 - a * a / 6.0 : std::sin(a) / a;
      return GroupElement::su2(Eigen::Quaterniond(std::cos(a), s * v.x(), s * v.y(), s * v.z()));
    }
    case GroupKind::U2:
      return GroupElement::u2(u2_exp(x.as_u2()));
    case GroupKind::R2:
      return GroupElement::r2(x.as_r2());
  }
  return {};
}

AlgebraElement log(const GroupElement& g) {
  switch (g.kind()) {
    case GroupKind::SU2: {
      const auto& q = g.as_su2();
      const Eigen::Vector3d v = q.vec();
      const double s = v.norm();
      const double a = std::atan2(s, q.w());
      const double f = (s < 1e-12 && q.w() > 0.0) ? 1.0 / q.w() : a / std::max(s, 1e-300);
      return AlgebraElement::su2(f * v);
    }
    case GroupKind::U2:
      return AlgebraElement::u2(u2_log(g.as_u2()));
    case GroupKind::R2:
      return AlgebraElement::r2(g.as_r2());
  }
  return {};
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  require_same_kind(g.kind(), x.kind(), "adjoint");
  switch (g.kind()) {
    case GroupKind::SU2: {
      const auto& q = g.as_su2();
      return AlgebraElement::su2((q * pure(x.as_su2()) * q.conjugate()).vec());
    }
    case GroupKind::U2: {
      const auto& m = g.as_u2();
      return AlgebraElement::u2(anti_hermitian_part(m * x.as_u2() * m.adjoint()));
    }
    case GroupKind::R2:
      return x;
  }
  return {};
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_kind(x.kind(), y.kind(), "bracket");
  switch (x.kind()) {
    case GroupKind::SU2:
      return AlgebraElement::su2(2.0 * x.as_su2().cross(y.as_su2()));
    case GroupKind::U2: {
      const auto& a = x.as_u2();
      const auto& b = y.as_u2();
      return AlgebraElement::u2(anti_hermitian_part(a * b - b * a));
    }
    case GroupKind::R2:
      return AlgebraElement::zero(GroupKind::R2);
  }
  return {};
}

double pairing(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.kind() == GroupKind::R2) {
    require_same_kind(x.kind(), y.kind(), "pairing");
    return x.as_r2().dot(y.as_r2());
  }
  return -0.5 * trace_product(x, y);
}

double trace_product(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_kind(x.kind(), y.kind(), "trace_product");
  switch (x.kind()) {
    case GroupKind::SU2:
      return -2.0 * x.as_su2().dot(y.as_su2());
    case GroupKind::U2:
      return (x.as_u2() * y.as_u2()).trace().real();
    case GroupKind::R2:
      break;
  }
  throw VariantMismatch("trace_product: undefined on R2");
}

AlgebraElement left_dexp(const AlgebraElement& u, const AlgebraElement& y) {
  require_same_kind(u.kind(), y.kind(), "left_dexp");
  switch (u.kind()) {
    case GroupKind::SU2:
      return AlgebraElement::su2(su2_dexp(u.as_su2(), y.as_su2()));
    case GroupKind::U2: {
      AlgebraElement term = y;
      AlgebraElement sum = y;
      for (int n = 1; n < 40; ++n) {
        term = (-1.0 / (n + 1)) * bracket(u, term);
        sum += term;
        if (term.norm() < 1e-18) break;
      }
      return sum;
    }
    case GroupKind::R2:
      return y;
  }
  return {};
}

void require_loop_size(int n, const char* where) {
  if (n < kMinLoopSamples) {
    throw InvalidArgument(std::string(where) + ": loops need at least " + std::to_string(kMinLoopSamples) +
                          " samples, got " + std::to_string(n));
  }
}

AlgebraElement mc_pullback(const GroupLoop& path, int j) {
  require_loop_size(path.size(), "mc_pullback");
  const GroupElement inv = path[j].inverse();
  return loop_stencil([&](int k) { return log(inv * path[j + k]); }, path.step());
}

AlgebraLoop mc_pullback(const GroupLoop& path) {
  require_loop_size(path.size(), "mc_pullback");
  AlgebraLoop out;
  out.samples.reserve(path.samples.size());
  for (int j = 0; j < path.size(); ++j) out.samples.push_back(mc_pullback(path, j));
  return out;
}

AlgebraLoop derivative(const AlgebraLoop& x) {
  require_loop_size(x.size(), "derivative");
  AlgebraLoop out;
  out.samples.reserve(x.samples.size());
  for (int j = 0; j < x.size(); ++j) out.samples.push_back(loop_stencil([&](int k) { return x[j + k]; }, x.step()));
  return out;
}

double max_second_difference(const GroupLoop& path) {
  double m = 0.0;
  for (int j = 0; j < path.size(); ++j) {
    const GroupElement inv = path[j].inverse();
    const AlgebraElement d = log(inv * path[j + 1]) + log(inv * path[j - 1]);
    m = std::max(m, d.norm());
  }
  return m;
}

double max_second_difference(const AlgebraLoop& x) {
  double m = 0.0;
  for (int j = 0; j < x.size(); ++j) m = std::max(m, (x[j + 1] - 2.0 * x[j] + x[j - 1]).norm());
  return m;
}

GroupLoop operator*(const GroupLoop& a, const GroupLoop& b) {
  require_same_grid(a, b, "loop product");
  GroupLoop out;
  out.samples.reserve(a.samples.size());
  for (int j = 0; j < a.size(); ++j) out.samples.push_back(a[j] * b[j]);
  return out;
}

GroupLoop inverse(const GroupLoop& a) {
  GroupLoop out;
  out.samples.reserve(a.samples.size());
  for (const auto& g : a.samples) out.samples.push_back(g.inverse());
  return out;
}

GroupLoop exp(const AlgebraLoop& x) {
  GroupLoop out;
  out.samples.reserve(x.samples.size());
  for (const auto& v : x.samples) out.samples.push_back(exp(v));
  return out;
}

AlgebraLoop adjoint(const GroupLoop& g, const AlgebraLoop& x) {
  require_same_grid(g, x, "loop adjoint");
  AlgebraLoop out;
  out.samples.reserve(x.samples.size());
  for (int j = 0; j < x.size(); ++j) out.samples.push_back(adjoint(g[j], x[j]));
  return out;
}

AlgebraLoop bracket(const AlgebraLoop& x, const AlgebraLoop& y) {
  require_same_grid(x, y, "loop bracket");
  AlgebraLoop out;
  out.samples.reserve(x.samples.size());
  for (int j = 0; j < x.size(); ++j) out.samples.push_back(bracket(x[j], y[j]));
  return out;
}

AlgebraLoop operator+(const AlgebraLoop& a, const AlgebraLoop& b) {
  require_same_grid(a, b, "loop sum");
  AlgebraLoop out = a;
  for (int j = 0; j < a.size(); ++j) out[j] += b[j];
  return out;
}

AlgebraLoop operator-(const AlgebraLoop& a, const AlgebraLoop& b) {
  require_same_grid(a, b, "loop difference");
  AlgebraLoop out = a;
  for (int j = 0; j < a.size(); ++j) out[j] -= b[j];
  return out;
}

AlgebraLoop operator*(double s, const AlgebraLoop& a) {
  AlgebraLoop out = a;
  for (auto& v : out.samples) v *= s;
  return out;
}

double norm(const AlgebraLoop& x) {
  double m = 0.0;
  for (const auto& v : x.samples) m = std::max(m, v.norm());
  return m;
}

double distance(const GroupLoop& a, const GroupLoop& b) {
  require_same_grid(a, b, "loop distance");
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, distance(a[j], b[j]));
  return m;
}

}  // namespace gerbekit
