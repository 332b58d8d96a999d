#include "gerbekit/central_ext.hpp"

#include <algorithm>

namespace gerbekit {

namespace {

std::complex<double> unit(std::complex<double> z) { return z / std::abs(z); }

std::complex<double> phase_of(Imag a) { return std::polar(1.0, a.value); }

}  // namespace

double distance(const ExtendedGroupElement& a, const ExtendedGroupElement& b) {
  return std::max(distance(a.base, b.base), std::abs(a.phase - b.phase));
}

Imag LinearShift::operator()(const AlgebraElement& x) const {
  if (coefficients.size() == 0) return Imag(0.0);
  const Eigen::VectorXd c = x.coordinates();
  if (c.size() != coefficients.size()) throw InvalidArgument("split shift: coefficient count does not match algebra");
  return Imag(coefficients.dot(c));
}

LinearShift operator+(const LinearShift& a, const LinearShift& b) {
  if (a.coefficients.size() == 0) return b;
  if (b.coefficients.size() == 0) return a;
  if (a.coefficients.size() != b.coefficients.size()) throw InvalidArgument("split shifts of different sizes");
  return {a.coefficients + b.coefficients};
}

FiniteExtension FiniteExtension::trivial(GroupKind kind, LinearShift shift) {
  return FiniteExtension(Family::Trivial, kind, 0.0, std::move(shift));
}

FiniteExtension FiniteExtension::heisenberg(double kappa, LinearShift shift) {
  return FiniteExtension(Family::Heisenberg, GroupKind::R2, kappa, std::move(shift));
}

FiniteExtension FiniteExtension::shifted(const LinearShift& extra) const {
  return FiniteExtension(family_, kind_, kappa_, shift_ + extra);
}

Imag FiniteExtension::base_lie_cocycle(const AlgebraElement& x, const AlgebraElement& y) const {
  require_same_kind(x.kind(), kind_, "lie_cocycle");
  require_same_kind(y.kind(), kind_, "lie_cocycle");
  if (family_ == Family::Trivial) return Imag(0.0);
  const Eigen::Vector2d& a = x.as_r2();
  const Eigen::Vector2d& b = y.as_r2();
  return Imag(kappa_ * (a(0) * b(1) - b(0) * a(1)));
}

Imag FiniteExtension::base_group_cocycle(const GroupElement& g, const AlgebraElement& x) const {
  require_same_kind(g.kind(), kind_, "group_cocycle");
  require_same_kind(x.kind(), kind_, "group_cocycle");
  if (family_ == Family::Trivial) return Imag(0.0);
  const Eigen::Vector2d& a = g.as_r2();
  const Eigen::Vector2d& v = x.as_r2();
  return Imag(kappa_ * (a(0) * v(1) - a(1) * v(0)));
}

Imag FiniteExtension::lie_cocycle(const AlgebraElement& x, const AlgebraElement& y) const {
  return base_lie_cocycle(x, y) - shift_(gerbekit::bracket(x, y));
}

Imag FiniteExtension::group_cocycle(const GroupElement& g, const AlgebraElement& x) const {
  return base_group_cocycle(g, x) + shift_(x - gerbekit::adjoint(g, x));
}

std::complex<double> FiniteExtension::product_cocycle(const GroupElement& a, const GroupElement& b) const {
  require_same_kind(a.kind(), kind_, "product_cocycle");
  require_same_kind(b.kind(), kind_, "product_cocycle");
  if (family_ == Family::Trivial) return {1.0, 0.0};
  const Eigen::Vector2d& p = a.as_r2();
  const Eigen::Vector2d& q = b.as_r2();
  return std::polar(1.0, 0.5 * kappa_ * (p(0) * q(1) - p(1) * q(0)));
}

ExtendedGroupElement FiniteExtension::multiply(const ExtendedGroupElement& a, const ExtendedGroupElement& b) const {
  return {a.base * b.base, unit(a.phase * b.phase * product_cocycle(a.base, b.base))};
}

ExtendedGroupElement FiniteExtension::inverse(const ExtendedGroupElement& a) const {
  const GroupElement inv = a.base.inverse();
  return {inv, unit(1.0 / (a.phase * product_cocycle(a.base, inv)))};
}

// t ↦ (exp tX, e^{ta}) is a one-parameter subgroup because c(exp sX, exp tX) = 1 for both families.
ExtendedGroupElement FiniteExtension::exp(const ExtendedAlgebraElement& x) const {
  return {gerbekit::exp(x.base), phase_of(x.central)};
}

ExtendedAlgebraElement FiniteExtension::log(const ExtendedGroupElement& g) const {
  return {gerbekit::log(g.base), Imag(std::arg(g.phase))};
}

ExtendedAlgebraElement FiniteExtension::bracket(const ExtendedAlgebraElement& x, const ExtendedAlgebraElement& y) const {
  return {gerbekit::bracket(x.base, y.base), base_lie_cocycle(x.base, y.base)};
}

ExtendedAlgebraElement FiniteExtension::adjoint(const GroupElement& g, const ExtendedAlgebraElement& x) const {
  return {gerbekit::adjoint(g, x.base), x.central + base_group_cocycle(g, x.base)};
}

ExtendedAlgebraElement FiniteExtension::maurer_cartan(const std::function<ExtendedGroupElement(double)>& curve,
                                                      double h) const {
  const ExtendedGroupElement start_inv = inverse(curve(0.0));
  const auto f = [&](double t) { return log(multiply(start_inv, curve(t))); };
  return (1.0 / (12.0 * h)) * (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h)));
}

Imag FiniteExtension::nu_connection(const ExtendedGroupElement& p, const AlgebraElement& v, Imag xi, double h) const {
  const auto curve = [&](double t) -> ExtendedGroupElement {
    return {p.base * gerbekit::exp(t * v), unit(p.phase * phase_of(t * xi))};
  };
  return nu(maurer_cartan(curve, h));
}

Imag FiniteExtension::group_cocycle_numeric(const GroupElement& g, const AlgebraElement& x, double h) const {
  const ExtendedGroupElement lifted{g, {1.0, 0.0}};
  const ExtendedGroupElement lifted_inv = inverse(lifted);
  const ExtendedAlgebraElement sx = split(x);
  const auto curve = [&](double t) { return multiply(multiply(lifted, exp(t * sx)), lifted_inv); };
  const ExtendedAlgebraElement ad = maurer_cartan(curve, h);
  return ad.central - shift_(ad.base);
}

Imag FiniteExtension::lie_cocycle_numeric(const AlgebraElement& x, const AlgebraElement& y, double h) const {
  const ExtendedAlgebraElement sx = split(x);
  const ExtendedAlgebraElement sy = split(y);
  const auto conjugated = [&](double s) {
    const ExtendedGroupElement g = exp(s * sx);
    const ExtendedGroupElement g_inv = inverse(g);
    return maurer_cartan([&](double t) { return multiply(multiply(g, exp(t * sy)), g_inv); }, h);
  };
  const ExtendedAlgebraElement br =
      (1.0 / (12.0 * h)) * (8.0 * (conjugated(h) - conjugated(-h)) - (conjugated(2.0 * h) - conjugated(-2.0 * h)));
  return br.central - shift_(br.base);
}

DifferentialForm<ExtendedGroupSpace, Imag> nu_form(const FiniteExtension& model, double h) {
  const ExtendedGroupSpace space{model};
  return {1, [space, h](const ExtendedGroupElement& p, const std::vector<ExtendedAlgebraElement>& v) {
            return space.model.nu(
                space.model.maurer_cartan([&](double t) { return space.flow(p, v[0], t); }, h));
          }};
}

AlgebraElement LoopShift::at(double theta) const {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (std::size_t n = 0; n < cos_coefficients.size(); ++n) v += std::cos(n * theta) * cos_coefficients[n];
  for (std::size_t n = 0; n < sin_coefficients.size(); ++n) v += std::sin(n * theta) * sin_coefficients[n];
  return AlgebraElement::su2(v);
}

AlgebraLoop LoopShift::sample(int n) const {
  AlgebraLoop out;
  out.samples.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out.samples.push_back(at(2.0 * M_PI * j / n));
  return out;
}

Imag LoopShift::operator()(const AlgebraLoop& x) const {
  if (is_zero()) return Imag(0.0);
  double s = 0.0;
  for (int j = 0; j < x.size(); ++j) s += pairing(at(x.theta(j)), x[j]);
  return Imag(s * x.step() / (2.0 * M_PI));
}

bool LoopShift::is_zero() const {
  const auto zero = [](const Eigen::Vector3d& v) { return v.isZero(0.0); };
  return std::all_of(cos_coefficients.begin(), cos_coefficients.end(), zero) &&
         std::all_of(sin_coefficients.begin(), sin_coefficients.end(), zero);
}

LoopShift operator+(const LoopShift& a, const LoopShift& b) {
  const auto add = [](std::vector<Eigen::Vector3d> x, const std::vector<Eigen::Vector3d>& y) {
    if (x.size() < y.size()) x.resize(y.size(), Eigen::Vector3d::Zero());
    for (std::size_t n = 0; n < y.size(); ++n) x[n] += y[n];
    return x;
  };
  return {add(a.cos_coefficients, b.cos_coefficients), add(a.sin_coefficients, b.sin_coefficients)};
}

Imag loop_trace_integral(int level, const AlgebraLoop& x, const AlgebraLoop& y) {
  require_same_grid(x, y, "loop_trace_integral");
  double s = 0.0;
  for (int j = 0; j < x.size(); ++j) s += trace_product(x[j], y[j]);
  return Imag(level * s * x.step() / (2.0 * M_PI));
}

Imag LoopExtension::lie_cocycle(const AlgebraLoop& x, const AlgebraLoop& y) const {
  require_same_grid(x, y, "lie_cocycle");
  return loop_trace_integral(level_, x, derivative(y)) - shift_(bracket(x, y));
}

Imag LoopExtension::group_cocycle(const GroupLoop& g, const AlgebraLoop& x) const {
  require_same_grid(g, x, "group_cocycle");
  return -loop_trace_integral(level_, mc_pullback(g), x) + shift_(x - adjoint(g, x));
}

std::complex<double> LoopExtension::product_cocycle(const GroupLoop&, const GroupLoop&) const {
  throw NoGlobalModel("the level-k loop extension has no global product cocycle");
}

}  // namespace gerbekit
