#include "gerbekit/bundles.hpp"

#include <algorithm>
#include <cmath>

namespace gerbekit {

namespace {

constexpr double kTransitionStep = 1e-3;

double arg_derivative(const std::function<std::complex<double>(double)>& f, double h) {
  const std::complex<double> f0 = f(0.0);
  return derivative_at_zero([&](double t) { return std::arg(f(t) * std::conj(f0)); }, h);
}

}  // namespace

std::vector<std::vector<int>> CoverNerve::simplices_of_size(std::size_t n) const {
  std::vector<std::vector<int>> out;
  for (const auto& s : simplices)
    if (s.size() == n) out.push_back(s);
  return out;
}

double magnitude(const BundleTangent& v) { return std::max(v.base.lpNorm<Eigen::Infinity>(), v.fiber.norm()); }

BundleTangent TotalSpace::difference(const Point& p, const Point& q) const {
  const BundlePoint r = change_chart(*bundle_, q, p.chart);
  return {r.x - p.x, log(p.g.inverse() * r.g)};
}

void TotalSpace::require_clearance(const Point& p, const Tangent& v, double h) const {
  const double need = 3.0 * std::abs(h) * v.base.norm();
  const double have = bundle_->base.clearance(p.chart, p.x);
  if (have < need) throw ChartClearanceError(bundle_->base.charts.at(p.chart).name, have, need);
}

BundlePoint change_chart(const BundleData& bundle, const BundlePoint& p, int chart) {
  if (p.chart == chart) return p;
  const Eigen::VectorXd y = bundle.base.to_chart(p.chart, chart, p.x);
  return {chart, y, bundle.transition(chart, p.chart, y) * p.g};
}

BundleTangent change_chart(const BundleData& bundle, const BundlePoint& p, const BundleTangent& v, int chart) {
  if (p.chart == chart) return v;
  const Eigen::VectorXd y = bundle.base.to_chart(p.chart, chart, p.x);
  const Eigen::VectorXd u = bundle.base.push_tangent(p.chart, chart, p.x, v.base);
  const AlgebraElement dg = transition_log_derivative(bundle, chart, p.chart, y, u);
  return {u, v.fiber + adjoint(p.g.inverse(), dg)};
}

AlgebraElement transition_log_derivative(const BundleData& bundle, int a, int b, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& u) {
  const GroupElement g0_inv = bundle.transition(a, b, x).inverse();
  const auto f = [&](double t) { return log(g0_inv * bundle.transition(a, b, Eigen::VectorXd(x + t * u))); };
  const double h = kTransitionStep;
  return (1.0 / (12.0 * h)) * (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h)));
}

AlgebraElement global_connection(const BundleData& bundle, const BundlePoint& b, const BundleTangent& v) {
  return adjoint(b.g.inverse(), bundle.connection(b.chart, b.x, v.base)) + v.fiber;
}

DifferentialForm<TotalSpace, AlgebraElement> connection_form(const TotalSpace& space) {
  const auto bundle = space.bundle_ptr();
  return {1, [bundle](const BundlePoint& b, const std::vector<BundleTangent>& v) {
            return global_connection(*bundle, b, v[0]);
          }};
}

AlgebraElement curvature(const TotalSpace& space, const BundlePoint& b, const BundleTangent& v,
                         const BundleTangent& w, double h) {
  const auto theta = connection_form(space);
  return extrapolated_derivative(space, theta, b, {v, w}, h) + bracket(theta(b, {v}), theta(b, {w}));
}

AlgebraElement analytic_curvature(const BundleData& bundle, const BundlePoint& b, const BundleTangent& v,
                                  const BundleTangent& w) {
  if (!bundle.curvature) throw InvalidArgument("bundle '" + bundle.name + "' has no closed-form curvature");
  return adjoint(b.g.inverse(), bundle.curvature(b.chart, b.x, v.base, w.base));
}

BundleTangent horizontal_lift(const BundleData& bundle, const BundlePoint& b, const Eigen::VectorXd& u) {
  return {u, -adjoint(b.g.inverse(), bundle.connection(b.chart, b.x, u))};
}

BundleTangent horizontal_part(const BundleData& bundle, const BundlePoint& b, const BundleTangent& v) {
  return horizontal_lift(bundle, b, v.base);
}

BundleTangent vertical(const BundlePoint& b, const AlgebraElement& x) {
  return {Eigen::VectorXd::Zero(b.x.size()), x};
}

BundlePoint act(const BundlePoint& b, const GroupElement& g) { return {b.chart, b.x, b.g * g}; }

GroupElement division(const BundleData& bundle, const BundlePoint& b1, const BundlePoint& b2) {
  const BundlePoint q = change_chart(bundle, b2, b1.chart);
  if ((q.x - b1.x).norm() > 1e-9 * (1.0 + b1.x.norm()))
    throw InvalidArgument("division: points lie over different base points");
  return b1.g.inverse() * q.g;
}

double transition_cocycle_residual(const BundleData& bundle, SampleRng& rng, int samples) {
  double r = 0.0;
  for (const auto& s : bundle.nerve.simplices_of_size(3)) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = bundle.nerve.sample(rng, s);
      const Eigen::VectorXd y = bundle.base.to_chart(s[0], s[1], x);
      const GroupElement lhs = bundle.transition(s[0], s[2], x);
      const GroupElement rhs = bundle.transition(s[0], s[1], x) * bundle.transition(s[1], s[2], y);
      r = std::max(r, distance(lhs, rhs));
    }
  }
  return r;
}

double connection_compatibility_residual(const BundleData& bundle, SampleRng& rng, int samples) {
  double r = 0.0;
  for (const auto& s : bundle.nerve.simplices_of_size(2)) {
    for (const auto& [a, b] : {std::pair{s[0], s[1]}, std::pair{s[1], s[0]}}) {
      for (int i = 0; i < samples; ++i) {
        Eigen::VectorXd x = bundle.nerve.sample(rng, s);
        x = bundle.base.to_chart(s[0], a, x);
        const Eigen::VectorXd u = rng.vector(bundle.base.dimension, 1.0);
        const GroupElement g = bundle.transition(a, b, x);
        const AlgebraElement expected =
            adjoint(g.inverse(), bundle.connection(a, x, u)) + transition_log_derivative(bundle, a, b, x, u);
        const Eigen::VectorXd y = bundle.base.to_chart(a, b, x);
        const AlgebraElement actual = bundle.connection(b, y, bundle.base.push_tangent(a, b, x, u));
        r = std::max(r, (actual - expected).norm());
      }
    }
  }
  return r;
}

BundlePoint sample_point(const BundleData& bundle, SampleRng& rng, int chart, double fiber_scale) {
  return {chart, bundle.nerve.sample(rng, {chart}), rng.group(bundle.group, fiber_scale)};
}

Eigen::VectorXd sample_base_tangent(const BundleData& bundle, SampleRng& rng) {
  return rng.vector(bundle.base.dimension, 1.0);
}

BundleTangent sample_tangent(const BundleData& bundle, SampleRng& rng) {
  Eigen::VectorXd u = sample_base_tangent(bundle, rng);
  return {u, rng.algebra(bundle.group, 1.0)};
}

BundleSplitting trivialized_splitting(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                      Eigen::VectorXd lambda) {
  if (!bundle->trivialization) throw InvalidArgument("bundle '" + bundle->name + "' has no global trivialization");
  return {[bundle, model, lambda](const BundlePoint& b, const AlgebraElement& x) {
    const GroupElement phi = bundle->trivialization(b.chart, b.x) * b.g;
    return Imag(lambda.dot(adjoint(phi, x).coordinates())) + model.group_cocycle(phi, x);
  }};
}

BundleSplitting shift_splitting(const FiniteExtension& model) {
  if (model.family() != FiniteExtension::Family::Trivial)
    throw InvalidArgument("the shift splitting is equivariant only for the trivial extension");
  return {[model](const BundlePoint&, const AlgebraElement& x) { return model.split_shift(x); }};
}

SplittingRoundtrip splitting_roundtrip(const FiniteExtension& model, const BundleSplitting& l, const LinearShift& lambda,
                                       const std::vector<std::tuple<BundlePoint, GroupElement, AlgebraElement>>& samples,
                                       const std::vector<Imag>& central_values) {
  const auto lift = [&](const BundlePoint& b, const ExtendedAlgebraElement& xh) {
    return l(b, xh.base) + model.nu(xh);
  };
  const FiniteExtension shifted_model = model.shifted(lambda);
  const BundleSplitting l_shifted{
      [&](const BundlePoint& b, const AlgebraElement& x) { return lift(b, shifted_model.split(x)); }};
  SplittingRoundtrip r;
  for (const auto& [b, g, x] : samples) {
    for (Imag z : central_values)
      r.central = std::max(r.central, abs(lift(b, {AlgebraElement::zero(model.kind()), z}) - z));
    r.relation = std::max(r.relation, abs(l_shifted(b, x) - l(b, x) - lambda(x)));
  }
  r.equivariance = reduced_splitting_equivariance_residual(
      shifted_model, l_shifted, [](const BundlePoint& b, const GroupElement& g) { return act(b, g); }, samples);
  return r;
}

DeligneCochain coboundary(const DeligneOneCochain& c, double step) {
  DeligneCochain out;
  out.z = [c](const std::array<int, 3>& s, int chart, const Eigen::VectorXd& x) {
    return c.h({s[1], s[2]}, chart, x) * std::conj(c.h({s[0], s[2]}, chart, x)) * c.h({s[0], s[1]}, chart, x);
  };
  out.u = [c, step](const std::array<int, 2>& s, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const double dlog =
        arg_derivative([&](double t) { return c.h(s, chart, Eigen::VectorXd(x + t * u)); }, step);
    return c.k(s[1], chart, x, u) - c.k(s[0], chart, x, u) - Imag(dlog);
  };
  out.K = [c, step](int a, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    const EuclideanSpace space("chart", static_cast<int>(x.size()));
    const DifferentialForm<EuclideanSpace, Imag> k{
        1, [&](const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& t) { return c.k(a, chart, y, t[0]); }};
    return extrapolated_derivative(space, k, x, {v, w}, step);
  };
  return out;
}

DeligneCochain zero_cochain() {
  return {[](const std::array<int, 3>&, int, const Eigen::VectorXd&) { return std::complex<double>(1.0, 0.0); },
          [](const std::array<int, 2>&, int, const Eigen::VectorXd&, const Eigen::VectorXd&) { return Imag(0.0); },
          [](int, int, const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&) { return Imag(0.0); }};
}

double DeligneResiduals::max() const {
  return std::max({delta_z.value_or(0.0), dlog_z, du, unit_modulus});
}

DeligneResiduals cech_deligne_residual(const DeligneCochain& cochain, const BundleData& bundle, SampleRng& rng,
                                       int samples, double h) {
  DeligneResiduals r;
  const int dim = bundle.base.dimension;
  for (const auto& s : bundle.nerve.simplices_of_size(4)) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = bundle.nerve.sample(rng, s);
      const int c = s[0];
      const std::complex<double> d = cochain.z({s[1], s[2], s[3]}, c, x) *
                                     std::conj(cochain.z({s[0], s[2], s[3]}, c, x)) *
                                     cochain.z({s[0], s[1], s[3]}, c, x) * std::conj(cochain.z({s[0], s[1], s[2]}, c, x));
      r.delta_z = std::max(r.delta_z.value_or(0.0), std::abs(d - 1.0));
    }
  }
  for (const auto& s : bundle.nerve.simplices_of_size(3)) {
    const std::array<int, 3> abc{s[0], s[1], s[2]};
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = bundle.nerve.sample(rng, s);
      const Eigen::VectorXd u = rng.vector(dim, 1.0);
      const int c = s[0];
      r.unit_modulus = std::max(r.unit_modulus, std::abs(std::abs(cochain.z(abc, c, x)) - 1.0));
      const Imag dlog(arg_derivative([&](double t) { return cochain.z(abc, c, Eigen::VectorXd(x + t * u)); }, h));
      const Imag sum = cochain.u({s[1], s[2]}, c, x, u) - cochain.u({s[0], s[2]}, c, x, u) +
                       cochain.u({s[0], s[1]}, c, x, u);
      r.dlog_z = std::max(r.dlog_z, abs(dlog + sum));
    }
  }
  for (const auto& s : bundle.nerve.simplices_of_size(2)) {
    const std::array<int, 2> ab{s[0], s[1]};
    const int c = s[0];
    const EuclideanSpace space("chart", dim);
    const DifferentialForm<EuclideanSpace, Imag> u_form{
        1, [&](const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& t) { return cochain.u(ab, c, y, t[0]); }};
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = bundle.nerve.sample(rng, s);
      const Eigen::VectorXd v = rng.vector(dim, 1.0);
      const Eigen::VectorXd w = rng.vector(dim, 1.0);
      const Imag du = extrapolated_derivative(space, u_form, x, {v, w}, h);
      const Imag dk = cochain.K(s[1], c, x, v, w) - cochain.K(s[0], c, x, v, w);
      r.du = std::max(r.du, abs(du - dk));
    }
  }
  return r;
}

GaugeFamily GaugeFamily::random(GroupKind group, SampleRng& rng, double eta_scale, double phi_scale) {
  GaugeFamily f;
  f.group = group;
  for (int i = 0; i < 3; ++i) {
    f.eta_constant.push_back(rng.algebra(group, eta_scale));
    f.eta_linear.emplace_back();
    for (int j = 0; j < 3; ++j) f.eta_linear[i].push_back(rng.algebra(group, eta_scale));
  }
  for (int a = 0; a < 4; ++a) {
    f.phi_constant.push_back(rng.algebra(group, phi_scale));
    f.phi_linear.emplace_back();
    for (int j = 0; j < 3; ++j) f.phi_linear[a].push_back(rng.algebra(group, phi_scale));
  }
  return f;
}

namespace {

struct GaugeModel {
  GaugeFamily f;

  AlgebraElement eta(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    AlgebraElement out = AlgebraElement::zero(f.group);
    for (int i = 0; i < 3; ++i) {
      AlgebraElement coeff = f.eta_constant[i];
      for (int j = 0; j < 3; ++j) coeff += x(j) * f.eta_linear[i][j];
      out += u(i) * coeff;
    }
    return out;
  }
  AlgebraElement eta_curvature(const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& w) const {
    AlgebraElement d = AlgebraElement::zero(f.group);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d += (u(j) * w(i) - w(j) * u(i)) * f.eta_linear[i][j];
    return d + bracket(eta(x, u), eta(x, w));
  }
  AlgebraElement exponent(int a, const Eigen::VectorXd& x) const {
    AlgebraElement p = f.phi_constant[a];
    for (int j = 0; j < 3; ++j) p += x(j) * f.phi_linear[a][j];
    return p;
  }
  AlgebraElement exponent_derivative(int a, const Eigen::VectorXd& u) const {
    AlgebraElement p = AlgebraElement::zero(f.group);
    for (int j = 0; j < 3; ++j) p += u(j) * f.phi_linear[a][j];
    return p;
  }
  GroupElement phi(int a, const Eigen::VectorXd& x) const { return exp(exponent(a, x)); }
};

}  // namespace

std::shared_ptr<const BundleData> gauge_bundle(const GaugeFamily& family) {
  if (family.eta_constant.size() != 3 || family.eta_linear.size() != 3 || family.phi_constant.size() != 4 ||
      family.phi_linear.size() != 4)
    throw InvalidArgument("gauge family needs 3 connection coefficients and 4 chart sections");
  const auto model = std::make_shared<GaugeModel>(GaugeModel{family});
  auto b = std::make_shared<BundleData>();
  b->name = "gauge";
  b->group = family.group;
  b->base.name = "R3";
  b->base.dimension = 3;
  const double edge = 0.6;
  b->base.charts = {
      {"x1<0.6", [edge](const Eigen::VectorXd& x) { return edge - x(0); }},
      {"x1>-0.6", [edge](const Eigen::VectorXd& x) { return x(0) + edge; }},
      {"x2<0.6", [edge](const Eigen::VectorXd& x) { return edge - x(1); }},
      {"x2>-0.6", [edge](const Eigen::VectorXd& x) { return x(1) + edge; }},
  };
  b->base.transition = [](int, int, const Eigen::VectorXd& x) { return x; };
  b->base.differential = [](int, int, const Eigen::VectorXd&, const Eigen::VectorXd& u) { return u; };
  b->nerve.chart_count = 4;
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<int> s;
    for (int a = 0; a < 4; ++a)
      if (mask & (1u << a)) s.push_back(a);
    b->nerve.simplices.push_back(s);
  }
  std::sort(b->nerve.simplices.begin(), b->nerve.simplices.end(),
            [](const auto& l, const auto& r) { return l.size() != r.size() ? l.size() < r.size() : l < r; });
  const double margin = b->margin + 0.05;
  const ChartedManifold base = b->base;
  b->nerve.sample = [base, margin](SampleRng& rng, const std::vector<int>& s) {
    for (;;) {
      Eigen::VectorXd x(3);
      for (int i = 0; i < 3; ++i) x(i) = rng.uniform(-1.0, 1.0);
      if (std::all_of(s.begin(), s.end(), [&](int a) { return base.clearance(a, x) >= margin; })) return x;
    }
  };
  b->transition = [model](int a, int c, const Eigen::VectorXd& x) {
    return model->phi(a, x).inverse() * model->phi(c, x);
  };
  b->connection = [model](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const AlgebraElement p = model->exponent(a, x);
    return adjoint(exp(-p), model->eta(x, u)) + left_dexp(p, model->exponent_derivative(a, u));
  };
  b->curvature = [model](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    return adjoint(model->phi(a, x).inverse(), model->eta_curvature(x, u, w));
  };
  b->trivialization = [model](int a, const Eigen::VectorXd& x) { return model->phi(a, x); };
  b->trivial_connection = [model](int, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    return model->eta(x, u);
  };
  return b;
}

}  // namespace gerbekit
