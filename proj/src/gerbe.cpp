#include "gerbekit/gerbe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gerbekit {

namespace {

ExtendedGroupElement lifted_transition(const BundleData& bundle, const LiftData& lifts, int a, int b,
                                       const Eigen::VectorXd& x) {
  return {bundle.transition(a, b, x), lifts.phase(a, b, x)};
}

ExtendedAlgebraElement lifted_connection(const BundleData& bundle, const LiftData& lifts, int a,
                                         const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  return {bundle.connection(a, x, u), lifts.central(a, x, u)};
}

// ĝ_ab*μ̂(u) at x in chart a.
ExtendedAlgebraElement lifted_transition_mc(const BundleData& bundle, const FiniteExtension& model,
                                            const LiftData& lifts, int a, int b, const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& u, double h) {
  return model.maurer_cartan(
      [&](double t) { return lifted_transition(bundle, lifts, a, b, Eigen::VectorXd(x + t * u)); }, h);
}

Imag chart_form_derivative(const std::function<Imag(const Eigen::VectorXd&, const Eigen::VectorXd&)>& alpha,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& v, const Eigen::VectorXd& w, double h) {
  const EuclideanSpace space("chart", static_cast<int>(x.size()));
  const DifferentialForm<EuclideanSpace, Imag> form{
      1, [&](const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& t) { return alpha(y, t[0]); }};
  return extrapolated_derivative(space, form, x, {v, w}, h);
}

std::shared_ptr<const BundleData> borrowed(const BundleData& bundle) {
  return std::shared_ptr<const BundleData>(&bundle, [](const BundleData*) {});
}

}  // namespace

BundleGerbe bundle_gerbe(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                         BundleSplitting splitting, double h) {
  BundleGerbe g{TotalSpace(bundle), model, std::move(splitting), {}, {}, {}, {}, {}, {}, {}};
  g.connection = [bundle](const BundlePoint& b, const BundleTangent& v) { return global_connection(*bundle, b, v); };
  if (bundle->curvature) {
    g.curvature = [bundle](const BundlePoint& b, const BundleTangent& v, const BundleTangent& w) {
      return analytic_curvature(*bundle, b, v, w);
    };
  } else {
    const TotalSpace space(bundle);
    g.curvature = [space, h](const BundlePoint& b, const BundleTangent& v, const BundleTangent& w) {
      return curvature(space, b, v, w, h);
    };
  }
  g.division = [bundle](const BundlePoint& b1, const BundlePoint& b2) { return division(*bundle, b1, b2); };
  g.act = [](const BundlePoint& b, const GroupElement& x) { return act(b, x); };
  g.horizontal = [bundle](const BundlePoint& b, const BundleTangent& v) { return horizontal_part(*bundle, b, v); };
  g.vertical = [](const BundlePoint& b, const AlgebraElement& x) { return vertical(b, x); };
  g.log_difference = [](const GroupElement& a, const GroupElement& b) { return log(a.inverse() * b); };
  return g;
}

BundlePair sample_pair(const BundleData& bundle, SampleRng& rng, int chart) {
  const BundlePoint b = sample_point(bundle, rng, chart);
  return {{b, act(b, rng.group(bundle.group))}};
}

BundlePairTangent sample_pair_tangent(const BundleData& bundle, SampleRng& rng) {
  const Eigen::VectorXd u = sample_base_tangent(bundle, rng);
  return {{BundleTangent{u, rng.algebra(bundle.group, 1.0)}, BundleTangent{u, rng.algebra(bundle.group, 1.0)}}};
}

BundleTriple sample_triple(const BundleData& bundle, SampleRng& rng, int chart) {
  const BundlePoint b = sample_point(bundle, rng, chart);
  const BundlePoint c = act(b, rng.group(bundle.group));
  return {{b, c, act(c, rng.group(bundle.group))}};
}

BundleTripleTangent sample_triple_tangent(const BundleData& bundle, SampleRng& rng) {
  const Eigen::VectorXd u = sample_base_tangent(bundle, rng);
  BundleTripleTangent out;
  for (auto& t : out.leg) t = {u, rng.algebra(bundle.group, 1.0)};
  return out;
}

GerbeConnectionResidual gerbe_connection_residual(const BundleGerbe& geo, const BundleTriple& p,
                                                  const BundleTripleTangent& v, std::complex<double> u12,
                                                  std::complex<double> u23, Imag xi12, Imag xi23, double h) {
  const FiberProductSpace<TotalSpace, 3> triples{geo.space};
  const FiniteExtension& model = geo.model;
  const auto lift = [&](std::size_t i, std::size_t j, std::complex<double> u, Imag xi) {
    return [&, i, j, u, xi](double t) -> ExtendedGroupElement {
      const BundleTriple q = triples.flow(p, v, t);
      return {geo.division(q[i], q[j]), u * std::polar(1.0, t * xi.value)};
    };
  };
  const std::function<ExtendedGroupElement(double)> c12 = lift(0, 1, u12, xi12);
  const std::function<ExtendedGroupElement(double)> c23 = lift(1, 2, u23, xi23);
  const std::function<ExtendedGroupElement(double)> c13 = [&](double t) { return model.multiply(c12(t), c23(t)); };
  const ExtendedAlgebraElement mu12 = model.maurer_cartan(c12, h);
  const Imag nu12 = model.nu(mu12);
  const Imag nu23 = model.nu(model.maurer_cartan(c23, h));
  const Imag nu13 = model.nu(model.maurer_cartan(c13, h));
  GerbeConnectionResidual r;
  r.nu = abs(nu12 + nu23 - nu13 + model.group_cocycle(geo.division(p[1], p[2]).inverse(), mu12.base));
  r.z = transported_cocycle_triple_residual(geo, p, v, h);
  return r;
}

LiftData trivial_lifts() {
  return {[](int, int, const Eigen::VectorXd&) { return std::complex<double>(1.0, 0.0); },
          [](int, const Eigen::VectorXd&, const Eigen::VectorXd&) { return Imag(0.0); }};
}

LiftData canonical_lifts(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model) {
  LiftData l = trivial_lifts();
  l.central = [bundle, model](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    return model.split_shift(bundle->connection(a, x, u));
  };
  return l;
}

AlgebraElement chart_curvature(const BundleData& bundle, int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& w, double h) {
  if (bundle.curvature) return bundle.curvature(a, x, u, w);
  const TotalSpace space(borrowed(bundle));
  const BundlePoint b{a, x, GroupElement::identity(bundle.group)};
  const AlgebraElement zero = AlgebraElement::zero(bundle.group);
  return curvature(space, b, {u, zero}, {w, zero}, h);
}

namespace {

std::function<std::complex<double>(const std::array<int, 3>&, int, const Eigen::VectorXd&)> obstruction_z(
    std::shared_ptr<const BundleData> bundle, const FiniteExtension& model, const LiftData& lifts) {
  return [bundle, model, lifts](const std::array<int, 3>& s, int chart, const Eigen::VectorXd& x) {
    const Eigen::VectorXd xa = bundle->base.to_chart(chart, s[0], x);
    const Eigen::VectorXd xb = bundle->base.to_chart(chart, s[1], x);
    const ExtendedGroupElement ab = lifted_transition(*bundle, lifts, s[0], s[1], xa);
    const ExtendedGroupElement bc = lifted_transition(*bundle, lifts, s[1], s[2], xb);
    const ExtendedGroupElement ac = lifted_transition(*bundle, lifts, s[0], s[2], xa);
    return model.multiply(model.multiply(ab, bc), model.inverse(ac)).phase;
  };
}

}  // namespace

DeligneCochain build_obstruction(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                 const LiftData& lifts, const BundleSplitting& splitting, double h) {
  require_same_kind(bundle->group, model.kind(), "build_obstruction");
  DeligneCochain out;
  out.z = obstruction_z(bundle, model, lifts);
  out.u = [bundle, model, lifts, h](const std::array<int, 2>& s, int chart, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u) {
    const int a = s[0];
    const int b = s[1];
    const Eigen::VectorXd xa = bundle->base.to_chart(chart, a, x);
    const Eigen::VectorXd ua = bundle->base.push_tangent(chart, a, x, u);
    const Eigen::VectorXd xb = bundle->base.to_chart(chart, b, x);
    const Eigen::VectorXd ub = bundle->base.push_tangent(chart, b, x, u);
    const GroupElement g = bundle->transition(a, b, xa);
    const ExtendedAlgebraElement ad = model.adjoint(g.inverse(), lifted_connection(*bundle, lifts, a, xa, ua));
    const ExtendedAlgebraElement mu = lifted_transition_mc(*bundle, model, lifts, a, b, xa, ua, h);
    return lifts.central(b, xb, ub) - ad.central - mu.central;
  };
  out.K = [bundle, model, lifts, splitting, h](int a, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                               const Eigen::VectorXd& w) {
    const Eigen::VectorXd xa = bundle->base.to_chart(chart, a, x);
    const Eigen::VectorXd va = bundle->base.push_tangent(chart, a, x, v);
    const Eigen::VectorXd wa = bundle->base.push_tangent(chart, a, x, w);
    const AlgebraElement f = chart_curvature(*bundle, a, xa, va, wa, h);
    const BundlePoint s{a, xa, GroupElement::identity(bundle->group)};
    const Imag dc = chart_form_derivative(
        [&](const Eigen::VectorXd& y, const Eigen::VectorXd& t) { return lifts.central(a, y, t); }, xa, va, wa, h);
    const Imag omega0 =
        model.bracket({bundle->connection(a, xa, va), Imag(0.0)}, {bundle->connection(a, xa, wa), Imag(0.0)}).central;
    return splitting(s, f) + dc + omega0 - model.split_shift(f);
  };
  return out;
}

DeligneCochain build_obstruction(const LoopExtension&) {
  throw NoGlobalModel("build_obstruction: the loop extension has no global model in which to lift transitions");
}

DeligneCochain canonical_obstruction(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                     const LiftData& lifts, const BundleSplitting& splitting, double h) {
  require_same_kind(bundle->group, model.kind(), "canonical_obstruction");
  DeligneCochain out;
  out.z = obstruction_z(bundle, model, lifts);
  out.u = [bundle, model, lifts, h](const std::array<int, 2>& s, int chart, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u) {
    const int a = s[0];
    const Eigen::VectorXd xa = bundle->base.to_chart(chart, a, x);
    const Eigen::VectorXd ua = bundle->base.push_tangent(chart, a, x, u);
    const GroupElement g = bundle->transition(a, s[1], xa);
    const Imag nu = model.nu(lifted_transition_mc(*bundle, model, lifts, a, s[1], xa, ua, h));
    return -(model.group_cocycle(g.inverse(), bundle->connection(a, xa, ua)) + nu);
  };
  out.K = [bundle, model, splitting, h](int a, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                                        const Eigen::VectorXd& w) {
    const Eigen::VectorXd xa = bundle->base.to_chart(chart, a, x);
    const Eigen::VectorXd va = bundle->base.push_tangent(chart, a, x, v);
    const Eigen::VectorXd wa = bundle->base.push_tangent(chart, a, x, w);
    const BundlePoint s{a, xa, GroupElement::identity(bundle->group)};
    return splitting(s, chart_curvature(*bundle, a, xa, va, wa, h)) +
           model.lie_cocycle(bundle->connection(a, xa, va), bundle->connection(a, xa, wa));
  };
  return out;
}

Imag cochain_three_form(const DeligneCochain& cochain, int a, const Eigen::VectorXd& x,
                        const std::vector<Eigen::VectorXd>& u, double h) {
  if (u.size() != 3) throw DegreeError("cochain_three_form needs three tangents");
  const EuclideanSpace space("chart", static_cast<int>(x.size()));
  const DifferentialForm<EuclideanSpace, Imag> k{
      2, [&](const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& t) { return cochain.K(a, a, y, t[0], t[1]); }};
  return extrapolated_derivative(space, k, x, u, h);
}

DeligneOneCochain global_lift_coboundary(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                         const LiftData& lifts,
                                         std::function<Imag(int a, const Eigen::VectorXd&, const Eigen::VectorXd&)> c) {
  if (!bundle->trivialization || !bundle->trivial_connection)
    throw InvalidArgument("bundle '" + bundle->name + "' has no global section");
  const auto section = [bundle](int a, const Eigen::VectorXd& x) {
    return ExtendedGroupElement{bundle->trivialization(a, x), {1.0, 0.0}};
  };
  DeligneOneCochain out;
  out.h = [bundle, model, lifts, section](const std::array<int, 2>& s, int chart, const Eigen::VectorXd& x) {
    const Eigen::VectorXd xa = bundle->base.to_chart(chart, s[0], x);
    const Eigen::VectorXd xb = bundle->base.to_chart(chart, s[1], x);
    const ExtendedGroupElement g = lifted_transition(*bundle, lifts, s[0], s[1], xa);
    const ExtendedGroupElement g_global = model.multiply(model.inverse(section(s[0], xa)), section(s[1], xb));
    return model.multiply(g, model.inverse(g_global)).phase;
  };
  out.k = [bundle, model, lifts, section, c](int a, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const Eigen::VectorXd xa = bundle->base.to_chart(chart, a, x);
    const Eigen::VectorXd ua = bundle->base.push_tangent(chart, a, x, u);
    const ExtendedAlgebraElement eta{bundle->trivial_connection(a, xa, ua), c(a, xa, ua)};
    const ExtendedAlgebraElement mu = model.maurer_cartan(
        [&](double t) { return section(a, Eigen::VectorXd(xa + t * ua)); }, 1e-3);
    const ExtendedAlgebraElement global = model.adjoint(bundle->trivialization(a, xa).inverse(), eta) + mu;
    return lifts.central(a, xa, ua) - global.central;
  };
  return out;
}

LiftedTangent LiftedSpace::difference(const Point& p, const Point& q) const {
  if (p.chart != q.chart) throw InvalidArgument("lifted bundle difference across charts");
  return {q.x - p.x, model.log(model.multiply(model.inverse(p.g), q.g))};
}

void LiftedSpace::require_clearance(const Point& p, const Tangent& v, double h) const {
  const double need = 3.0 * std::abs(h) * v.base.norm();
  const double have = bundle->base.clearance(p.chart, p.x);
  if (have < need) throw ChartClearanceError(bundle->base.charts.at(p.chart).name, have, need);
}

DifferentialForm<LiftedSpace, Imag> lifted_scalar_connection(std::shared_ptr<const BundleData> bundle,
                                                             const FiniteExtension& model, const LiftData& lifts) {
  return {1, [bundle, model, lifts](const LiftedPoint& p, const std::vector<LiftedTangent>& v) {
            const ExtendedAlgebraElement local = lifted_connection(*bundle, lifts, p.chart, p.x, v[0].base);
            return model.nu(model.adjoint(p.g.base.inverse(), local) + v[0].fiber);
          }};
}

namespace {

double cochain_difference(const DeligneCochain& a, const DeligneCochain& b, const BundleData& bundle, SampleRng& rng,
                          int samples) {
  double r = 0.0;
  for (const auto& s : bundle.nerve.simplices_of_size(3)) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = bundle.nerve.sample(rng, s);
      const std::array<int, 3> abc{s[0], s[1], s[2]};
      r = std::max(r, std::abs(a.z(abc, s[0], x) - b.z(abc, s[0], x)));
    }
  }
  for (const auto& s : bundle.nerve.simplices_of_size(2)) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = bundle.nerve.sample(rng, s);
      const Eigen::VectorXd u = sample_base_tangent(bundle, rng);
      const std::array<int, 2> ab{s[0], s[1]};
      r = std::max(r, abs(a.u(ab, s[0], x, u) - b.u(ab, s[0], x, u)));
    }
  }
  return r;
}

}  // namespace

TrivializationReport trivialize(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                const BundleSplitting& splitting, const LiftData& lifts, const DeligneCochain& cochain,
                                const DeligneOneCochain& hk, SampleRng& rng, int samples, double h, double tolerance) {
  TrivializationReport r;
  const DeligneCochain target = coboundary(hk, h);
  r.coboundary = cochain_difference(cochain, target, *bundle, rng, samples);
  if (!(r.coboundary <= tolerance)) {
    std::ostringstream msg;
    msg << "trivialize: cochain differs from D(h, k) by " << r.coboundary << " (tolerance " << tolerance << ")";
    throw ResidualError(msg.str());
  }
  r.lifts.phase = [lifts, hk](int a, int b, const Eigen::VectorXd& x) {
    return std::conj(hk.h({a, b}, a, x)) * lifts.phase(a, b, x);
  };
  r.lifts.central = [lifts, hk](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    return lifts.central(a, x, u) - hk.k(a, a, x, u);
  };

  const DeligneCochain lifted = build_obstruction(bundle, model, r.lifts, splitting, h);
  r.lifted_cocycle = cochain_difference(lifted, zero_cochain(), *bundle, rng, samples);

  const BundleGerbe geo = bundle_gerbe(bundle, model, splitting, h);
  const LiftedSpace lspace{bundle, model};
  const auto n_form = lifted_scalar_connection(bundle, model, r.lifts);
  const int dim = bundle->base.dimension;
  for (int a = 0; a < bundle->nerve.chart_count; ++a) {
    for (int i = 0; i < samples; ++i) {
      const BundlePoint b = sample_point(*bundle, rng, a);
      const BundleTangent v = sample_tangent(*bundle, rng);
      const BundleTangent w = sample_tangent(*bundle, rng);
      const Imag k = lifted.K(a, a, b.x, v.base, w.base);
      r.scalar_curvature = std::max(r.scalar_curvature, abs(k));

      const LiftedPoint bh{a, b.x, {b.g, std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI))}};
      const LiftedTangent vh{v.base, {v.fiber, Imag(rng.normal())}};
      const LiftedTangent wh{w.base, {w.fiber, Imag(rng.normal())}};
      const Imag f_n = extrapolated_derivative(lspace, n_form, bh, {vh, wh}, h);
      r.curving_identity = std::max(r.curving_identity, abs(curving(geo, b, v, w) - (f_n - k)));

      std::vector<Eigen::VectorXd> us;
      std::vector<BundleTangent> ts;
      for (int j = 0; j < 3; ++j) {
        us.push_back(rng.vector(dim, 1.0));
        ts.push_back({us.back(), rng.algebra(bundle->group, 1.0)});
      }
      const Imag xi = three_curvature(geo, b, ts, h);
      r.three_curvature = std::max(r.three_curvature, abs(xi + cochain_three_form(lifted, a, b.x, us, h)));
    }
  }
  return r;
}

std::shared_ptr<const BundleData> pullback_bundle(std::shared_ptr<const BundleData> bundle, const BaseMap& phi) {
  auto out = std::make_shared<BundleData>();
  out->name = bundle->name + " pulled back";
  out->base = phi.source;
  out->nerve = phi.nerve;
  out->group = bundle->group;
  out->margin = bundle->margin;
  out->transition = [bundle, phi](int a, int b, const Eigen::VectorXd& x) {
    return bundle->transition(a, b, phi.map(a, x));
  };
  out->connection = [bundle, phi](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    return bundle->connection(a, phi.map(a, x), phi.differential(a, x, u));
  };
  if (bundle->curvature) {
    out->curvature = [bundle, phi](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& w) {
      return bundle->curvature(a, phi.map(a, x), phi.differential(a, x, u), phi.differential(a, x, w));
    };
  }
  if (bundle->trivialization) {
    out->trivialization = [bundle, phi](int a, const Eigen::VectorXd& x) {
      return bundle->trivialization(a, phi.map(a, x));
    };
  }
  if (bundle->trivial_connection) {
    out->trivial_connection = [bundle, phi](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
      return bundle->trivial_connection(a, phi.map(a, x), phi.differential(a, x, u));
    };
  }
  return out;
}

BundleSplitting pullback_splitting(const BundleSplitting& l, const BaseMap& phi) {
  return {[l, phi](const BundlePoint& b, const AlgebraElement& x) {
    return l(BundlePoint{b.chart, phi.map(b.chart, b.x), b.g}, x);
  }};
}

namespace {

LiftData pullback_lifts(const LiftData& lifts, const BaseMap& phi) {
  return {[lifts, phi](int a, int b, const Eigen::VectorXd& x) { return lifts.phase(a, b, phi.map(a, x)); },
          [lifts, phi](int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
            return lifts.central(a, phi.map(a, x), phi.differential(a, x, u));
          }};
}

}  // namespace

NaturalityResidual pullback_naturality_residual(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                                const BundleSplitting& splitting, const LiftData& lifts,
                                                const BaseMap& phi, SampleRng& rng, int samples, double h) {
  if (phi.nerve.chart_count != bundle->nerve.chart_count)
    throw InvalidArgument("pullback: the source cover must be indexed like the target cover");
  const auto pulled = pullback_bundle(bundle, phi);
  const BundleSplitting pulled_splitting = pullback_splitting(splitting, phi);
  const LiftData pulled_lifts = pullback_lifts(lifts, phi);
  const BundleGerbe geo = bundle_gerbe(bundle, model, splitting, h);
  const BundleGerbe pulled_geo = bundle_gerbe(pulled, model, pulled_splitting, h);
  const DeligneCochain cochain = build_obstruction(bundle, model, lifts, splitting, h);
  const DeligneCochain pulled_cochain = build_obstruction(pulled, model, pulled_lifts, pulled_splitting, h);

  NaturalityResidual r;
  const int dim = phi.source.dimension;
  const auto push = [&](int a, const Eigen::VectorXd& x, const BundleTangent& v) {
    return BundleTangent{phi.differential(a, x, v.base), v.fiber};
  };
  for (int a = 0; a < phi.nerve.chart_count; ++a) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = phi.nerve.sample(rng, {a});
      const BundlePoint b{a, x, rng.group(bundle->group)};
      const BundlePoint fb{a, phi.map(a, x), b.g};
      const BundleTangent v{rng.vector(dim, 1.0), rng.algebra(bundle->group, 1.0)};
      const BundleTangent w{rng.vector(dim, 1.0), rng.algebra(bundle->group, 1.0)};
      r.curving = std::max(r.curving, abs(curving(pulled_geo, b, v, w) -
                                          curving(geo, fb, push(a, x, v), push(a, x, w))));
      r.kappa = std::max(r.kappa, abs(kappa(pulled_geo, b, v, w) - kappa(geo, fb, push(a, x, v), push(a, x, w))));
      r.cochain = std::max(r.cochain, abs(pulled_cochain.K(a, a, x, v.base, w.base) -
                                          cochain.K(a, a, fb.x, phi.differential(a, x, v.base),
                                                    phi.differential(a, x, w.base))));
    }
  }
  for (const auto& s : phi.nerve.simplices_of_size(2)) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = phi.nerve.sample(rng, s);
      const Eigen::VectorXd u = rng.vector(dim, 1.0);
      const std::array<int, 2> ab{s[0], s[1]};
      r.cochain = std::max(r.cochain, abs(pulled_cochain.u(ab, s[0], x, u) -
                                          cochain.u(ab, s[0], phi.map(s[0], x), phi.differential(s[0], x, u))));
    }
  }
  for (const auto& s : phi.nerve.simplices_of_size(3)) {
    for (int i = 0; i < samples; ++i) {
      const Eigen::VectorXd x = phi.nerve.sample(rng, s);
      const std::array<int, 3> abc{s[0], s[1], s[2]};
      r.cochain = std::max(r.cochain,
                           std::abs(pulled_cochain.z(abc, s[0], x) - cochain.z(abc, s[0], phi.map(s[0], x))));
    }
  }
  return r;
}

FlatObstructionCase flat_obstruction_case(SampleRng& rng, double phi_scale) {
  GaugeFamily family = GaugeFamily::random(GroupKind::R2, rng, 0.0, phi_scale);
  FlatObstructionCase c{gauge_bundle(family), FiniteExtension::heisenberg(1.0), {}, {}, {}};
  c.splitting = trivialized_splitting(c.bundle, c.model, rng.vector(2, 1.0));
  c.lifts = canonical_lifts(c.bundle, c.model);
  c.hk = global_lift_coboundary(c.bundle, c.model, c.lifts,
                                [](int, const Eigen::VectorXd&, const Eigen::VectorXd&) { return Imag(0.0); });
  return c;
}

}  // namespace gerbekit
