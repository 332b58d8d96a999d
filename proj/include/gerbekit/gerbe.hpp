#ifndef GERBEKIT_GERBE_HPP
#define GERBEKIT_GERBE_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "gerbekit/bundles.hpp"
#include "gerbekit/central_ext.hpp"
#include "gerbekit/forms.hpp"
#include "gerbekit/mapping.hpp"

namespace gerbekit {

// N points or tangents of the fiber product B^{[N]}, one per leg.
template <class T, std::size_t N>
struct Legs {
  std::array<T, N> leg;

  const T& operator[](std::size_t i) const { return leg[i]; }
  T& operator[](std::size_t i) { return leg[i]; }

  friend Legs operator+(const Legs& a, const Legs& b) {
    Legs out = a;
    for (std::size_t i = 0; i < N; ++i) out.leg[i] = a.leg[i] + b.leg[i];
    return out;
  }
  friend Legs operator*(double s, const Legs& a) {
    Legs out = a;
    for (std::size_t i = 0; i < N; ++i) out.leg[i] = s * a.leg[i];
    return out;
  }
};

// B^{[N]} with frozen fields acting on each leg independently. Tangents must share their base
// component across legs so that flows stay inside the fiber product.
template <NumericSpace S, std::size_t N>
struct FiberProductSpace {
  using Point = Legs<typename S::Point, N>;
  using Tangent = Legs<typename S::Tangent, N>;

  S leg;

  Point flow(const Point& p, const Tangent& v, double t) const {
    Point out = p;
    for (std::size_t i = 0; i < N; ++i) out.leg[i] = leg.flow(p.leg[i], v.leg[i], t);
    return out;
  }
  Tangent bracket(const Tangent& v, const Tangent& w) const {
    Tangent out = v;
    for (std::size_t i = 0; i < N; ++i) out.leg[i] = leg.bracket(v.leg[i], w.leg[i]);
    return out;
  }
  Tangent difference(const Point& p, const Point& q) const {
    Tangent out;
    for (std::size_t i = 0; i < N; ++i) out.leg[i] = leg.difference(p.leg[i], q.leg[i]);
    return out;
  }
  void require_clearance(const Point& p, const Tangent& v, double h) const {
    for (std::size_t i = 0; i < N; ++i) leg.require_clearance(p.leg[i], v.leg[i], h);
  }
};

// A Γ-bundle B with connection θ, reduced splitting ℓ and a model of Γ̂ → Γ with split σ.
template <NumericSpace S, class G, class A, class Model>
struct GerbeGeometry {
  using Space = S;
  using Point = typename S::Point;
  using Tangent = typename S::Tangent;
  using Group = G;
  using Algebra = A;

  S space;
  Model model;
  ReducedSplitting<Point, A> splitting;
  std::function<A(const Point&, const Tangent&)> connection;
  std::function<A(const Point&, const Tangent&, const Tangent&)> curvature;
  // ζ(b₁, b₂) with b₁ζ = b₂.
  std::function<G(const Point&, const Point&)> division;
  std::function<Point(const Point&, const G&)> act;
  // The horizontal tangent with the same projection as v.
  std::function<Tangent(const Point&, const Tangent&)> horizontal;
  std::function<Tangent(const Point&, const A&)> vertical;
  // log(a⁻¹b), used to differentiate curves in Γ.
  std::function<A(const G&, const G&)> log_difference;
};

template <class Geometry>
using PairSpace = FiberProductSpace<typename Geometry::Space, 2>;
template <class Geometry>
using TripleSpace = FiberProductSpace<typename Geometry::Space, 3>;

// κ(b; v, w) = ℓ(b, F_θ(b; v, w)).
template <class Geo>
Imag kappa(const Geo& geo, const typename Geo::Point& b, const typename Geo::Tangent& v,
           const typename Geo::Tangent& w) {
  return geo.splitting(b, geo.curvature(b, v, w));
}

// f = −½ω_σ(θ, θ) − κ with ω_σ(θ, θ)(v, w) = 2ω_σ(θ(v), θ(w)).
template <class Geo>
Imag curving(const Geo& geo, const typename Geo::Point& b, const typename Geo::Tangent& v,
             const typename Geo::Tangent& w) {
  return -geo.model.lie_cocycle(geo.connection(b, v), geo.connection(b, w)) - kappa(geo, b, v, w);
}

template <class Geo>
DifferentialForm<typename Geo::Space, Imag> curving_form(const Geo& geo) {
  return {2, [geo](const typename Geo::Point& b, const std::vector<typename Geo::Tangent>& v) {
            return curving(geo, b, v[0], v[1]);
          }};
}

// ζ*μ(V) on B^{[2]}: left logarithmic derivative of t ↦ ζ(flow of V), fourth-order differences.
template <class Geo>
typename Geo::Algebra zeta_mu(const Geo& geo, const typename PairSpace<Geo>::Point& p,
                              const typename PairSpace<Geo>::Tangent& v, double h) {
  const PairSpace<Geo> pairs{geo.space};
  const auto z0 = geo.division(p[0], p[1]);
  const auto f = [&](double t) {
    const auto q = pairs.flow(p, v, t);
    return geo.log_difference(z0, geo.division(q[0], q[1]));
  };
  using A = typename Geo::Algebra;
  return A((8.0 / (12.0 * h)) * (f(h) + (-1.0) * f(-h)) + (-1.0 / (12.0 * h)) * (f(2.0 * h) + (-1.0) * f(-2.0 * h)));
}

// |ζ*μ − (−Ad_{ζ⁻¹}π₁*θ + π₂*θ)| at one pair and tangent.
template <class Geo>
double mu_theta_residual(const Geo& geo, const typename PairSpace<Geo>::Point& p,
                         const typename PairSpace<Geo>::Tangent& v, double h) {
  const auto z = geo.division(p[0], p[1]);
  const auto expected = adjoint(inverse(z), geo.connection(p[0], v[0]));
  const auto lhs = zeta_mu(geo, p, v, h);
  return magnitude(lhs + expected + (-1.0) * geo.connection(p[1], v[1]));
}

// Z_σ(ζ⁻¹, π₁*θ) as a 1-form on B^{[2]}.
template <class Geo>
DifferentialForm<PairSpace<Geo>, Imag> transported_cocycle_form(const Geo& geo) {
  using P = typename PairSpace<Geo>::Point;
  using T = typename PairSpace<Geo>::Tangent;
  return {1, [geo](const P& p, const std::vector<T>& v) {
            return geo.model.group_cocycle(inverse(geo.division(p[0], p[1])), geo.connection(p[0], v[0][0]));
          }};
}

struct DeltaCurvingResidual {
  double kappa = 0.0;    // |π₁*κ − π₂*κ − Z_σ(ζ⁻¹, π₁*F_θ)|
  double curving = 0.0;  // |π₂*f − π₁*f − F_∇|, F_∇ = −ω_σ(ζ*μ, ζ*μ) + d Z_σ(ζ⁻¹, π₁*θ)

  double max() const { return std::max(kappa, curving); }
};

// The curving identity δf = F_∇ on B^{[2]}, evaluated without a global model of Γ̂.
template <class Geo>
DeltaCurvingResidual delta_curving_residual(const Geo& geo, const typename PairSpace<Geo>::Point& p,
                                            const typename PairSpace<Geo>::Tangent& v,
                                            const typename PairSpace<Geo>::Tangent& w, double h) {
  const PairSpace<Geo> pairs{geo.space};
  DeltaCurvingResidual r;
  const auto zinv = inverse(geo.division(p[0], p[1]));
  const Imag dk = kappa(geo, p[0], v[0], w[0]) - kappa(geo, p[1], v[1], w[1]);
  r.kappa = abs(dk - geo.model.group_cocycle(zinv, geo.curvature(p[0], v[0], w[0])));

  const Imag df = curving(geo, p[1], v[1], w[1]) - curving(geo, p[0], v[0], w[0]);
  const Imag dz = extrapolated_derivative(pairs, transported_cocycle_form(geo), p, {v, w}, h);
  const Imag f_nabla = -geo.model.lie_cocycle(zeta_mu(geo, p, v, h), zeta_mu(geo, p, w, h)) + dz;
  r.curving = abs(df - f_nabla);
  return r;
}

template <class Geo, class Shift>
Geo with_shift(const Geo& geo, const Shift& extra) {
  Geo out = geo;
  out.model = geo.model.shifted(extra);
  out.splitting = shifted(geo.splitting, extra);
  return out;
}

struct SigmaShiftResidual {
  double connection = 0.0;  // |∇' − ∇ − (π₁* − π₂*)λ(θ)| on B^{[2]}, reduced to iR
  double curving = 0.0;     // |f' − f + λ(dθ)|

  double max() const { return std::max(connection, curving); }
};

// Compares the geometry rebuilt with σ' = σ + λ against the closed forms of the difference.
template <class Geo, class Shift>
SigmaShiftResidual sigma_shift_residual(const Geo& geo, const Shift& lambda, const typename PairSpace<Geo>::Point& p,
                                        const typename PairSpace<Geo>::Tangent& v,
                                        const typename PairSpace<Geo>::Tangent& w, double h) {
  const Geo moved = with_shift(geo, lambda);
  SigmaShiftResidual r;
  const auto& b = p[0];
  const auto th_v = geo.connection(b, v[0]);
  const auto th_w = geo.connection(b, w[0]);
  const auto d_theta = geo.curvature(b, v[0], w[0]) + (-1.0) * bracket(th_v, th_w);
  r.curving = abs(curving(moved, b, v[0], w[0]) - curving(geo, b, v[0], w[0]) + lambda(d_theta));

  const auto zinv = inverse(geo.division(p[0], p[1]));
  const Imag dz = moved.model.group_cocycle(zinv, th_v) - geo.model.group_cocycle(zinv, th_v);
  const Imag lhs = -lambda(zeta_mu(geo, p, v, h)) + dz;
  r.connection = abs(lhs - (lambda(th_v) - lambda(geo.connection(p[1], v[1]))));
  return r;
}

// |Z(ζ₁₂⁻¹, π₁*θ) + Z(ζ₂₃⁻¹, π₂*θ) − Z(ζ₁₃⁻¹, π₁*θ) − Z(ζ₂₃⁻¹, ζ₁₂*μ)| on B^{[3]}.
template <class Geo>
double transported_cocycle_triple_residual(const Geo& geo, const typename TripleSpace<Geo>::Point& p,
                                           const typename TripleSpace<Geo>::Tangent& v, double h) {
  const auto z12 = geo.division(p[0], p[1]);
  const auto z23 = geo.division(p[1], p[2]);
  const auto z13 = geo.division(p[0], p[2]);
  const auto th1 = geo.connection(p[0], v[0]);
  const auto th2 = geo.connection(p[1], v[1]);
  const typename PairSpace<Geo>::Point p12{{p[0], p[1]}};
  const typename PairSpace<Geo>::Tangent v12{{v[0], v[1]}};
  const Imag lhs = geo.model.group_cocycle(inverse(z12), th1) + geo.model.group_cocycle(inverse(z23), th2) -
                   geo.model.group_cocycle(inverse(z13), th1);
  return abs(lhs - geo.model.group_cocycle(inverse(z23), zeta_mu(geo, p12, v12, h)));
}

// Ξ(π_*v₁, π_*v₂, π_*v₃) = df on the horizontal parts of the v_i at b.
template <class Geo>
Imag three_curvature(const Geo& geo, const typename Geo::Point& b, const std::vector<typename Geo::Tangent>& v,
                     double h) {
  if (v.size() != 3) throw DegreeError("three_curvature needs three tangents");
  std::vector<typename Geo::Tangent> hv;
  for (const auto& t : v) hv.push_back(geo.horizontal(b, t));
  return extrapolated_derivative(geo.space, curving_form(geo), b, hv, h);
}

// Finite-dimensional bundles with a global model of the extension.

using BundleGerbe = GerbeGeometry<TotalSpace, GroupElement, AlgebraElement, FiniteExtension>;
using BundlePair = Legs<BundlePoint, 2>;
using BundlePairTangent = Legs<BundleTangent, 2>;
using BundleTriple = Legs<BundlePoint, 3>;
using BundleTripleTangent = Legs<BundleTangent, 3>;

// Uses the bundle's closed-form curvature when present, otherwise finite differences of step h.
BundleGerbe bundle_gerbe(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                         BundleSplitting splitting, double h = 1e-3);

// A pair over a common base point and two tangents sharing their base component.
BundlePair sample_pair(const BundleData& bundle, SampleRng& rng, int chart);
BundlePairTangent sample_pair_tangent(const BundleData& bundle, SampleRng& rng);
BundleTriple sample_triple(const BundleData& bundle, SampleRng& rng, int chart);
BundleTripleTangent sample_triple_tangent(const BundleData& bundle, SampleRng& rng);

struct GerbeConnectionResidual {
  double nu = 0.0;  // |π₁₂*(ζ*ν) + π₂₃*(ζ*ν) − m*π₁₃*(ζ*ν) + Z(π₂₃*ζ⁻¹, π₁₂*ζ*μ)|
  double z = 0.0;   // π₁₂*Z + π₂₃*Z − π₁₃*Z = Z(π₂₃*ζ⁻¹, π₁₂*ζ*μ)

  double max() const { return std::max(nu, z); }
};

// Lifts ζ₁₂, ζ₂₃ to curves (ζ(t), u·e^{tξ}) in Γ × T and compares ν along their product.
GerbeConnectionResidual gerbe_connection_residual(const BundleGerbe& geo, const BundleTriple& p,
                                                  const BundleTripleTangent& v, std::complex<double> u12,
                                                  std::complex<double> u23, Imag xi12, Imag xi23, double h);

// Lifts ĝ_ab = (g_ab, phase_ab) and θ̂_a = (θ_a, central_a) in the product coordinates of Γ × T.
struct LiftData {
  std::function<std::complex<double>(int a, int b, const Eigen::VectorXd& x)> phase;
  std::function<Imag(int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> central;
};

LiftData trivial_lifts();
// θ̂_a = σ(θ_a) with unit phases.
LiftData canonical_lifts(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model);

// s_a*F_θ, closed form when available.
AlgebraElement chart_curvature(const BundleData& bundle, int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& w, double h);

// z_abc = ĝ_ab ĝ_bc ĝ_ac⁻¹, u_ab = θ̂_b − Ad_{ĝ⁻¹}θ̂_a − ĝ*μ̂, K_a = L̄(s_a, F_{θ̂_a}).
DeligneCochain build_obstruction(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                 const LiftData& lifts, const BundleSplitting& splitting, double h = 1e-3);
[[noreturn]] DeligneCochain build_obstruction(const LoopExtension& model);
// Canonical choice θ̂_a = σ(θ_a): u_ab = −Z_σ(g_ab⁻¹, θ_a) − ĝ*ν_σ, K_a = ℓ(s_a, F_a) + ½ω_σ(θ_a, θ_a).
DeligneCochain canonical_obstruction(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                     const LiftData& lifts, const BundleSplitting& splitting, double h = 1e-3);

// dK_a(x; u₁, u₂, u₃) in the coordinates of chart a.
Imag cochain_three_form(const DeligneCochain& cochain, int a, const Eigen::VectorXd& x,
                        const std::vector<Eigen::VectorXd>& u, double h);

// (h, k) relating the given lifts to the lift through a global section ŝ with s*θ̂ = (s*θ, c).
DeligneOneCochain global_lift_coboundary(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                         const LiftData& lifts,
                                         std::function<Imag(int a, const Eigen::VectorXd&, const Eigen::VectorXd&)> c);

// Points ŝ_a(x)·ĝ of the lifted bundle and tangents (u, Ŷ).
struct LiftedPoint {
  int chart = 0;
  Eigen::VectorXd x;
  ExtendedGroupElement g;
};

struct LiftedTangent {
  Eigen::VectorXd base;
  ExtendedAlgebraElement fiber;

  friend LiftedTangent operator+(const LiftedTangent& a, const LiftedTangent& b) {
    return {a.base + b.base, a.fiber + b.fiber};
  }
  friend LiftedTangent operator*(double s, const LiftedTangent& a) { return {s * a.base, s * a.fiber}; }
};

struct LiftedSpace {
  using Point = LiftedPoint;
  using Tangent = LiftedTangent;

  std::shared_ptr<const BundleData> bundle;
  FiniteExtension model;

  Point flow(const Point& p, const Tangent& v, double t) const {
    return {p.chart, p.x + t * v.base, model.multiply(p.g, model.exp(t * v.fiber))};
  }
  Tangent bracket(const Tangent& v, const Tangent& w) const {
    return {Eigen::VectorXd::Zero(v.base.size()), model.bracket(v.fiber, w.fiber)};
  }
  Tangent difference(const Point& p, const Point& q) const;
  void require_clearance(const Point& p, const Tangent& v, double h) const;
};

// N = θ̂ − σ(q̂*θ) on the lifted bundle defined by the lifts.
DifferentialForm<LiftedSpace, Imag> lifted_scalar_connection(std::shared_ptr<const BundleData> bundle,
                                                             const FiniteExtension& model, const LiftData& lifts);

struct TrivializationReport {
  LiftData lifts;
  double coboundary = 0.0;         // |(z, u) − D(h, k)| before lifting
  double lifted_cocycle = 0.0;     // |ĝ'_ab ĝ'_bc ĝ'_ac⁻¹ − 1| and |u'| for the new lifts
  double scalar_curvature = 0.0;   // |K − dk|
  double curving_identity = 0.0;   // |f − (F_N − π*K_{θ̂'})|
  double three_curvature = 0.0;    // |Ξ + dK_{θ̂'}|
};

// ĝ' = h⁻¹ĝ, θ̂' = θ̂ − k; refuses when D(h, k) differs from the cochain by more than `tolerance`.
TrivializationReport trivialize(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                const BundleSplitting& splitting, const LiftData& lifts, const DeligneCochain& cochain,
                                const DeligneOneCochain& hk, SampleRng& rng, int samples, double h, double tolerance);

// φ*B over X' for a map given chart-wise by x' ↦ φ(x') with differential dφ, chart a' ↦ chart a.
struct BaseMap {
  ChartedManifold source;
  CoverNerve nerve;
  std::function<Eigen::VectorXd(int a, const Eigen::VectorXd& x)> map;
  std::function<Eigen::VectorXd(int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> differential;
};

std::shared_ptr<const BundleData> pullback_bundle(std::shared_ptr<const BundleData> bundle, const BaseMap& phi);
// ℓ on φ*B: ℓ'((a, x', g), X) = ℓ((a, φ(x'), g), X).
BundleSplitting pullback_splitting(const BundleSplitting& l, const BaseMap& phi);

struct NaturalityResidual {
  double curving = 0.0;
  double kappa = 0.0;
  double cochain = 0.0;

  double max() const { return std::max({curving, kappa, cochain}); }
};

// Compares f, κ and the obstruction cochain of φ*B against the pullbacks of those of B.
NaturalityResidual pullback_naturality_residual(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                                const BundleSplitting& splitting, const LiftData& lifts,
                                                const BaseMap& phi, SampleRng& rng, int samples, double h = 1e-3);

// A trivial bundle over R³ with the Heisenberg extension and a flat connection: the obstruction
// cochain of its canonical lifts is nonzero, yet the global lift trivializes it with vanishing
// scalar curvature.
struct FlatObstructionCase {
  std::shared_ptr<const BundleData> bundle;
  FiniteExtension model;
  BundleSplitting splitting;
  LiftData lifts;
  DeligneOneCochain hk;
};

FlatObstructionCase flat_obstruction_case(SampleRng& rng, double phi_scale);

}  // namespace gerbekit

#endif
