#ifndef GERBEKIT_BUNDLES_HPP
#define GERBEKIT_BUNDLES_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gerbekit/central_ext.hpp"
#include "gerbekit/forms.hpp"
#include "gerbekit/lie.hpp"
#include "gerbekit/rng.hpp"

namespace gerbekit {

// Nonempty overlaps of a fixed cover, indexed by increasing chart lists.
struct CoverNerve {
  int chart_count = 0;
  std::vector<std::vector<int>> simplices;
  // A point of U_{i₀..i_k} in the coordinates of chart i₀, away from every chart boundary.
  std::function<Eigen::VectorXd(SampleRng&, const std::vector<int>&)> sample;

  std::vector<std::vector<int>> simplices_of_size(std::size_t n) const;
};

// A principal Γ-bundle given by local sections s_a: s_b = s_a·g_ab on overlaps and θ_a = s_a*θ.
struct BundleData {
  std::string name;
  ChartedManifold base;
  CoverNerve nerve;
  GroupKind group = GroupKind::SU2;
  // g_ab at a point in the coordinates of chart a.
  std::function<GroupElement(int a, int b, const Eigen::VectorXd& x)> transition;
  std::function<AlgebraElement(int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> connection;
  // s_a*F_θ in closed form, when available.
  std::function<AlgebraElement(int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& w)>
      curvature;
  // φ_a with s_a = s·φ_a for a global section s, when the bundle is trivial.
  std::function<GroupElement(int a, const Eigen::VectorXd& x)> trivialization;
  // s*θ for the same global section, in the coordinates of chart a.
  std::function<AlgebraElement(int a, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> trivial_connection;
  // Smallest chart clearance accepted by the samplers.
  double margin = 0.05;
};

// The point s_chart(x)·g of the total space.
struct BundlePoint {
  int chart = 0;
  Eigen::VectorXd x;
  GroupElement g;
};

// Coordinate tangent (u, Y) of t ↦ s_chart(x + tu)·g·exp(tY).
struct BundleTangent {
  Eigen::VectorXd base;
  AlgebraElement fiber;

  friend BundleTangent operator+(const BundleTangent& a, const BundleTangent& b) {
    return {a.base + b.base, a.fiber + b.fiber};
  }
  friend BundleTangent operator-(const BundleTangent& a, const BundleTangent& b) {
    return {a.base - b.base, a.fiber - b.fiber};
  }
  friend BundleTangent operator*(double s, const BundleTangent& a) { return {s * a.base, s * a.fiber}; }
};

double magnitude(const BundleTangent& v);

// Total space with frozen fields (u, Y): flow (x + tu, g·exp(tY)), brackets (0, [Y₁, Y₂]).
class TotalSpace {
 public:
  using Point = BundlePoint;
  using Tangent = BundleTangent;

  TotalSpace() = default;
  explicit TotalSpace(std::shared_ptr<const BundleData> bundle) : bundle_(std::move(bundle)) {}

  Point flow(const Point& p, const Tangent& v, double t) const {
    return {p.chart, p.x + t * v.base, p.g * exp(t * v.fiber)};
  }
  Tangent bracket(const Tangent& v, const Tangent& w) const {
    return {Eigen::VectorXd::Zero(v.base.size()), gerbekit::bracket(v.fiber, w.fiber)};
  }
  // Tangent at p whose flow reaches q at t = 1; q is first moved to the chart of p.
  Tangent difference(const Point& p, const Point& q) const;
  void require_clearance(const Point& p, const Tangent& v, double h) const;

  const BundleData& bundle() const { return *bundle_; }
  const std::shared_ptr<const BundleData>& bundle_ptr() const { return bundle_; }

 private:
  std::shared_ptr<const BundleData> bundle_;
};

BundlePoint change_chart(const BundleData& bundle, const BundlePoint& p, int chart);
// The same tangent vector at p written in the coordinates of `chart`.
BundleTangent change_chart(const BundleData& bundle, const BundlePoint& p, const BundleTangent& v, int chart);
// g⁻¹dg(u) for g = g_ab, differentiated with fourth-order differences.
AlgebraElement transition_log_derivative(const BundleData& bundle, int a, int b, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& u);

// θ(b; v) = Ad_{g⁻¹} θ_a(x; u) + Y.
AlgebraElement global_connection(const BundleData& bundle, const BundlePoint& b, const BundleTangent& v);
DifferentialForm<TotalSpace, AlgebraElement> connection_form(const TotalSpace& space);
// F_θ = dθ + ½[θ, θ] with dθ by central differences of steps h and h/2, Richardson-extrapolated.
AlgebraElement curvature(const TotalSpace& space, const BundlePoint& b, const BundleTangent& v,
                         const BundleTangent& w, double h);
// Ad_{g⁻¹} F_a(x; u, w) from the bundle's closed-form curvature.
AlgebraElement analytic_curvature(const BundleData& bundle, const BundlePoint& b, const BundleTangent& v,
                                  const BundleTangent& w);
BundleTangent horizontal_lift(const BundleData& bundle, const BundlePoint& b, const Eigen::VectorXd& u);
// The horizontal tangent with the same base component as v.
BundleTangent horizontal_part(const BundleData& bundle, const BundlePoint& b, const BundleTangent& v);
BundleTangent vertical(const BundlePoint& b, const AlgebraElement& x);
BundlePoint act(const BundlePoint& b, const GroupElement& g);
// ζ(b₁, b₂) with b₁ζ = b₂, both points over the same base point.
GroupElement division(const BundleData& bundle, const BundlePoint& b1, const BundlePoint& b2);

// Max over sampled triple overlaps of |g_ac − g_ab g_bc|.
double transition_cocycle_residual(const BundleData& bundle, SampleRng& rng, int samples);
// Max over sampled double overlaps of |θ_b − Ad_{g⁻¹}θ_a − g*μ|.
double connection_compatibility_residual(const BundleData& bundle, SampleRng& rng, int samples);

BundlePoint sample_point(const BundleData& bundle, SampleRng& rng, int chart, double fiber_scale = 1.0);
Eigen::VectorXd sample_base_tangent(const BundleData& bundle, SampleRng& rng);
BundleTangent sample_tangent(const BundleData& bundle, SampleRng& rng);

template <class Point, class A>
struct ReducedSplitting {
  std::function<Imag(const Point&, const A&)> eval;

  Imag operator()(const Point& b, const A& x) const { return eval(b, x); }
};

using BundleSplitting = ReducedSplitting<BundlePoint, AlgebraElement>;

// ℓ(b, X) = i⟨Λ, Ad_φ X⟩ + Z_σ(φ, X) with φ = φ_a(x)·g, for a trivial bundle.
BundleSplitting trivialized_splitting(std::shared_ptr<const BundleData> bundle, const FiniteExtension& model,
                                      Eigen::VectorXd lambda);
// ℓ = σ-shift, the reduced splitting of the trivial extension for any bundle.
BundleSplitting shift_splitting(const FiniteExtension& model);
// ℓ_{σ + λ} = ℓ_σ + λ.
template <class Point, class A, class Shift>
ReducedSplitting<Point, A> shifted(const ReducedSplitting<Point, A>& l, Shift lambda) {
  return {[l, lambda](const Point& b, const A& x) { return l(b, x) + lambda(x); }};
}

// Max of |ℓ(b, X) − ℓ(bγ, Ad_{γ⁻¹}X) − Z_σ(γ⁻¹, X)| over (b, γ, X) samples.
template <class Model, class Point, class G, class A, class Act>
double reduced_splitting_equivariance_residual(const Model& model, const ReducedSplitting<Point, A>& l, Act act_on,
                                               const std::vector<std::tuple<Point, G, A>>& samples) {
  double r = 0.0;
  for (const auto& [b, g, x] : samples) {
    const G gi = inverse(g);
    r = std::max(r, abs(l(b, x) - l(act_on(b, g), adjoint(gi, x)) - model.group_cocycle(gi, x)));
  }
  return r;
}

struct SplittingRoundtrip {
  double central = 0.0;   // |L̄(b, (0, iz)) − iz|
  double relation = 0.0;  // |ℓ_{σ'}(b, X) − ℓ_σ(b, X) − (σ' − σ)(X)|
  double equivariance = 0.0;  // equivariance of ℓ_{σ'} with Z_{σ'}
};

// L̄(b, X̂) = ℓ_σ(b, q_*X̂) + ν_σ(X̂), read back through σ' = σ + λ as ℓ_{σ'}(b, X) = L̄(b, σ'(X)).
SplittingRoundtrip splitting_roundtrip(const FiniteExtension& model, const BundleSplitting& l, const LinearShift& lambda,
                                       const std::vector<std::tuple<BundlePoint, GroupElement, AlgebraElement>>& samples,
                                       const std::vector<Imag>& central_values);

// Čech–Deligne 2-cochain (z_abc, u_ab, K_a). Every evaluator receives the point and tangents in the
// coordinates of `chart`, which must contain the point.
struct DeligneCochain {
  std::function<std::complex<double>(const std::array<int, 3>&, int chart, const Eigen::VectorXd& x)> z;
  std::function<Imag(const std::array<int, 2>&, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> u;
  std::function<Imag(int a, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& v, const Eigen::VectorXd& w)>
      K;
};

// Čech 1-cochain (h_ab, k_a) with values in T and iΩ¹.
struct DeligneOneCochain {
  std::function<std::complex<double>(const std::array<int, 2>&, int chart, const Eigen::VectorXd& x)> h;
  std::function<Imag(int a, int chart, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> k;
};

// D(h, k) = (h_bc h_ac⁻¹ h_ab, k_b − k_a − d log h_ab, dk_a), derivatives with step h.
DeligneCochain coboundary(const DeligneOneCochain& c, double step);
DeligneCochain zero_cochain();

struct DeligneResiduals {
  std::optional<double> delta_z;  // |z_bcd z_acd⁻¹ z_abd z_abc⁻¹ − 1| on quadruple overlaps
  double dlog_z = 0.0;            // |d log z_abc + u_bc − u_ac + u_ab| on triple overlaps
  double du = 0.0;                // |du_ab − (K_b − K_a)| on double overlaps
  double unit_modulus = 0.0;      // ||z| − 1|

  double max() const;
};

DeligneResiduals cech_deligne_residual(const DeligneCochain& cochain, const BundleData& bundle, SampleRng& rng,
                                       int samples, double h);

// Trivial bundle over R³ covered by the half-spaces x₁ < 0.6, x₁ > −0.6, x₂ < 0.6, x₂ > −0.6,
// with η = s*θ = Σᵢ (mᵢ + Σⱼ xⱼ nᵢⱼ) dxⁱ and chart sections s_a = s·exp(p_a + Σⱼ xⱼ q_aj).
struct GaugeFamily {
  GroupKind group = GroupKind::SU2;
  std::vector<AlgebraElement> eta_constant;
  std::vector<std::vector<AlgebraElement>> eta_linear;
  std::vector<AlgebraElement> phi_constant;
  std::vector<std::vector<AlgebraElement>> phi_linear;

  static GaugeFamily random(GroupKind group, SampleRng& rng, double eta_scale, double phi_scale);
};

std::shared_ptr<const BundleData> gauge_bundle(const GaugeFamily& family);

}  // namespace gerbekit

#endif
