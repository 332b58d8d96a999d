#ifndef GERBEKIT_LOOPSTRING_HPP
#define GERBEKIT_LOOPSTRING_HPP

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "gerbekit/bundles.hpp"
#include "gerbekit/central_ext.hpp"
#include "gerbekit/forms.hpp"
#include "gerbekit/gerbe.hpp"
#include "gerbekit/mapping.hpp"
#include "gerbekit/rng.hpp"

namespace gerbekit {

// Charts of S⁴ ⊂ H ∪ {∞}: south x ∈ H and north y = x̄/|x|², each restricted to |·| < 2.
enum InstantonChart { kSouth = 0, kNorth = 1 };

// The unit BPST instanton centered at the south origin: A = Im(x̄ dx)/(1 + |x|²) in both charts,
// F = dx̄ ∧ dx/(1 + |x|²)², transition g_SN(x) = x̄/|x|.
std::shared_ptr<const BundleData> instanton_bundle();

// ξ(x; u₁..u₄) = (1/8π²)Tr(F ∧ F) in the coordinates of `chart`.
double char_form(const BundleData& bundle, int chart, const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& u);
// π*ξ on the total space.
DifferentialForm<TotalSpace, double> char_form_on_total(std::shared_ptr<const BundleData> bundle);

// CS = (k/8π²)Tr(A ∧ dA + ⅔A ∧ A ∧ A) with A the connection form on the total space.
double chern_simons(const BundleData& bundle, const BundlePoint& b, const std::vector<BundleTangent>& v, int level);
DifferentialForm<TotalSpace, double> chern_simons_form(std::shared_ptr<const BundleData> bundle, int level);

struct InstantonNumber {
  double value = 0.0;
  double south = 0.0;  // contribution of ρ_S ξ
  double north = 0.0;  // contribution of ρ_N ξ
  bool positively_oriented = true;
};

// ∫ ξ with the partition of unity ρ_S = 1/(1 + |x|⁴), ρ_N = 1 − ρ_S, by Gauss–Legendre in the
// compactified radius and hyperspherical angles.
InstantonNumber instanton_number(const BundleData& bundle, int radial_nodes = 48, int angular_nodes = 12);

// Gauss–Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

// The loop bundle LP → LM.
using LoopBundlePoint = Loop<BundlePoint>;
using LoopBundleTangent = Loop<BundleTangent>;
using LoopTotalSpace = LoopSpace<TotalSpace>;
using LoopGerbe = GerbeGeometry<LoopTotalSpace, GroupLoop, AlgebraLoop, LoopExtension>;

// Φ_p(θ_j) = A(p(θ_j); ∂p/∂θ), so that p*A = Φ_p dθ.
AlgebraLoop higgs_from_connection(const TotalSpace& space, const LoopBundlePoint& p);
// max_j |Φ_{pγ} − Ad_{γ⁻¹}Φ_p − γ⁻¹∂γ/∂θ|.
double higgs_transformation_residual(const TotalSpace& space, const LoopBundlePoint& p, const GroupLoop& gamma);

// ℓ(p, X) = −(ki/2π)∫Tr(p*A · X).
Imag loop_reduced_splitting(const TotalSpace& space, const LoopBundlePoint& p, const AlgebraLoop& x, int level);

// Pointwise connection and curvature on LP, ℓ from loop_reduced_splitting plus the split shift of `model`.
LoopGerbe loop_gerbe(std::shared_ptr<const BundleData> bundle, const LoopExtension& model);

// f(p; V, W) = −(ki/2π)∫{Tr(A(V) ∂_θ A(W)) − Tr(p*A · F(V, W))} for the unshifted split.
Imag loop_curving(const TotalSpace& space, const LoopBundlePoint& p, const LoopBundleTangent& v,
                  const LoopBundleTangent& w, int level);

// Υ(p; V) = (k/8π²)∫Tr(p*A · A(V)).
double upsilon(const TotalSpace& space, const LoopBundlePoint& p, const LoopBundleTangent& v, int level);
DifferentialForm<LoopTotalSpace, double> upsilon_form(std::shared_ptr<const BundleData> bundle, int level);

struct TransgressionResidual {
  Imag curving;       // f from the gerbe pipeline
  Imag transgressed;  // 2πi(τ_L CS + dΥ)
  double residual = 0.0;
};

// f = 2πi(τ_L CS + dΥ) at one loop and pair of tangents, dΥ by extrapolated differences of step h.
TransgressionResidual cs_transgression_residual(std::shared_ptr<const BundleData> bundle, const LoopBundlePoint& p,
                                                const LoopBundleTangent& v, const LoopBundleTangent& w, int level,
                                                double h);

// Loops in SU(2) with left-invariant frozen fields γ ↦ γ·exp(tX).
struct LoopGroupSpace {
  using Point = GroupLoop;
  using Tangent = AlgebraLoop;

  Point flow(const Point& g, const Tangent& x, double t) const { return g * exp(t * x); }
  Tangent bracket(const Tangent& x, const Tangent& y) const { return gerbekit::bracket(x, y); }
  Tangent difference(const Point& g, const Point& q) const;
  void require_clearance(const Point&, const Tangent&, double) const {}
};

struct VolumeRelation {
  Imag lhs;  // −½ω(μ, μ)(X, Y) = −ω(X, Y)
  Imag rhs;  // 2πi(dβ − τ_L σ) with σ = (k/24π²)Tr(μ ∧ μ ∧ μ) = −CS(μ), β = (k/8π²)∫Tr(γ⁻¹∂_θγ X)
  double residual = 0.0;
};

// The relation between 2-forms on LSU(2) at γ, on left-invariant tangents X, Y.
VolumeRelation volume_relation(const GroupLoop& gamma, const AlgebraLoop& x, const AlgebraLoop& y, int level,
                               double h);

struct StringClassResidual {
  Imag three_curvature;  // Ξ from the gerbe pipeline
  Imag transgressed;     // −2πik τ_L ξ
  double residual = 0.0;
};

StringClassResidual string_class_residual(const LoopGerbe& geo, const LoopBundlePoint& p,
                                          const std::vector<LoopBundleTangent>& v, double h);

using DiskBundlePoint = DiskMap<BundlePoint>;
using DiskBundleTangent = DiskMap<BundleTangent>;
using DiskTotalSpace = DiskSpace<TotalSpace>;

// Ñ = −2πi(τ_Σ CS − r*Υ).
DifferentialForm<DiskTotalSpace, Imag> sigma_connection_form(std::shared_ptr<const BundleData> bundle, int level);
// K = −2πik τ_Σ ξ on maps Σ → P, through their projections.
DifferentialForm<DiskTotalSpace, Imag> sigma_scalar_curvature_form(std::shared_ptr<const BundleData> bundle,
                                                                   int level);

struct SigmaSurface {
  Imag connection;        // Ñ(pΣ; V)
  Imag scalar_curvature;  // K(pΣ; V, W)
  double descent = 0.0;   // |π_Σ*K − (dÑ − r*f)|
  double stokes = 0.0;    // |r*Ξ + dK| on (V, W, Z)
};

// Evaluates Ñ, K and both identities at a disk map in P; `boundary` must equal r(pΣ).
SigmaSurface sigma_surface(std::shared_ptr<const BundleData> bundle, const DiskBundlePoint& p,
                           const LoopBundlePoint& boundary, const std::vector<DiskBundleTangent>& v, int level,
                           double h);

// A smooth map S¹ → P in one chart, x(θ) = c + Σ aₙcos nθ + bₙsin nθ and g(θ) = exp(Y(θ)) with Y of the
// same form; read as a tangent field it is (x(θ), Y(θ)).
struct FourierField {
  int chart = kSouth;
  Eigen::VectorXd base_constant;
  std::vector<Eigen::VectorXd> base_cos, base_sin;
  Eigen::Vector3d fiber_constant = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> fiber_cos, fiber_sin;

  Eigen::VectorXd base_at(double theta) const;
  AlgebraElement fiber_at(double theta) const;
  LoopBundlePoint point(int samples) const;
  LoopBundleTangent tangent(int samples) const;
};

struct LoopConfig {
  int chart = kSouth;
  int modes = 3;
  double center_radius = 0.5;
  double amplitude = 0.3;
  double fiber_amplitude = 0.5;
};

// Coefficients of mode n are scaled by amplitude/n.
FourierField random_fourier_field(SampleRng& rng, const LoopConfig& config, int dimension = 4);
GroupLoop random_group_loop(SampleRng& rng, int samples, int modes, double amplitude);
AlgebraLoop random_algebra_loop(SampleRng& rng, int samples, int modes, double amplitude);

// A quadratic map of the unit disk into one chart of P, and the same data read as a tangent field.
struct PolynomialDiskField {
  int chart = kSouth;
  // Coefficients of 1, s₁, s₂, s₁², s₁s₂, s₂².
  std::array<Eigen::VectorXd, 6> base;
  std::array<Eigen::Vector3d, 6> fiber;

  Eigen::VectorXd base_at(const Eigen::Vector2d& s) const;
  AlgebraElement fiber_at(const Eigen::Vector2d& s) const;
  DiskBundlePoint point(std::shared_ptr<const DiskGrid> grid) const;
  DiskBundleTangent tangent(std::shared_ptr<const DiskGrid> grid) const;
};

struct DiskConfig {
  int chart = kSouth;
  double center_radius = 0.4;
  double amplitude = 0.3;
  double fiber_amplitude = 0.5;
};

PolynomialDiskField random_disk_field(SampleRng& rng, const DiskConfig& config, int dimension = 4);

// The equatorial S³ ⊂ S⁴ with stereographic charts from −1 and +1, mapped into the south and north charts.
BaseMap equatorial_sphere();

}  // namespace gerbekit

#endif
