#ifndef GERBEKIT_CENTRAL_EXT_HPP
#define GERBEKIT_CENTRAL_EXT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <concepts>
#include <functional>
#include <optional>
#include <type_traits>
#include <vector>

#include "gerbekit/forms.hpp"
#include "gerbekit/imag.hpp"
#include "gerbekit/lie.hpp"

namespace gerbekit {

// Element (X, a) of Lie Γ ⊕ iR in the product coordinates of Γ × T.
struct ExtendedAlgebraElement {
  AlgebraElement base;
  Imag central;

  ExtendedAlgebraElement& operator+=(const ExtendedAlgebraElement& o) {
    base += o.base;
    central += o.central;
    return *this;
  }
  friend ExtendedAlgebraElement operator+(ExtendedAlgebraElement a, const ExtendedAlgebraElement& b) { return a += b; }
  friend ExtendedAlgebraElement operator-(ExtendedAlgebraElement a, const ExtendedAlgebraElement& b) {
    a.base -= b.base;
    a.central -= b.central;
    return a;
  }
  friend ExtendedAlgebraElement operator*(double s, ExtendedAlgebraElement a) {
    a.base *= s;
    a.central *= s;
    return a;
  }
  double norm() const { return std::max(base.norm(), std::abs(central.value)); }
};

// Element (γ, z) of Γ × T; the group law is twisted by the product cocycle.
struct ExtendedGroupElement {
  GroupElement base;
  std::complex<double> phase{1.0, 0.0};
};

double distance(const ExtendedGroupElement& a, const ExtendedGroupElement& b);

// λ(X) = i c·coords(X); an empty coefficient vector is the zero map.
struct LinearShift {
  Eigen::VectorXd coefficients;

  Imag operator()(const AlgebraElement& x) const;
  bool is_zero() const { return coefficients.size() == 0 || coefficients.isZero(0.0); }
  friend LinearShift operator+(const LinearShift& a, const LinearShift& b);
};

// Central extension of a finite-dimensional Γ by T presented as Γ × T with the product
// (γ₁, z₁)(γ₂, z₂) = (γ₁γ₂, z₁z₂ c(γ₁, γ₂)). The split is σ(X) = (X, λ(X)).
class FiniteExtension {
 public:
  enum class Family { Trivial, Heisenberg };

  static FiniteExtension trivial(GroupKind kind, LinearShift shift = {});
  // Heisenberg extension of R² with c((a₁,b₁),(a₂,b₂)) = exp(iκ(a₁b₂ − b₁a₂)/2).
  static FiniteExtension heisenberg(double kappa = 1.0, LinearShift shift = {});

  Family family() const { return family_; }
  GroupKind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  const LinearShift& shift() const { return shift_; }
  // The same extension with split σ' = σ + extra.
  FiniteExtension shifted(const LinearShift& extra) const;

  Imag split_shift(const AlgebraElement& x) const { return shift_(x); }
  ExtendedAlgebraElement split(const AlgebraElement& x) const { return {x, shift_(x)}; }
  // ω_σ(X, Y) = [σX, σY] − σ[X, Y].
  Imag lie_cocycle(const AlgebraElement& x, const AlgebraElement& y) const;
  // Z_σ(γ, X) = Ad_γ σ(X) − σ(Ad_γ X).
  Imag group_cocycle(const GroupElement& g, const AlgebraElement& x) const;
  std::complex<double> product_cocycle(const GroupElement& a, const GroupElement& b) const;

  ExtendedGroupElement multiply(const ExtendedGroupElement& a, const ExtendedGroupElement& b) const;
  ExtendedGroupElement inverse(const ExtendedGroupElement& a) const;
  ExtendedGroupElement exp(const ExtendedAlgebraElement& x) const;
  ExtendedAlgebraElement log(const ExtendedGroupElement& g) const;
  ExtendedAlgebraElement bracket(const ExtendedAlgebraElement& x, const ExtendedAlgebraElement& y) const;
  ExtendedAlgebraElement adjoint(const GroupElement& g, const ExtendedAlgebraElement& x) const;

  // Left logarithmic derivative c(0)⁻¹c'(0) of a curve in Γ × T, fourth-order differences of step h.
  ExtendedAlgebraElement maurer_cartan(const std::function<ExtendedGroupElement(double)>& curve, double h) const;
  // ν_σ = μ̂ − σ(q*μ) on a left-trivialized tangent.
  Imag nu(const ExtendedAlgebraElement& mu_hat) const { return mu_hat.central - shift_(mu_hat.base); }
  // ν_σ at (γ, u) on the coordinate tangent of t ↦ (γ exp(tV), u e^{tξ}), μ̂ by finite differences.
  Imag nu_connection(const ExtendedGroupElement& p, const AlgebraElement& v, Imag xi, double h) const;
  // F_ν(X, Y) = −½ω_σ(μ, μ)(X, Y) = −ω_σ(X, Y) on left-invariant X, Y.
  Imag nu_curvature(const AlgebraElement& x, const AlgebraElement& y) const { return -lie_cocycle(x, y); }

  // Independent evaluations through the twisted product, used as cross-checks.
  Imag group_cocycle_numeric(const GroupElement& g, const AlgebraElement& x, double h) const;
  Imag lie_cocycle_numeric(const AlgebraElement& x, const AlgebraElement& y, double h) const;

 private:
  FiniteExtension(Family f, GroupKind k, double kappa, LinearShift s)
      : family_(f), kind_(k), kappa_(kappa), shift_(std::move(s)) {}
  Imag base_lie_cocycle(const AlgebraElement& x, const AlgebraElement& y) const;
  Imag base_group_cocycle(const GroupElement& g, const AlgebraElement& x) const;

  Family family_;
  GroupKind kind_;
  double kappa_;
  LinearShift shift_;
};

// Γ × T with left-invariant frozen fields: flow p·exp(tX̂), brackets in Lie Γ̂.
struct ExtendedGroupSpace {
  using Point = ExtendedGroupElement;
  using Tangent = ExtendedAlgebraElement;

  FiniteExtension model;

  Point flow(const Point& p, const Tangent& v, double t) const { return model.multiply(p, model.exp(t * v)); }
  Tangent bracket(const Tangent& v, const Tangent& w) const { return model.bracket(v, w); }
  Tangent difference(const Point& p, const Point& q) const { return model.log(model.multiply(model.inverse(p), q)); }
  void require_clearance(const Point&, const Tangent&, double) const {}
};

// ν_σ as a 1-form on Γ × T; each value differentiates the flow of its argument with step h.
DifferentialForm<ExtendedGroupSpace, Imag> nu_form(const FiniteExtension& model, double h);

// Λ(θ) = Σ_n cos(nθ) a_n + sin(nθ) b_n in su(2), acting by λ(X) = (i/2π)∫⟨Λ, X⟩ dθ.
struct LoopShift {
  std::vector<Eigen::Vector3d> cos_coefficients;
  std::vector<Eigen::Vector3d> sin_coefficients;

  AlgebraElement at(double theta) const;
  AlgebraLoop sample(int n) const;
  Imag operator()(const AlgebraLoop& x) const;
  bool is_zero() const;
  friend LoopShift operator+(const LoopShift& a, const LoopShift& b);
};

// Level-k central extension of L SU(2), infinitesimal only:
// ω(X, Y) = (ki/2π)∫Tr(X dY), Z(γ, X) = −(ki/2π)∫Tr(γ⁻¹dγ X), shifted by λ.
class LoopExtension {
 public:
  explicit LoopExtension(int level, LoopShift shift = {}) : level_(level), shift_(std::move(shift)) {}

  int level() const { return level_; }
  const LoopShift& shift() const { return shift_; }
  LoopExtension shifted(const LoopShift& extra) const { return LoopExtension(level_, shift_ + extra); }

  Imag split_shift(const AlgebraLoop& x) const { return shift_(x); }
  Imag lie_cocycle(const AlgebraLoop& x, const AlgebraLoop& y) const;
  Imag group_cocycle(const GroupLoop& g, const AlgebraLoop& x) const;
  [[noreturn]] std::complex<double> product_cocycle(const GroupLoop&, const GroupLoop&) const;

 private:
  int level_;
  LoopShift shift_;
};

// (ki/2π)·Δθ Σ_j Tr(X_j Y_j), the trapezoid rule for (ki/2π)∫Tr(XY) dθ.
Imag loop_trace_integral(int level, const AlgebraLoop& x, const AlgebraLoop& y);

template <class G, class A>
struct CocycleSample {
  G gamma;
  G eta;
  A x;
  A y;
  A z;
};

struct CocycleResiduals {
  double z_adjoint = 0.0;        // Z(γη, X) − Z(γ, Ad_η X) − Z(η, X)
  double z_shift = 0.0;          // Z_σ'(γ, X) − Z_σ(γ, X) − (σ' − σ)(X − Ad_γ X)
  double antisymmetry = 0.0;     // ω(X, Y) + ω(Y, X)
  double jacobi = 0.0;           // ω([X,Y],Z) + ω([Y,Z],X) + ω([Z,X],Y)
  double derivative_link = 0.0;  // d/dt Z(exp tX, Y)|₀ − ω(X, Y)
  std::optional<double> group_two_cocycle;  // c(γ₁,γ₂)c(γ₁γ₂,γ₃) / (c(γ₁,γ₂γ₃)c(γ₂,γ₃)) − 1
};

template <class Model>
concept HasProductCocycle = requires(const Model& m, const GroupElement& g) {
  { m.product_cocycle(g, g) } -> std::convertible_to<std::complex<double>>;
} && !std::is_same_v<Model, LoopExtension>;

// Max residuals of the cocycle identities over the samples; `shifted` is the model with σ' = σ + λ
// and `lambda` evaluates λ. The derivative in t uses central differences of step h.
template <class Model, class G, class A, class Lambda>
CocycleResiduals cocycle_identities_residual(const Model& model, const Model& shifted, Lambda lambda,
                                             const std::vector<CocycleSample<G, A>>& samples, double h) {
  CocycleResiduals r;
  for (const auto& s : samples) {
    const Imag lhs = model.group_cocycle(s.gamma * s.eta, s.x);
    const Imag rhs = model.group_cocycle(s.gamma, adjoint(s.eta, s.x)) + model.group_cocycle(s.eta, s.x);
    r.z_adjoint = std::max(r.z_adjoint, abs(lhs - rhs));

    const Imag diff = shifted.group_cocycle(s.gamma, s.x) - model.group_cocycle(s.gamma, s.x);
    r.z_shift = std::max(r.z_shift, abs(diff - lambda(s.x - adjoint(s.gamma, s.x))));

    r.antisymmetry = std::max(r.antisymmetry, abs(model.lie_cocycle(s.x, s.y) + model.lie_cocycle(s.y, s.x)));
    const Imag jac = model.lie_cocycle(bracket(s.x, s.y), s.z) + model.lie_cocycle(bracket(s.y, s.z), s.x) +
                     model.lie_cocycle(bracket(s.z, s.x), s.y);
    r.jacobi = std::max(r.jacobi, abs(jac));

    const Imag dz = (model.group_cocycle(exp(h * s.x), s.y) - model.group_cocycle(exp((-h) * s.x), s.y)) / (2.0 * h);
    r.derivative_link = std::max(r.derivative_link, abs(dz - model.lie_cocycle(s.x, s.y)));

    if constexpr (HasProductCocycle<Model>) {
      const auto& a = s.gamma;
      const auto& b = s.eta;
      const auto c3 = exp(s.z);
      const std::complex<double> left = model.product_cocycle(a, b) * model.product_cocycle(a * b, c3);
      const std::complex<double> right = model.product_cocycle(a, b * c3) * model.product_cocycle(b, c3);
      r.group_two_cocycle = std::max(r.group_two_cocycle.value_or(0.0), std::abs(left / right - 1.0));
    }
  }
  return r;
}

}  // namespace gerbekit

#endif
