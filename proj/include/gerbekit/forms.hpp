#ifndef GERBEKIT_FORMS_HPP
#define GERBEKIT_FORMS_HPP

#include <Eigen/Dense>
#include <concepts>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gerbekit/errors.hpp"
#include "gerbekit/imag.hpp"
#include "gerbekit/lie.hpp"

namespace gerbekit {

// A space on which forms are evaluated numerically. Tangent vectors are stored in a
// point-independent representation; each one is extended to a "frozen" vector field
// whose flow is flow(p, v, t) and whose Lie brackets are bracket(v, w).
template <class S>
concept NumericSpace = requires(const S& s, const typename S::Point& p, const typename S::Tangent& v, double t) {
  { s.flow(p, v, t) } -> std::convertible_to<typename S::Point>;
  { s.bracket(v, v) } -> std::convertible_to<typename S::Tangent>;
  { s.difference(p, p) } -> std::convertible_to<typename S::Tangent>;
  s.require_clearance(p, v, t);
  { v + v } -> std::convertible_to<typename S::Tangent>;
  { t * v } -> std::convertible_to<typename S::Tangent>;
};

template <NumericSpace S, class V>
struct DifferentialForm {
  using Point = typename S::Point;
  using Tangent = typename S::Tangent;
  using Evaluator = std::function<V(const Point&, const std::vector<Tangent>&)>;

  int degree = 0;
  Evaluator eval;

  V operator()(const Point& p, const std::vector<Tangent>& v) const {
    if (static_cast<int>(v.size()) != degree) {
      throw DegreeError("form of degree " + std::to_string(degree) + " evaluated on " + std::to_string(v.size()) +
                        " vectors");
    }
    return eval(p, v);
  }
};

namespace detail {

template <class V>
void accumulate(std::optional<V>& acc, const V& term) {
  if (acc) {
    *acc = *acc + term;
  } else {
    acc = term;
  }
}

template <class T>
std::vector<T> without(const std::vector<T>& v, std::size_t i) {
  std::vector<T> out;
  out.reserve(v.size() - 1);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (k != i) out.push_back(v[k]);
  return out;
}

}  // namespace detail

// dα(v₀..v_k) = Σ_i (−1)^i v_i(α(..v̂_i..)) + Σ_{i<j} (−1)^{i+j} α([v_i, v_j], ..v̂_i..v̂_j..),
// directional derivatives by central differences of step h along the frozen fields.
template <NumericSpace S, class V>
V exterior_derivative(const S& space, const DifferentialForm<S, V>& alpha, const typename S::Point& p,
                      const std::vector<typename S::Tangent>& v, double h) {
  if (static_cast<int>(v.size()) != alpha.degree + 1) {
    throw DegreeError("exterior derivative of a " + std::to_string(alpha.degree) + "-form needs " +
                      std::to_string(alpha.degree + 1) + " vectors");
  }
  std::optional<V> acc;
  for (std::size_t i = 0; i < v.size(); ++i) {
    space.require_clearance(p, v[i], h);
    const auto rest = detail::without(v, i);
    const V plus = alpha(space.flow(p, v[i], h), rest);
    const V minus = alpha(space.flow(p, v[i], -h), rest);
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    detail::accumulate(acc, V((sign / (2.0 * h)) * (plus - minus)));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      std::vector<typename S::Tangent> args;
      args.reserve(v.size() - 1);
      args.push_back(space.bracket(v[i], v[j]));
      for (std::size_t k = 0; k < v.size(); ++k)
        if (k != i && k != j) args.push_back(v[k]);
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      detail::accumulate(acc, V(sign * alpha(p, args)));
    }
  }
  return *acc;
}

// (4·dα|_{h/2} − dα|_h)/3, which cancels the O(h²) term of the central differences.
template <NumericSpace S, class V>
V extrapolated_derivative(const S& space, const DifferentialForm<S, V>& alpha, const typename S::Point& p,
                          const std::vector<typename S::Tangent>& v, double h) {
  const V coarse = exterior_derivative(space, alpha, p, v, h);
  const V fine = exterior_derivative(space, alpha, p, v, 0.5 * h);
  return V((4.0 / 3.0) * fine + (-1.0 / 3.0) * coarse);
}

template <NumericSpace S, class V>
DifferentialForm<S, V> exterior_derivative(const S& space, const DifferentialForm<S, V>& alpha, double h) {
  return {alpha.degree + 1, [space, alpha, h](const typename S::Point& p, const std::vector<typename S::Tangent>& v) {
            return exterior_derivative(space, alpha, p, v, h);
          }};
}

// (α∧β)(v₁..v_{p+q}) = Σ over (p,q)-shuffles sgn·product(α(v_σ(1..p)), β(v_σ(p+1..p+q))).
template <NumericSpace S, class A, class B, class Product>
auto wedge(const DifferentialForm<S, A>& alpha, const DifferentialForm<S, B>& beta, Product product)
    -> DifferentialForm<S, decltype(product(std::declval<A>(), std::declval<B>()))> {
  using V = decltype(product(std::declval<A>(), std::declval<B>()));
  const int p = alpha.degree;
  const int q = beta.degree;
  return {p + q, [alpha, beta, product, p, q](const typename S::Point& x, const std::vector<typename S::Tangent>& v) {
            std::optional<V> acc;
            const int n = p + q;
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
              if (__builtin_popcount(mask) != p) continue;
              std::vector<typename S::Tangent> left;
              std::vector<typename S::Tangent> right;
              int inversions = 0;
              int rights_seen = 0;
              for (int k = 0; k < n; ++k) {
                if (mask & (1u << k)) {
                  left.push_back(v[k]);
                  inversions += rights_seen;
                } else {
                  right.push_back(v[k]);
                  ++rights_seen;
                }
              }
              const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
              detail::accumulate(acc, V(sign * product(alpha(x, left), beta(x, right))));
            }
            return *acc;
          }};
}

// φ*α for φ: S₁ → S₂ with differential push(x, v).
template <NumericSpace S1, NumericSpace S2, class V>
DifferentialForm<S1, V> pullback(
    const DifferentialForm<S2, V>& alpha, std::function<typename S2::Point(const typename S1::Point&)> map,
    std::function<typename S2::Tangent(const typename S1::Point&, const typename S1::Tangent&)> push) {
  return {alpha.degree, [alpha, map, push](const typename S1::Point& x, const std::vector<typename S1::Tangent>& v) {
            std::vector<typename S2::Tangent> pushed;
            pushed.reserve(v.size());
            for (const auto& w : v) pushed.push_back(push(x, w));
            return alpha(map(x), pushed);
          }};
}

// Fourth-order central-difference Jacobian of a map Rⁿ → Rᵐ.
Eigen::MatrixXd jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                         double h);
// Fourth-order central difference of t ↦ f(t) at 0.
double derivative_at_zero(const std::function<double(double)>& f, double h);

struct Chart {
  std::string name;
  // Distance from a point (in this chart's coordinates) to the edge of the chart domain.
  std::function<double(const Eigen::VectorXd&)> clearance;
};

struct ChartedManifold {
  std::string name;
  int dimension = 0;
  std::vector<Chart> charts;
  // Coordinates of a point of chart `from` in chart `to`.
  std::function<Eigen::VectorXd(int from, int to, const Eigen::VectorXd&)> transition;
  // Differential of the coordinate change applied to u; when empty, fourth-order differences are used.
  std::function<Eigen::VectorXd(int from, int to, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> differential;
  bool positively_oriented = true;

  int chart_index(const std::string& name) const;
  Eigen::VectorXd to_chart(int from, int to, const Eigen::VectorXd& x) const;
  Eigen::VectorXd push_tangent(int from, int to, const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
  double clearance(int chart, const Eigen::VectorXd& x) const { return charts.at(chart).clearance(x); }
};

// One chart of a manifold, viewed as an open subset of Rⁿ with coordinate vector fields.
struct EuclideanSpace {
  using Point = Eigen::VectorXd;
  using Tangent = Eigen::VectorXd;

  std::string name = "R^n";
  int dimension = 0;
  std::function<double(const Eigen::VectorXd&)> clearance;

  EuclideanSpace() = default;
  EuclideanSpace(std::string n, int dim, std::function<double(const Eigen::VectorXd&)> c = {})
      : name(std::move(n)), dimension(dim), clearance(std::move(c)) {}
  static EuclideanSpace chart_of(const ChartedManifold& m, int chart);

  Point flow(const Point& p, const Tangent& v, double t) const { return p + t * v; }
  Tangent bracket(const Tangent& v, const Tangent&) const { return Tangent::Zero(v.size()); }
  Tangent difference(const Point& p, const Point& q) const { return q - p; }
  void require_clearance(const Point& p, const Tangent& v, double h) const;
};

}  // namespace gerbekit

#endif
