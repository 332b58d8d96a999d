#ifndef GERBEKIT_LIE_HPP
#define GERBEKIT_LIE_HPP

#include <Eigen/Dense>
#include <complex>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "gerbekit/errors.hpp"

namespace gerbekit {

enum class GroupKind { SU2, U2, R2 };

std::string_view to_string(GroupKind kind);

// Lie algebra element. SU(2) uses imaginary quaternions (x, y, z) ↔ x·i + y·j + z·k,
// U(2) uses 2×2 anti-Hermitian matrices, R² uses pairs of reals.
class AlgebraElement {
 public:
  using Payload = std::variant<Eigen::Vector3d, Eigen::Matrix2cd, Eigen::Vector2d>;

  AlgebraElement() : payload_(Eigen::Vector3d(Eigen::Vector3d::Zero())) {}

  static AlgebraElement su2(const Eigen::Vector3d& v) { return AlgebraElement(Payload(v)); }
  static AlgebraElement u2(const Eigen::Matrix2cd& m);
  static AlgebraElement r2(const Eigen::Vector2d& v) { return AlgebraElement(Payload(v)); }
  static AlgebraElement zero(GroupKind kind);
  // Inverse of coordinates(); SU2 uses 3, U2 4, R2 2 real coordinates.
  static AlgebraElement from_coordinates(GroupKind kind, const Eigen::VectorXd& c);

  GroupKind kind() const { return static_cast<GroupKind>(payload_.index()); }
  const Payload& payload() const { return payload_; }

  const Eigen::Vector3d& as_su2() const;
  const Eigen::Matrix2cd& as_u2() const;
  const Eigen::Vector2d& as_r2() const;

  // Real coordinates: SU2 (x, y, z); U2 with X = [[i a, b + i c], [-b + i c, i d]] → (a, b, c, d).
  Eigen::VectorXd coordinates() const;
  // Matrix in the defining 2×2 representation (SU2, U2 only).
  Eigen::Matrix2cd matrix() const;
  // Max-norm of the coordinates.
  double norm() const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(double s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(AlgebraElement a, double s) { return a *= s; }
  friend AlgebraElement operator/(AlgebraElement a, double s) { return a *= 1.0 / s; }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= -1.0; }

 private:
  explicit AlgebraElement(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

class GroupElement {
 public:
  using Payload = std::variant<Eigen::Quaterniond, Eigen::Matrix2cd, Eigen::Vector2d>;

  GroupElement() : payload_(Eigen::Quaterniond::Identity()) {}

  static GroupElement su2(const Eigen::Quaterniond& q);
  static GroupElement u2(const Eigen::Matrix2cd& m);
  static GroupElement r2(const Eigen::Vector2d& v) { return GroupElement(Payload(v)); }
  static GroupElement identity(GroupKind kind);

  GroupKind kind() const { return static_cast<GroupKind>(payload_.index()); }
  const Payload& payload() const { return payload_; }

  const Eigen::Quaterniond& as_su2() const;
  const Eigen::Matrix2cd& as_u2() const;
  const Eigen::Vector2d& as_r2() const;

  Eigen::Matrix2cd matrix() const;
  GroupElement inverse() const;

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

 private:
  explicit GroupElement(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

// Max-norm distance in the natural embedding (quaternion components, matrix entries, R² coordinates).
double distance(const GroupElement& a, const GroupElement& b);

GroupElement exp(const AlgebraElement& x);
// Principal logarithm; exact inverse of exp near the identity.
AlgebraElement log(const GroupElement& g);
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
// Tr(XY) in the defining representation; real for anti-Hermitian X, Y. Undefined on R².
double trace_product(const AlgebraElement& x, const AlgebraElement& y);
// Invariant inner product: −½Tr(XY) on SU2 and U2, the dot product on R².
double pairing(const AlgebraElement& x, const AlgebraElement& y);
inline GroupElement inverse(const GroupElement& g) { return g.inverse(); }
// exp(u)⁻¹ · d/dt exp(u + tY) at t = 0.
AlgebraElement left_dexp(const AlgebraElement& u, const AlgebraElement& y);

int coordinate_count(GroupKind kind);
void require_same_kind(GroupKind a, GroupKind b, const char* where);

// Samples of a map S¹ → T at θ_j = 2πj/N.
template <class T>
struct Loop {
  std::vector<T> samples;

  Loop() = default;
  explicit Loop(std::vector<T> s) : samples(std::move(s)) {}
  Loop(std::size_t n, const T& value) : samples(n, value) {}

  int size() const { return static_cast<int>(samples.size()); }
  double step() const { return 2.0 * M_PI / static_cast<double>(samples.size()); }
  double theta(int j) const { return step() * j; }
  int wrap(int j) const {
    const int n = size();
    return ((j % n) + n) % n;
  }
  const T& operator[](int j) const { return samples[static_cast<std::size_t>(wrap(j))]; }
  T& operator[](int j) { return samples[static_cast<std::size_t>(wrap(j))]; }
};

using GroupLoop = Loop<GroupElement>;
using AlgebraLoop = Loop<AlgebraElement>;

constexpr int kMinLoopSamples = 8;

void require_loop_size(int n, const char* where);
template <class A, class B>
void require_same_grid(const Loop<A>& a, const Loop<B>& b, const char* where) {
  if (a.size() != b.size()) {
    throw GridMismatch(std::string(where) + ": loop sizes " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()));
  }
}

// Sixth-order central difference on the cyclic grid; at(k) is the sample at offset k.
template <class F>
auto loop_stencil(F&& at, double step) {
  using T = std::decay_t<decltype(at(0))>;
  const double w = 1.0 / (60.0 * step);
  return T((45.0 * w) * at(1) + (-45.0 * w) * at(-1) + (-9.0 * w) * at(2) + (9.0 * w) * at(-2) + w * at(3) +
         (-w) * at(-3));
}

// γ(θ_j)⁻¹ γ'(θ_j) from the central difference of the log chart centered at γ(θ_j).
AlgebraElement mc_pullback(const GroupLoop& path, int j);
AlgebraLoop mc_pullback(const GroupLoop& path);
// Central sixth-order derivative d/dθ of an algebra loop.
AlgebraLoop derivative(const AlgebraLoop& x);
// Largest second difference over the cyclic grid (group loops measured in the local log chart).
double max_second_difference(const GroupLoop& path);
double max_second_difference(const AlgebraLoop& x);

GroupLoop operator*(const GroupLoop& a, const GroupLoop& b);
GroupLoop inverse(const GroupLoop& a);
GroupLoop exp(const AlgebraLoop& x);
AlgebraLoop adjoint(const GroupLoop& g, const AlgebraLoop& x);
AlgebraLoop bracket(const AlgebraLoop& x, const AlgebraLoop& y);
AlgebraLoop operator+(const AlgebraLoop& a, const AlgebraLoop& b);
AlgebraLoop operator-(const AlgebraLoop& a, const AlgebraLoop& b);
AlgebraLoop operator*(double s, const AlgebraLoop& a);
double norm(const AlgebraLoop& x);
double distance(const GroupLoop& a, const GroupLoop& b);

}  // namespace gerbekit

#endif
