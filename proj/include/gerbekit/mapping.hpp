#ifndef GERBEKIT_MAPPING_HPP
#define GERBEKIT_MAPPING_HPP

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "gerbekit/forms.hpp"

namespace gerbekit {

template <class T>
Loop<T> operator+(const Loop<T>& a, const Loop<T>& b) {
  require_same_grid(a, b, "loop tangent sum");
  Loop<T> out = a;
  for (int j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

template <class T>
Loop<T> operator*(double s, const Loop<T>& a) {
  Loop<T> out = a;
  for (auto& v : out.samples) v = s * v;
  return out;
}

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(Imag x) { return std::abs(x.value); }
inline double magnitude(const AlgebraElement& x) { return x.norm(); }
inline double magnitude(const AlgebraLoop& x) { return norm(x); }

// Free loops S¹ → S sampled at θ_j = 2πj/N; tangents are sampled vector fields along the loop.
template <NumericSpace S>
struct LoopSpace {
  using Point = Loop<typename S::Point>;
  using Tangent = Loop<typename S::Tangent>;

  S target;

  Point flow(const Point& p, const Tangent& v, double t) const {
    require_same_grid(p, v, "loop flow");
    Point out;
    out.samples.reserve(p.samples.size());
    for (int j = 0; j < p.size(); ++j) out.samples.push_back(target.flow(p[j], v[j], t));
    return out;
  }
  Tangent bracket(const Tangent& v, const Tangent& w) const {
    Tangent out;
    out.samples.reserve(v.samples.size());
    for (int j = 0; j < v.size(); ++j) out.samples.push_back(target.bracket(v[j], w[j]));
    return out;
  }
  Tangent difference(const Point& p, const Point& q) const {
    Tangent out;
    out.samples.reserve(p.samples.size());
    for (int j = 0; j < p.size(); ++j) out.samples.push_back(target.difference(p[j], q[j]));
    return out;
  }
  void require_clearance(const Point& p, const Tangent& v, double h) const {
    for (int j = 0; j < p.size(); ++j) target.require_clearance(p[j], v[j], h);
  }
};

// ∂p/∂θ at θ_j, central difference in the local chart of p(θ_j).
template <NumericSpace S>
typename S::Tangent loop_velocity(const S& space, const Loop<typename S::Point>& p, int j) {
  return loop_stencil([&](int k) { return space.difference(p[j], p[j + k]); }, p.step());
}

template <NumericSpace S>
Loop<typename S::Tangent> loop_velocity(const S& space, const Loop<typename S::Point>& p) {
  Loop<typename S::Tangent> out;
  out.samples.reserve(p.samples.size());
  for (int j = 0; j < p.size(); ++j) out.samples.push_back(loop_velocity(space, p, j));
  return out;
}

// τ_L α(p; V₁..V_r) = ∫ α(p(θ); ∂_θ p, V₁(θ), .., V_r(θ)) dθ by the trapezoid rule. The loop
// direction is inserted first; with this convention (−1)^m dτ_F = τ_F d − τ_∂F for m = dim F.
template <NumericSpace S, class V>
DifferentialForm<LoopSpace<S>, V> transgress_loop(const S& space, const DifferentialForm<S, V>& alpha) {
  if (alpha.degree < 1) throw DegreeError("transgression over a circle needs degree >= 1");
  using P = typename LoopSpace<S>::Point;
  using T = typename LoopSpace<S>::Tangent;
  return {alpha.degree - 1, [space, alpha](const P& p, const std::vector<T>& v) {
            require_loop_size(p.size(), "transgress_loop");
            for (const auto& w : v) require_same_grid(p, w, "transgress_loop");
            std::optional<V> acc;
            std::vector<typename S::Tangent> args(v.size() + 1);
            for (int j = 0; j < p.size(); ++j) {
              args[0] = loop_velocity(space, p, j);
              for (std::size_t k = 0; k < v.size(); ++k) args[k + 1] = v[k][j];
              detail::accumulate(acc, alpha(p[j], args));
            }
            return V(p.step() * *acc);
          }};
}

// Closed unit disk on a polar grid: node 0 is the center, ring i ∈ [1, rings] has radius
// i/rings and `sectors` nodes at angles 2πj/sectors. The outer ring is the boundary loop,
// traversed counterclockwise.
struct DiskGrid {
  int rings = 64;
  int sectors = 256;

  DiskGrid() = default;
  DiskGrid(int r, int s);

  int node_count() const { return 1 + rings * sectors; }
  int node(int ring, int sector) const;
  double radius(int ring) const { return static_cast<double>(ring) / rings; }
  double angle(int sector) const { return 2.0 * M_PI * sector / sectors; }
  Eigen::Vector2d position(int node) const;
  // Counterclockwise triangles of the parameter disk.
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  std::vector<int> boundary() const;

  friend bool operator==(const DiskGrid& a, const DiskGrid& b) { return a.rings == b.rings && a.sectors == b.sectors; }

 private:
  std::vector<std::array<int, 3>> triangles_;
};

template <class T>
struct DiskMap {
  std::shared_ptr<const DiskGrid> grid;
  std::vector<T> samples;

  const T& operator[](int i) const { return samples[static_cast<std::size_t>(i)]; }
};

template <class T>
void require_same_grid(const DiskMap<T>& a, const DiskMap<T>& b, const char* where) {
  if (!(*a.grid == *b.grid) || a.samples.size() != b.samples.size())
    throw GridMismatch(std::string(where) + ": disk grids differ");
}

template <class T>
DiskMap<T> operator+(const DiskMap<T>& a, const DiskMap<T>& b) {
  require_same_grid(a, b, "disk tangent sum");
  DiskMap<T> out = a;
  for (std::size_t i = 0; i < a.samples.size(); ++i) out.samples[i] = a.samples[i] + b.samples[i];
  return out;
}

template <class T>
DiskMap<T> operator*(double s, const DiskMap<T>& a) {
  DiskMap<T> out = a;
  for (auto& v : out.samples) v = s * v;
  return out;
}

template <class T>
Loop<T> restrict_to_boundary(const DiskMap<T>& m) {
  Loop<T> out;
  for (int node : m.grid->boundary()) out.samples.push_back(m[node]);
  return out;
}

template <class T, class F>
DiskMap<T> sample_disk(std::shared_ptr<const DiskGrid> grid, F&& f) {
  DiskMap<T> out{grid, {}};
  out.samples.reserve(static_cast<std::size_t>(grid->node_count()));
  for (int i = 0; i < grid->node_count(); ++i) out.samples.push_back(f(grid->position(i)));
  return out;
}

template <NumericSpace S>
struct DiskSpace {
  using Point = DiskMap<typename S::Point>;
  using Tangent = DiskMap<typename S::Tangent>;

  S target;

  Point flow(const Point& p, const Tangent& v, double t) const {
    Point out{p.grid, {}};
    out.samples.reserve(p.samples.size());
    for (std::size_t i = 0; i < p.samples.size(); ++i) out.samples.push_back(target.flow(p.samples[i], v.samples[i], t));
    return out;
  }
  Tangent bracket(const Tangent& v, const Tangent& w) const {
    Tangent out{v.grid, {}};
    out.samples.reserve(v.samples.size());
    for (std::size_t i = 0; i < v.samples.size(); ++i) out.samples.push_back(target.bracket(v.samples[i], w.samples[i]));
    return out;
  }
  Tangent difference(const Point& p, const Point& q) const {
    Tangent out{p.grid, {}};
    out.samples.reserve(p.samples.size());
    for (std::size_t i = 0; i < p.samples.size(); ++i) out.samples.push_back(target.difference(p.samples[i], q.samples[i]));
    return out;
  }
  void require_clearance(const Point& p, const Tangent& v, double h) const {
    for (std::size_t i = 0; i < p.samples.size(); ++i) target.require_clearance(p.samples[i], v.samples[i], h);
  }
};

// τ_Σ α(P; V₁..V_r) = ∫_Σ α(P(s); ∂₁P, ∂₂P, V₁, .., V_r) ds₁ds₂ with the midpoint rule on each
// triangle: the centroid is taken in the chart of the first vertex and the edge vectors give
// α(E₁, E₂, ..)/2 = area · α(∂₁, ∂₂, ..).
template <NumericSpace S, class V>
DifferentialForm<DiskSpace<S>, V> transgress_disk(const S& space, const DifferentialForm<S, V>& alpha) {
  if (alpha.degree < 2) throw DegreeError("transgression over a disk needs degree >= 2");
  using P = typename DiskSpace<S>::Point;
  using T = typename DiskSpace<S>::Tangent;
  return {alpha.degree - 2, [space, alpha](const P& p, const std::vector<T>& v) {
            for (const auto& w : v)
              if (!(*w.grid == *p.grid)) throw GridMismatch("transgress_disk: tangent on a different disk grid");
            std::optional<V> acc;
            std::vector<typename S::Tangent> args(v.size() + 2);
            for (const auto& tri : p.grid->triangles()) {
              const auto& p0 = p[tri[0]];
              const auto d1 = space.difference(p0, p[tri[1]]);
              const auto d2 = space.difference(p0, p[tri[2]]);
              const auto pc = space.flow(p0, (1.0 / 3.0) * (d1 + d2), 1.0);
              const auto e0 = space.difference(pc, p0);
              args[0] = space.difference(pc, p[tri[1]]) + (-1.0) * e0;
              args[1] = space.difference(pc, p[tri[2]]) + (-1.0) * e0;
              for (std::size_t k = 0; k < v.size(); ++k)
                args[k + 2] = (1.0 / 3.0) * (v[k][tri[0]] + v[k][tri[1]] + v[k][tri[2]]);
              detail::accumulate(acc, alpha(pc, args));
            }
            return V(0.5 * *acc);
          }};
}

// |(−1)^m dτ_Σα − τ_Σ dα + τ_∂Σ α| with m = 2 at a disk map P and r = deg α − 1 disk tangents.
template <NumericSpace S, class V>
V stokes_defect(const S& space, const DifferentialForm<S, V>& alpha, const DiskMap<typename S::Point>& p,
                const std::vector<DiskMap<typename S::Tangent>>& v, double h) {
  const DiskSpace<S> disk{space};
  const LoopSpace<S> loops{space};
  const auto tau = transgress_disk(space, alpha);
  const V lhs = exterior_derivative(disk, tau, p, v, h);
  const V interior = transgress_disk(space, exterior_derivative(space, alpha, h))(p, v);
  std::vector<Loop<typename S::Tangent>> bv;
  for (const auto& w : v) bv.push_back(restrict_to_boundary(w));
  const V boundary = transgress_loop(space, alpha)(restrict_to_boundary(p), bv);
  return V(lhs - interior + boundary);
}

template <NumericSpace S, class V>
double stokes_residual(const S& space, const DifferentialForm<S, V>& alpha, const DiskMap<typename S::Point>& p,
                       const std::vector<DiskMap<typename S::Tangent>>& v, double h) {
  return magnitude(stokes_defect(space, alpha, p, v, h));
}

}  // namespace gerbekit

#endif
