#include "gerbekit/mapping.hpp"

namespace gerbekit {

DiskGrid::DiskGrid(int r, int s) : rings(r), sectors(s) {
  if (rings < 1 || sectors < 3) throw InvalidArgument("disk grid needs rings >= 1 and sectors >= 3");
  triangles_.reserve(static_cast<std::size_t>(sectors) * (2 * rings - 1));
  for (int j = 0; j < sectors; ++j) triangles_.push_back({0, node(1, j), node(1, j + 1)});
  for (int i = 1; i < rings; ++i) {
    for (int j = 0; j < sectors; ++j) {
      const int a = node(i, j);
      const int b = node(i + 1, j);
      const int c = node(i + 1, j + 1);
      const int d = node(i, j + 1);
      triangles_.push_back({a, b, c});
      triangles_.push_back({a, c, d});
    }
  }
}

int DiskGrid::node(int ring, int sector) const {
  if (ring == 0) return 0;
  const int s = ((sector % sectors) + sectors) % sectors;
  return 1 + (ring - 1) * sectors + s;
}

Eigen::Vector2d DiskGrid::position(int n) const {
  if (n == 0) return Eigen::Vector2d::Zero();
  const int ring = 1 + (n - 1) / sectors;
  const int sector = (n - 1) % sectors;
  const double r = radius(ring);
  const double a = angle(sector);
  return {r * std::cos(a), r * std::sin(a)};
}

std::vector<int> DiskGrid::boundary() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(sectors));
  for (int j = 0; j < sectors; ++j) out.push_back(node(rings, j));
  return out;
}

}  // namespace gerbekit
