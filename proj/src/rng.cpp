#include "gerbekit/rng.hpp"

#include <cmath>

namespace gerbekit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SampleRng::SampleRng(std::uint64_t seed, std::string_view stream, std::uint64_t index)
    : engine_(splitmix64(splitmix64(seed ^ fnv1a(stream)) + index)) {}

double SampleRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SampleRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int SampleRng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

Eigen::VectorXd SampleRng::vector(int n, double scale) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * normal();
  return v;
}

AlgebraElement SampleRng::algebra(GroupKind kind, double scale) {
  return AlgebraElement::from_coordinates(kind, vector(coordinate_count(kind), scale));
}

GroupElement SampleRng::group(GroupKind kind, double scale) { return exp(algebra(kind, scale)); }

}  // namespace gerbekit
