#ifndef GERBEKIT_RNG_HPP
#define GERBEKIT_RNG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string_view>

#include "gerbekit/lie.hpp"

namespace gerbekit {

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic generator keyed by (seed, stream name, index): each check and each
// sample gets its own reproducible stream, independent of evaluation order.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  SampleRng(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

  double uniform();  // [0, 1), 53 random bits
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  int integer(int lo, int hi);  // inclusive
  Eigen::VectorXd vector(int n, double scale);

  AlgebraElement algebra(GroupKind kind, double scale);
  GroupElement group(GroupKind kind, double scale = 1.0);

 private:
  std::mt19937_64 engine_;
};

}  // namespace gerbekit

#endif
