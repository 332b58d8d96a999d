#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "gerbekit/cli.hpp"
#include "gerbekit/errors.hpp"

using namespace gerbekit;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::string check;
  double runtime_limit;  // seconds; 0 means none stated
  std::optional<std::vector<double>> n_sweep;
};

bool run(const CaseDeclaration& c, const Criterion& k) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    const VerificationReport r = run_case(c, {k.check, 1.0});
    double worst_ratio = 0.0;
    std::string worst_row;
    for (const auto& row : r.rows) {
      const double ratio = row.residual / row.tolerance;
      if (worst_row.empty() || ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_row = row.name;
      }
    }
    pass = r.passed() && !r.rows.empty();
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu rows, worst %s at %.3g of tolerance", r.rows.size(), worst_row.c_str(),
                  worst_ratio);
    detail = buf;
    if (k.n_sweep) {
      const SweepTable t = convergence_sweep(c, "N", *k.n_sweep);
      pass = pass && t.order && *t.order >= c.order_floor;
      std::snprintf(buf, sizeof buf, "; N-sweep order %.3f (floor %.1f)", t.order ? *t.order : 0.0, c.order_floor);
      detail += buf;
    }
  } catch (const Error& e) {
    detail = std::string("error: ") + e.what();
    pass = false;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = k.runtime_limit <= 0.0 || seconds < k.runtime_limit;
  char limit[32] = "no limit";
  if (k.runtime_limit > 0.0) std::snprintf(limit, sizeof limit, "limit %.0fs", k.runtime_limit);
  std::printf("criterion %2d %-28s %s  (%s; %.2fs, %s)\n", k.number, k.title.c_str(),
              pass && in_time ? "PASS" : "FAIL", detail.c_str(), seconds, limit);
  std::fflush(stdout);
  return pass && in_time;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : GERBEKIT_ACCEPTANCE_CASE;
  CaseDeclaration c;
  try {
    c = load_case(path);
  } catch (const Error& e) {
    std::printf("acceptance: cannot load %s: %s\n", path.c_str(), e.what());
    return 2;
  }
  const std::vector<Criterion> criteria = {
      {1, "cocycle algebra", "cocycle_algebra", 1.0, std::nullopt},
      {2, "derivative-cocycle link", "derivative_link", 10.0, std::nullopt},
      {3, "Deligne cocycle", "deligne", 30.0, std::nullopt},
      {4, "curving coboundary", "delta_curving", 60.0, std::nullopt},
      {5, "sigma shift", "sigma_shift", 30.0, std::nullopt},
      {6, "instanton number", "instanton_number", 60.0, std::nullopt},
      {7, "Chern-Simons transgression", "cs_transgression", 300.0, std::vector<double>{64, 128, 256, 512}},
      {8, "string-class 3-curvature", "string_class", 300.0, std::nullopt},
      {9, "sigma-model scalar curvature", "sigma_surface", 300.0, std::nullopt},
      {10, "twisted Higgs law", "higgs", 10.0, std::nullopt},
      {11, "trivialization round trip", "trivialize", 0.0, std::nullopt},
  };
  int failed = 0;
  for (const auto& k : criteria)
    if (!run(c, k)) ++failed;
  std::printf("acceptance: %d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
