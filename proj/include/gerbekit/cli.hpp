#ifndef GERBEKIT_CLI_HPP
#define GERBEKIT_CLI_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gerbekit {

// A flat key = value case file; see docs/report-format.md for the keys.
struct CaseDeclaration {
  std::string id = "case";
  std::string model = "heisenberg";  // finite model: heisenberg | trivial
  double kappa = 1.0;
  std::vector<double> lambda;        // split shift coefficients of the finite model
  std::string bundle = "gauge";      // bundle family for the finite model: gauge
  double eta_scale = 0.4;
  double phi_scale = 0.5;
  int level = 0;                     // level of the loop model over the instanton; 0 disables loop checks
  int samples = 100;                 // random samples per finite check
  int configurations = 20;           // random loop or disk configurations per loop check
  int loop_samples = 256;            // N
  int grid = 64;                     // disk rings; sectors = 4·grid
  double h = 1e-3;
  std::uint64_t seed = 1;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;  // per result row, overriding the registry default
  double order_floor = 1.8;
};

// Throws InvalidArgument with a diagnostic naming the offending key.
CaseDeclaration parse_case(std::istream& in, const std::string& source = "<case>");
CaseDeclaration load_case(const std::string& path);
void validate(const CaseDeclaration& c);

struct CheckRow {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Convention {
  std::string name;
  std::string value;
};

struct CheckOutput {
  std::vector<CheckRow> rows;
  std::vector<Convention> conventions;
};

struct CheckSpec {
  std::string name;
  bool needs_loop = false;
  std::function<CheckOutput(const CaseDeclaration&)> run;
};

const std::vector<CheckSpec>& check_registry();
const CheckSpec& find_check(const std::string& name);

struct SweepTable {
  std::string parameter;
  std::vector<double> levels;
  std::vector<double> residuals;
  std::optional<double> order;
  double floor = 0.0;
  std::string note;
  bool pass = true;
};

// Least-squares slope of −log r against log(level) for N and grid, of log r against log h for h.
std::optional<double> fitted_order(const std::string& parameter, const std::vector<double>& levels,
                                   const std::vector<double>& residuals);
SweepTable convergence_sweep(const CaseDeclaration& c, const std::string& parameter, const std::vector<double>& levels);

struct VerificationReport {
  std::string case_id;
  std::uint64_t seed = 0;
  std::vector<CheckRow> rows;
  std::vector<Convention> conventions;
  std::optional<SweepTable> sweep;
  double wall_time = 0.0;

  bool passed() const;
};

struct RunOptions {
  std::string filter;  // substring of check names; empty runs every declared check
  double tolerance_scale = 1.0;
};

VerificationReport run_case(const CaseDeclaration& c, const RunOptions& options = {});
// Everything but the final wall-time line is a deterministic function of the declaration.
void write_report(std::ostream& out, const VerificationReport& r);

}  // namespace gerbekit

#endif
