#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "gerbekit/cli.hpp"
#include "gerbekit/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Runs the residual checks declared in a case file and writes a verification report."};
  std::string case_path;
  std::string check;
  std::string sweep;
  std::vector<double> levels;
  std::uint64_t seed = 0;
  std::string report_path;
  double tolerance_scale = 1.0;
  app.add_option("--case", case_path, "case file")->required();
  app.add_option("--check", check, "run only declared checks whose name contains this string");
  app.add_option("--sweep", sweep, "convergence sweep parameter")->check(CLI::IsMember({"N", "h", "grid"}));
  app.add_option("--levels", levels, "sweep levels")->delimiter(',');
  auto* seed_opt = app.add_option("--seed", seed, "override the case seed");
  app.add_option("--report", report_path, "also write the report to this file");
  app.add_option("--tolerance-scale", tolerance_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  using namespace gerbekit;
  VerificationReport report;
  try {
    CaseDeclaration c = load_case(case_path);
    if (*seed_opt) c.seed = seed;
    if (!sweep.empty()) {
      if (levels.empty()) throw InvalidArgument("--sweep needs --levels");
      const auto start = std::chrono::steady_clock::now();
      if (!check.empty()) report = run_case(c, {check, tolerance_scale});
      report.case_id = c.id;
      report.seed = c.seed;
      report.sweep = convergence_sweep(c, sweep, levels);
      report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } else {
      if (!levels.empty()) throw InvalidArgument("--levels needs --sweep");
      report = run_case(c, {check, tolerance_scale});
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "gerbecheck: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "gerbecheck: " << e.what() << "\n";
    return 1;
  }

  write_report(std::cout, report);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "gerbecheck: cannot write report to '" << report_path << "'\n";
      return 2;
    }
    write_report(out, report);
  }
  return report.passed() ? 0 : 1;
}
