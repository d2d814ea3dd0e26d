// Command-line driver: convergence studies, oracle checks, kernel certificates and the
// tau^alpha / h^2 diagnostic.

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fracwave/diagnostics.hpp"
#include "fracwave/errors.hpp"
#include "fracwave/experiments.hpp"

namespace {

using namespace fracwave;

constexpr int kCheckFailed = 2;

void print_nested(const std::exception& e, int depth = 0) {
  std::cerr << std::string(2 * depth, ' ') << "error: " << e.what() << "\n";
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_nested(inner, depth + 1);
  }
}

std::string line(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

struct StudyArgs {
  std::string config;
  std::string format = "csv";
  std::string out;
  std::optional<int> ref_tau;
  std::optional<int> ref_h;
  unsigned jobs = 1;
  bool check = false;
};

int run_study_cmd(const StudyArgs& a) {
  const TableFormat fmt = parse_format(a.format);
  std::vector<StudyConfig> studies = load_study_file(a.config);
  std::string text;
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < studies.size(); ++i) {
    StudyConfig& c = studies[i];
    if (a.ref_tau) c.reference.tau_exp = *a.ref_tau;
    if (a.ref_h) c.reference.h_exp = *a.ref_h;
    const StudyResult r = run_study(c, {a.jobs});
    for (const auto& w : r.warnings) std::cerr << "warning: " << c.name << ": " << w << "\n";
    std::cerr << line("%s: %zu tables in %.1f s\n", c.name.c_str(), r.tables.size(), r.seconds);
    if (i > 0) text += "\n";
    text += emit(r.tables, fmt);
    if (a.check) {
      const auto v = check_expectations(r);
      violations.insert(violations.end(), v.begin(), v.end());
    }
  }
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
  }
  if (a.check) {
    for (const auto& v : violations) std::cerr << "check failed: " << v << "\n";
    if (!violations.empty()) return kCheckFailed;
    std::cerr << "check passed\n";
  }
  return 0;
}

int run_oracle_check(bool check) {
  bool ok = true;
  std::cout << "problem alpha  mittag-leffler          contour                 fine ML1 2^-14          max gap\n";
  for (const auto& r : oracle_triangle({ProblemId::A, ProblemId::B, ProblemId::C}, {1.2, 1.5, 1.8})) {
    std::cout << line("(%c)     %.2f  %.16e  %.16e  %.16e  %.2e %s\n", r.problem, r.alpha, r.mittag_leffler, r.contour,
                      r.fine, r.max_gap, r.pass ? "ok" : "FAIL");
    ok = ok && r.pass;
  }
  std::cout << "\nscheme alpha mu    max |contour - recurrence|, k <= 64\n";
  for (const auto& r : contour_equivalence({1.3, 1.7}, {0.01, 0.5})) {
    std::cout << line("%-6s %.2f  %.2f  %.2e %s\n", to_string(r.scheme), r.alpha, r.mu, r.max_gap, r.pass ? "ok" : "FAIL");
    ok = ok && r.pass;
  }
  return (check && !ok) ? kCheckFailed : 0;
}

int run_kernel_certify(const std::vector<double>& alphas, const std::vector<double>& mus, bool check) {
  bool ok = true;
  std::cout << "alpha  origin gap  min Re     min ratio  min margin  zeros\n";
  for (const auto& r : kernel_certify(alphas, mus)) {
    std::cout << line("%.2f   %.2e    %.3e  %.3e  %.3e   %d %s\n", r.alpha, r.origin_gap, r.min_positivity,
                      r.min_positivity_ratio, r.min_margin, r.enclosed_zeros, r.pass ? "ok" : "FAIL");
    ok = ok && r.pass;
  }
  return (check && !ok) ? kCheckFailed : 0;
}

int run_ratio(double alpha, double tau, double h) {
  const double cells_d = 1.0 / h;
  const auto cells = static_cast<std::size_t>(std::llround(cells_d));
  if (cells < 2 || std::abs(cells_d - static_cast<double>(cells)) > 1e-9 * cells_d) {
    throw ConfigError("h must be 1/N for an integer N >= 2");
  }
  const RatioReport r = ratio_diagnostic(Mesh1D(cells), alpha, tau);
  std::cout << line("tau^alpha/h^2 = %.6e\nlambda_max   = %.6e\nmu_max       = %.6e\n", r.ratio, r.lambda_max, r.mu_max);
  if (r.warning) std::cout << "warning: tau^alpha/h^2 > 1, error bounds degrade as the ratio grows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-fractional wave equation: L1 and modified L1 convergence studies"};
  app.require_subcommand(1);

  StudyArgs sa;
  auto* study = app.add_subcommand("study", "Run the convergence studies of a preset config");
  study->add_option("config", sa.config, "Study config (JSON)")->required()->check(CLI::ExistingFile);
  study->add_option("--format", sa.format, "Output format")->check(CLI::IsMember({"csv", "md"}));
  study->add_option("--out", sa.out, "Output file (default: stdout)");
  study->add_option("--ref-tau", sa.ref_tau, "Reference step exponent k (tau_ref = 2^-k)");
  study->add_option("--ref-h", sa.ref_h, "Reference mesh exponent m (h_ref = 2^-m)");
  study->add_option("--jobs", sa.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  study->add_flag("--check", sa.check, "Compare orders with the config's expectations; exit 2 on violation");

  bool oracle_check_flag = false;
  auto* oracle = app.add_subcommand("oracle-check", "Cross-check exact and discrete solution representations");
  oracle->add_flag("--check", oracle_check_flag, "Exit 2 if any comparison exceeds its tolerance");

  bool kernel_check_flag = false;
  std::vector<double> cert_alphas{1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9};
  std::vector<double> cert_mus{1e-3, 1e-2, 0.1, 0.5, 1.0};
  auto* kernel = app.add_subcommand("kernel-certify", "Certify the transforms and contour denominators");
  kernel->add_option("--alpha", cert_alphas, "Alpha values");
  kernel->add_option("--mu", cert_mus, "mu values for the denominator margin");
  kernel->add_flag("--check", kernel_check_flag, "Exit 2 if any certificate fails");

  double r_alpha = 0, r_tau = 0, r_h = 0;
  auto* ratio = app.add_subcommand("ratio", "Report tau^alpha/h^2 and mu_max");
  ratio->set_help_flag("--help", "Print this help message and exit");
  ratio->add_option("alpha", r_alpha)->required();
  ratio->add_option("tau", r_tau)->required();
  ratio->add_option("h", r_h)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*study) return run_study_cmd(sa);
    if (*oracle) return run_oracle_check(oracle_check_flag);
    if (*kernel) return run_kernel_certify(cert_alphas, cert_mus, kernel_check_flag);
    if (*ratio) return run_ratio(r_alpha, r_tau, r_h);
  } catch (const std::exception& e) {
    print_nested(e);
    return 1;
  }
  return 0;
}
