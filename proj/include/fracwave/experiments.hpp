#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracwave/kernels.hpp"
#include "fracwave/ode_stepper.hpp"
#include "fracwave/pde_stepper.hpp"

namespace fracwave {

// ---- problem catalog ----

enum class ProblemId { A, B, C, D, E, F };

ProblemId parse_problem(std::string_view s);
char problem_letter(ProblemId id);
bool is_pde(ProblemId id);

/// (a) y0 = 1; (b) y1 = 1; (c) f = 1 + t^0.2; lambda = 1 throughout.
ScalarProblem ode_problem(ProblemId id);
/// (d) u0 = x^-0.49; (e) u1 = x^-0.49; (f) f = x^-0.49 (1 + t^0.2).
PdeProblem pde_problem(ProblemId id);

Scheme parse_scheme(std::string_view s);

// ---- configuration ----

/// How resolutions are generated from the level list.
///   TimeLadder: tau = 2^-level (ODE problems, or PDE with h fixed at 2^-fixed_exp)
///   FixedTau:   h = 2^-level, tau = 2^-fixed_exp
///   Coupled:    h = 2^-level, tau^alpha ~ h^2 (see StepRounding)
enum class Coupling { TimeLadder, FixedTau, Coupled };

/// Step choice for Coupled: CeilSteps takes n = ceil(h^{-2/alpha}) steps on [0, 1];
/// PowerOfTwo rounds tau = h^{2/alpha} down to a power of two.
enum class StepRounding { CeilSteps, PowerOfTwo };

struct ReferenceSpec {
  enum class Kind { Fine, Exact };
  Kind kind = Kind::Fine;
  Scheme scheme = Scheme::ML1;
  int tau_exp = 16;  // tau_ref = 2^-tau_exp
  int h_exp = 10;    // PDE only: h_ref = 2^-h_exp

  bool operator==(const ReferenceSpec&) const = default;
};

/// Expected orders for one (alpha, scheme) table, used by --check.
struct Expectation {
  double alpha = 0.0;
  Scheme scheme = Scheme::L1;
  std::vector<double> orders;  // one per order row; empty to skip
  double tolerance = 0.15;
  bool increasing = false;     // errors must increase strictly down the table

  bool operator==(const Expectation&) const = default;
};

struct StudyConfig {
  std::string name;
  ProblemId problem = ProblemId::A;
  std::vector<Scheme> schemes{Scheme::L1, Scheme::ML1};
  std::vector<double> alphas;
  Coupling coupling = Coupling::TimeLadder;
  std::vector<int> levels;  // strictly increasing exponents
  int fixed_exp = 0;        // tau (FixedTau) or h (PDE TimeLadder) exponent
  StepRounding rounding = StepRounding::CeilSteps;
  ReferenceSpec reference;
  double final_time = 1.0;
  std::vector<Expectation> expect;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;

  bool operator==(const StudyConfig&) const = default;
};

StudyConfig parse_study_config(std::string_view json_text);
/// A preset file holds one study object or {"studies": [ ... ]}.
std::vector<StudyConfig> parse_study_file(std::string_view json_text);
std::vector<StudyConfig> load_study_file(const std::filesystem::path& path);
/// Canonical JSON (sorted keys, fixed precision); parse_study_config(to_json(c)) == c.
std::string to_json(const StudyConfig& c);

/// Deterministic 12-hex-digit stamp of the configuration and library version.
std::string run_stamp(const StudyConfig& c);

// ---- results ----

struct TableRow {
  std::string resolution;  // "2^-k"
  double error = 0.0;
  std::optional<double> order;  // empty on the first row and when non-computable
  bool flagged = false;         // order could not be computed (non-positive error)

  bool operator==(const TableRow&) const = default;
};

struct ConvergenceTable {
  std::string study;
  char problem = 'a';
  double alpha = 0.0;
  Scheme scheme = Scheme::L1;
  std::string variable;  // "tau" or "h": what the resolution column refines
  std::string coupling;
  std::string reference;
  std::string stamp;
  std::vector<TableRow> rows;

  bool operator==(const ConvergenceTable&) const = default;
};

/// Parameters of one solve in a study.
struct Resolution {
  int level = 0;
  double tau = 0.0;
  std::size_t steps = 0;
  std::size_t cells = 0;  // 0 for ODE problems
};

/// Resolution for `level` under the config's coupling rule at this alpha.
Resolution resolve_level(const StudyConfig& c, double alpha, int level);

struct StudyResult {
  StudyConfig config;
  std::vector<ConvergenceTable> tables;  // alpha-major, then scheme
  std::vector<std::string> warnings;     // e.g. tau^alpha / h^2 > 1
  double seconds = 0.0;
};

struct RunOptions {
  unsigned jobs = 1;
};

/// log2(e_i / e_{i+1}); empty entries for non-positive errors. Needs at least two errors.
std::vector<std::optional<double>> observed_order(const std::vector<double>& errors);

/// Solves every (alpha, scheme, level) cell and measures the error at the final time against
/// the reference (absolute for ODE problems, L2 for PDE problems). References are cached per
/// process, keyed by problem, alpha and reference spec.
StudyResult run_study(const StudyConfig& c, const RunOptions& opt = {});

/// Reference value (ODE) or final field on the reference mesh (PDE); cached.
double ode_reference(ProblemId id, double alpha, const ReferenceSpec& ref, double T);
const NodalField& pde_reference(ProblemId id, double alpha, const ReferenceSpec& ref, double T);

/// One message per violated expectation; empty when everything holds.
std::vector<std::string> check_expectations(const StudyResult& r);

// ---- emission ----

enum class TableFormat { Csv, Markdown };
TableFormat parse_format(std::string_view s);

/// One block per table: "# key=value;..." metadata line, header "resolution,error,order",
/// rows with %.6e errors and %.2f orders (blank on the first row, "n/a" when flagged).
std::string emit_csv(const std::vector<ConvergenceTable>& tables);
std::vector<ConvergenceTable> parse_csv(std::string_view text);

/// Wide layout: one row per resolution, an Error/Order column pair per (alpha, scheme).
std::string emit_markdown(const std::vector<ConvergenceTable>& tables);

std::string emit(const std::vector<ConvergenceTable>& tables, TableFormat f);
/// Writes to `path`; throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fracwave
