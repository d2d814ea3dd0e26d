#include "fracwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fracwave/errors.hpp"
#include "fracwave/oracle.hpp"

namespace fracwave {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "fracwave/1.0";

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pow2_label(int e) { return "2^-" + std::to_string(e); }

// Integer steps of size 2^-e covering [0, T].
std::size_t steps_for(double T, int e) {
  const double n = std::ldexp(T, e);
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * n) {
    throw ConfigError("final time is not a multiple of 2^-" + std::to_string(e));
  }
  return static_cast<std::size_t>(r);
}

std::vector<PowerLoad> singular_load() { return {{1.0, -0.49}}; }

SourceTerm benchmark_source() { return SourceTerm::constant(1.0) + SourceTerm::power(1.0, 0.2); }

const char* coupling_key(Coupling c) {
  switch (c) {
    case Coupling::TimeLadder: return "time_ladder";
    case Coupling::FixedTau: return "fixed_tau";
    case Coupling::Coupled: return "coupled";
  }
  return "";
}

Coupling parse_coupling(const std::string& s) {
  if (s == "time_ladder") return Coupling::TimeLadder;
  if (s == "fixed_tau") return Coupling::FixedTau;
  if (s == "coupled") return Coupling::Coupled;
  throw ConfigError("unknown coupling '" + s + "'");
}

const char* rounding_key(StepRounding r) { return r == StepRounding::CeilSteps ? "ceil_steps" : "pow2"; }

StepRounding parse_rounding(const std::string& s) {
  if (s == "ceil_steps") return StepRounding::CeilSteps;
  if (s == "pow2") return StepRounding::PowerOfTwo;
  throw ConfigError("unknown rounding '" + s + "'");
}

std::string describe_coupling(const StudyConfig& c) {
  switch (c.coupling) {
    case Coupling::TimeLadder:
      return is_pde(c.problem) ? "h=" + pow2_label(c.fixed_exp) + " fixed" : "tau ladder";
    case Coupling::FixedTau: return "tau=" + pow2_label(c.fixed_exp) + " fixed";
    case Coupling::Coupled:
      return c.rounding == StepRounding::CeilSteps ? "tau^alpha=h^2 (n=ceil(h^(-2/alpha)))"
                                                   : "tau^alpha=h^2 (tau=2^-ceil(2m/alpha))";
  }
  return "";
}

std::string describe_reference(const StudyConfig& c) {
  const auto& r = c.reference;
  if (r.kind == ReferenceSpec::Kind::Exact) return "exact (Mittag-Leffler)";
  std::string s = std::string(to_string(r.scheme)) + " tau=" + pow2_label(r.tau_exp);
  if (is_pde(c.problem)) s += " h=" + pow2_label(r.h_exp);
  return s;
}

// ---- process-wide reference cache ----

template <class T>
class OnceCache {
 public:
  template <class F>
  const T& get(const std::string& key, F&& compute) {
    std::shared_future<std::shared_ptr<const T>> fut;
    std::promise<std::shared_ptr<const T>> prom;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto it = map_.find(key);
      if (it == map_.end()) {
        fut = prom.get_future().share();
        map_.emplace(key, fut);
        owner = true;
      } else {
        fut = it->second;
      }
    }
    if (owner) {
      try {
        prom.set_value(std::make_shared<const T>(compute()));
      } catch (...) {
        {
          std::lock_guard lock(mutex_);
          map_.erase(key);
        }
        prom.set_exception(std::current_exception());
      }
    }
    return *fut.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const T>>> map_;
};

OnceCache<double>& ode_cache() {
  static OnceCache<double> c;
  return c;
}

OnceCache<NodalField>& pde_cache() {
  static OnceCache<NodalField> c;
  return c;
}

std::string reference_key(ProblemId id, double alpha, const ReferenceSpec& ref, double T) {
  std::ostringstream os;
  os.precision(17);
  os << problem_letter(id) << '|' << alpha << '|' << static_cast<int>(ref.kind) << '|' << to_string(ref.scheme) << '|'
     << ref.tau_exp << '|' << ref.h_exp << '|' << T;
  return os.str();
}

// Runs fn(i) for i in [0, count) on `jobs` threads; rethrows the first failure.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard lock(fail_mutex);
        if (failure) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(fail_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

// ---- catalog ----

ProblemId parse_problem(std::string_view s) {
  if (s.size() == 1) {
    switch (s[0]) {
      case 'a': return ProblemId::A;
      case 'b': return ProblemId::B;
      case 'c': return ProblemId::C;
      case 'd': return ProblemId::D;
      case 'e': return ProblemId::E;
      case 'f': return ProblemId::F;
      default: break;
    }
  }
  throw ConfigError("unknown problem '" + std::string(s) + "' (expected a..f)");
}

char problem_letter(ProblemId id) { return static_cast<char>('a' + static_cast<int>(id)); }

bool is_pde(ProblemId id) { return id >= ProblemId::D; }

ScalarProblem ode_problem(ProblemId id) {
  switch (id) {
    case ProblemId::A: return {1.0, 0.0, 1.0, SourceTerm::zero()};
    case ProblemId::B: return {0.0, 1.0, 1.0, SourceTerm::zero()};
    case ProblemId::C: return {0.0, 0.0, 1.0, benchmark_source()};
    default: throw ConfigError(std::string("problem ") + problem_letter(id) + " is not a scalar problem");
  }
}

PdeProblem pde_problem(ProblemId id) {
  switch (id) {
    case ProblemId::D: return {singular_load(), {}, {}, SourceTerm::zero()};
    case ProblemId::E: return {{}, singular_load(), {}, SourceTerm::zero()};
    case ProblemId::F: return {{}, {}, singular_load(), benchmark_source()};
    default: throw ConfigError(std::string("problem ") + problem_letter(id) + " is not a PDE problem");
  }
}

Scheme parse_scheme(std::string_view s) {
  if (s == "L1") return Scheme::L1;
  if (s == "ML1") return Scheme::ML1;
  throw ConfigError("unknown scheme '" + std::string(s) + "' (expected L1 or ML1)");
}

// ---- configuration ----

void StudyConfig::validate() const {
  auto fail = [&](const std::string& m) { throw ConfigError("study '" + name + "': " + m); };
  if (alphas.empty()) fail("no alpha values");
  for (double a : alphas) {
    if (!(a > 1.0 && a < 2.0)) fail("alpha " + fmt("%g", a) + " outside (1, 2)");
  }
  if (schemes.empty()) fail("no schemes");
  if (levels.empty()) fail("empty ladder");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || levels[i] > 30) fail("level exponents must lie in 1..30");
    if (i > 0 && levels[i] <= levels[i - 1]) fail("ladder must be strictly refining");
  }
  if (!(final_time > 0.0)) fail("final time must be positive");
  const int finest = levels.back();
  const bool pde = is_pde(problem);
  if (!pde && coupling != Coupling::TimeLadder) fail("scalar problems only support the tau ladder");
  if (pde && reference.kind == ReferenceSpec::Kind::Exact) fail("PDE problems need a fine-grid reference");
  if (pde && finest < 2 && coupling != Coupling::TimeLadder) fail("meshes need at least 2 cells");

  if (reference.kind == ReferenceSpec::Kind::Fine) {
    if (reference.tau_exp < 1 || reference.tau_exp > 30) fail("reference tau exponent out of range");
    steps_for(final_time, reference.tau_exp);
    if (!pde && reference.tau_exp < finest + 3) {
      fail("reference step 2^-" + std::to_string(reference.tau_exp) + " is not 8x finer than 2^-" +
           std::to_string(finest));
    }
    if (pde) {
      const int h_finest = coupling == Coupling::TimeLadder ? fixed_exp : finest;
      if (reference.h_exp <= h_finest) {
        fail("reference mesh 2^-" + std::to_string(reference.h_exp) + " is not finer than 2^-" +
             std::to_string(h_finest));
      }
      if (reference.h_exp > 14) fail("reference mesh too fine");
    }
  }
  if (coupling != Coupling::Coupled) {
    if (coupling == Coupling::FixedTau || pde) {
      if (fixed_exp < 1) fail("fixed exponent must be >= 1");
    }
    for (int l : levels) {
      if (coupling == Coupling::TimeLadder) steps_for(final_time, l);
    }
    if (coupling == Coupling::FixedTau) steps_for(final_time, fixed_exp);
  }
  for (const auto& e : expect) {
    if (std::find(alphas.begin(), alphas.end(), e.alpha) == alphas.end()) fail("expectation for an alpha not in the study");
    if (std::find(schemes.begin(), schemes.end(), e.scheme) == schemes.end()) fail("expectation for a scheme not in the study");
    if (!e.orders.empty() && e.orders.size() + 1 != levels.size()) fail("expected orders must have one entry per order row");
    if (!(e.tolerance > 0.0)) fail("expectation tolerance must be positive");
  }
}

StudyConfig parse_study_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  StudyConfig c;
  try {
    c.name = j.value("name", std::string("study"));
    c.problem = parse_problem(j.at("problem").get<std::string>());
    if (j.contains("schemes")) {
      c.schemes.clear();
      for (const auto& s : j.at("schemes")) c.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    c.alphas = j.at("alphas").get<std::vector<double>>();
    c.coupling = parse_coupling(j.value("coupling", std::string("time_ladder")));
    c.levels = j.at("levels").get<std::vector<int>>();
    c.fixed_exp = j.value("fixed_exp", 0);
    c.rounding = parse_rounding(j.value("rounding", std::string("ceil_steps")));
    c.final_time = j.value("final_time", 1.0);
    if (j.contains("reference")) {
      const auto& r = j.at("reference");
      const std::string kind = r.value("kind", std::string("fine"));
      if (kind == "fine") {
        c.reference.kind = ReferenceSpec::Kind::Fine;
      } else if (kind == "exact") {
        c.reference.kind = ReferenceSpec::Kind::Exact;
      } else {
        throw ConfigError("unknown reference kind '" + kind + "'");
      }
      c.reference.scheme = parse_scheme(r.value("scheme", std::string("ML1")));
      c.reference.tau_exp = r.value("tau_exp", c.reference.tau_exp);
      c.reference.h_exp = r.value("h_exp", c.reference.h_exp);
    }
    if (j.contains("expect")) {
      for (const auto& e : j.at("expect")) {
        Expectation x;
        x.alpha = e.at("alpha").get<double>();
        x.scheme = parse_scheme(e.at("scheme").get<std::string>());
        x.orders = e.value("orders", std::vector<double>{});
        x.tolerance = e.value("tolerance", 0.15);
        x.increasing = e.value("increasing", false);
        c.expect.push_back(std::move(x));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<StudyConfig> parse_study_file(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  std::vector<StudyConfig> out;
  if (j.is_object() && j.contains("studies")) {
    for (const auto& s : j.at("studies")) out.push_back(parse_study_config(s.dump()));
  } else {
    out.push_back(parse_study_config(text));
  }
  if (out.empty()) throw ConfigError("config holds no studies");
  return out;
}

std::vector<StudyConfig> load_study_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_study_file(ss.str());
}

std::string to_json(const StudyConfig& c) {
  json j;
  j["name"] = c.name;
  j["problem"] = std::string(1, problem_letter(c.problem));
  j["schemes"] = json::array();
  for (Scheme s : c.schemes) j["schemes"].push_back(to_string(s));
  j["alphas"] = c.alphas;
  j["coupling"] = coupling_key(c.coupling);
  j["levels"] = c.levels;
  j["fixed_exp"] = c.fixed_exp;
  j["rounding"] = rounding_key(c.rounding);
  j["final_time"] = c.final_time;
  j["reference"] = {{"kind", c.reference.kind == ReferenceSpec::Kind::Fine ? "fine" : "exact"},
                    {"scheme", to_string(c.reference.scheme)},
                    {"tau_exp", c.reference.tau_exp},
                    {"h_exp", c.reference.h_exp}};
  j["expect"] = json::array();
  for (const auto& e : c.expect) {
    j["expect"].push_back({{"alpha", e.alpha},
                           {"scheme", to_string(e.scheme)},
                           {"orders", e.orders},
                           {"tolerance", e.tolerance},
                           {"increasing", e.increasing}});
  }
  return j.dump(2);
}

std::string run_stamp(const StudyConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json(c) + kVersion)));
  return std::string(buf, 12);
}

Resolution resolve_level(const StudyConfig& c, double alpha, int level) {
  Resolution r;
  r.level = level;
  const double T = c.final_time;
  switch (c.coupling) {
    case Coupling::TimeLadder:
      r.steps = steps_for(T, level);
      r.cells = is_pde(c.problem) ? std::size_t{1} << c.fixed_exp : 0;
      break;
    case Coupling::FixedTau:
      r.steps = steps_for(T, c.fixed_exp);
      r.cells = std::size_t{1} << level;
      break;
    case Coupling::Coupled: {
      r.cells = std::size_t{1} << level;
      const double x = 2.0 * level / alpha;
      if (c.rounding == StepRounding::CeilSteps) {
        const double n = T * std::exp2(x);
        r.steps = static_cast<std::size_t>(std::ceil(n * (1.0 - 1e-12)));
      } else {
        r.steps = steps_for(T, static_cast<int>(std::ceil(x - 1e-12)));
      }
      break;
    }
  }
  r.tau = T / static_cast<double>(r.steps);
  return r;
}

// ---- references ----

double ode_reference(ProblemId id, double alpha, const ReferenceSpec& ref, double T) {
  return ode_cache().get(reference_key(id, alpha, ref, T), [&] {
    const ScalarProblem p = ode_problem(id);
    if (ref.kind == ReferenceSpec::Kind::Exact) {
      ExactEval e;
      e.problem = p;
      e.alpha = alpha;
      return exact_scalar(e, T);
    }
    const std::size_t n = steps_for(T, ref.tau_exp);
    const KernelTable kt(alpha, n);
    return solve_scalar(p, ref.scheme, alpha, T / static_cast<double>(n), n, kt).final_value();
  });
}

const NodalField& pde_reference(ProblemId id, double alpha, const ReferenceSpec& ref, double T) {
  return pde_cache().get(reference_key(id, alpha, ref, T), [&] {
    if (ref.kind != ReferenceSpec::Kind::Fine) throw ConfigError("PDE references are fine-grid solves");
    const PdeProblem p = pde_problem(id);
    const std::size_t n = steps_for(T, ref.tau_exp);
    const KernelTable kt(alpha, n);
    const FemOperators ops = assemble(Mesh1D(std::size_t{1} << ref.h_exp));
    PdeOptions opt;
    opt.store = StoreMode::FinalOnly;
    return solve_pde(p, ref.scheme, alpha, T / static_cast<double>(n), n, ops, kt, opt).final_state();
  });
}

// ---- studies ----

std::vector<std::optional<double>> observed_order(const std::vector<double>& errors) {
  if (errors.size() < 2) throw DomainError("observed_order needs at least two errors");
  std::vector<std::optional<double>> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] > 0.0 && errors[i + 1] > 0.0 && std::isfinite(errors[i]) && std::isfinite(errors[i + 1])) {
      out.emplace_back(std::log2(errors[i] / errors[i + 1]));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

StudyResult run_study(const StudyConfig& c, const RunOptions& opt) {
  c.validate();
  const auto start = std::chrono::steady_clock::now();
  const bool pde = is_pde(c.problem);
  const double T = c.final_time;

  // References first (one per alpha), so cells never wait on each other.
  parallel_for(c.alphas.size(), opt.jobs, [&](std::size_t i) {
    try {
      if (pde) {
        pde_reference(c.problem, c.alphas[i], c.reference, T);
      } else {
        ode_reference(c.problem, c.alphas[i], c.reference, T);
      }
    } catch (const std::exception& e) {
      std::throw_with_nested(std::runtime_error("study '" + c.name + "': reference for alpha=" + fmt("%g", c.alphas[i]) +
                                                " failed: " + e.what()));
    }
  });

  struct Cell {
    std::size_t alpha_idx, scheme_idx, level_idx;
    Resolution res;
    double error = 0.0;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < c.alphas.size(); ++a) {
    for (std::size_t s = 0; s < c.schemes.size(); ++s) {
      for (std::size_t l = 0; l < c.levels.size(); ++l) {
        cells.push_back({a, s, l, resolve_level(c, c.alphas[a], c.levels[l])});
      }
    }
  }
  // Largest cells first for better packing; results stay indexed by cell.
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto cost = [&](const Cell& x) {
    const double n = static_cast<double>(x.res.steps);
    return n * n * static_cast<double>(std::max<std::size_t>(x.res.cells, 1));
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost(cells[a]) > cost(cells[b]); });

  std::unique_ptr<FemOperators> ref_ops;
  if (pde) ref_ops = std::make_unique<FemOperators>(assemble(Mesh1D(std::size_t{1} << c.reference.h_exp)));

  parallel_for(cells.size(), opt.jobs, [&](std::size_t oi) {
    Cell& cell = cells[order[oi]];
    const double alpha = c.alphas[cell.alpha_idx];
    const Scheme scheme = c.schemes[cell.scheme_idx];
    try {
      const KernelTable kt(alpha, cell.res.steps);
      if (pde) {
        const Mesh1D mesh(cell.res.cells);
        const FemOperators ops = assemble(mesh);
        PdeOptions po;
        po.store = StoreMode::FinalOnly;
        const PdeHistory h = solve_pde(pde_problem(c.problem), scheme, alpha, cell.res.tau, cell.res.steps, ops, kt, po);
        const NodalField& ref = pde_reference(c.problem, alpha, c.reference, T);
        cell.error = l2_error(prolongate(mesh, h.final_state(), ref_ops->mesh), ref, *ref_ops);
      } else {
        const SolutionHistory h = solve_scalar(ode_problem(c.problem), scheme, alpha, cell.res.tau, cell.res.steps, kt);
        cell.error = std::abs(h.final_value() - ode_reference(c.problem, alpha, c.reference, T));
      }
    } catch (const std::exception& e) {
      std::throw_with_nested(std::runtime_error("study '" + c.name + "': alpha=" + fmt("%g", alpha) + " " +
                                                to_string(scheme) + " level 2^-" + std::to_string(cell.res.level) +
                                                " failed: " + e.what()));
    }
  });

  StudyResult out;
  out.config = c;
  const std::string stamp = run_stamp(c);
  const bool tau_var = c.coupling == Coupling::TimeLadder;
  std::size_t idx = 0;
  for (std::size_t a = 0; a < c.alphas.size(); ++a) {
    for (std::size_t s = 0; s < c.schemes.size(); ++s) {
      ConvergenceTable t;
      t.study = c.name;
      t.problem = problem_letter(c.problem);
      t.alpha = c.alphas[a];
      t.scheme = c.schemes[s];
      t.variable = tau_var ? "tau" : "h";
      t.coupling = describe_coupling(c);
      t.reference = describe_reference(c);
      t.stamp = stamp;
      std::vector<double> errs;
      for (std::size_t l = 0; l < c.levels.size(); ++l, ++idx) {
        errs.push_back(cells[idx].error);
        t.rows.push_back({pow2_label(c.levels[l]), cells[idx].error, std::nullopt, false});
      }
      if (errs.size() >= 2) {
        const auto ord = observed_order(errs);
        for (std::size_t i = 0; i < ord.size(); ++i) {
          t.rows[i + 1].order = ord[i];
          t.rows[i + 1].flagged = !ord[i].has_value();
        }
      }
      out.tables.push_back(std::move(t));
    }
  }
  if (pde) {
    for (double alpha : c.alphas) {
      for (int l : c.levels) {
        const Resolution r = resolve_level(c, alpha, l);
        const RatioReport rr = ratio_diagnostic(Mesh1D(r.cells), alpha, r.tau);
        if (rr.warning) {
          const int h_exp = c.coupling == Coupling::TimeLadder ? c.fixed_exp : l;
          out.warnings.push_back("alpha=" + fmt("%g", alpha) + " h=2^-" + std::to_string(h_exp) +
                                 ": tau^alpha/h^2 = " + fmt("%.3g", rr.ratio) + " > 1 (mu_max = " +
                                 fmt("%.3g", rr.mu_max) + ")");
        }
      }
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<std::string> check_expectations(const StudyResult& r) {
  std::vector<std::string> bad;
  for (const auto& e : r.config.expect) {
    const std::string tag = r.config.name + " alpha=" + fmt("%g", e.alpha) + " " + to_string(e.scheme);
    auto it = std::find_if(r.tables.begin(), r.tables.end(),
                           [&](const ConvergenceTable& t) { return t.alpha == e.alpha && t.scheme == e.scheme; });
    if (it == r.tables.end()) {
      bad.push_back(tag + ": no such table");
      continue;
    }
    for (std::size_t i = 0; i < e.orders.size() && i + 1 < it->rows.size(); ++i) {
      const auto& row = it->rows[i + 1];
      if (!row.order) {
        bad.push_back(tag + " " + row.resolution + ": order not computable");
      } else if (std::abs(*row.order - e.orders[i]) > e.tolerance) {
        bad.push_back(tag + " " + row.resolution + ": order " + fmt("%.2f", *row.order) + " outside " +
                      fmt("%.2f", e.orders[i]) + " +- " + fmt("%.2f", e.tolerance));
      }
    }
    if (e.increasing) {
      for (std::size_t i = 0; i + 1 < it->rows.size(); ++i) {
        if (!(it->rows[i + 1].error > it->rows[i].error)) {
          bad.push_back(tag + " " + it->rows[i + 1].resolution + ": error does not increase");
        }
      }
    }
  }
  return bad;
}

// ---- emission ----

TableFormat parse_format(std::string_view s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "md" || s == "markdown") return TableFormat::Markdown;
  throw ConfigError("unknown format '" + std::string(s) + "' (expected csv or md)");
}

std::string emit_csv(const std::vector<ConvergenceTable>& tables) {
  std::string out;
  for (std::size_t ti = 0; ti < tables.size(); ++ti) {
    const auto& t = tables[ti];
    if (ti > 0) out += '\n';
    out += "# study=" + t.study + ";problem=" + std::string(1, t.problem) + ";alpha=" + fmt("%.10g", t.alpha) +
           ";scheme=" + to_string(t.scheme) + ";variable=" + t.variable + ";coupling=" + t.coupling +
           ";reference=" + t.reference + ";stamp=" + t.stamp + "\n";
    out += "resolution,error,order\n";
    for (const auto& r : t.rows) {
      out += r.resolution + "," + fmt("%.6e", r.error) + ",";
      if (r.flagged) {
        out += "n/a";
      } else if (r.order) {
        out += fmt("%.2f", *r.order);
      }
      out += "\n";
    }
  }
  return out;
}

std::vector<ConvergenceTable> parse_csv(std::string_view text) {
  std::vector<ConvergenceTable> out;
  ConvergenceTable* cur = nullptr;
  bool expect_header = false;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fail = [&](const std::string& m) { throw ConfigError("csv line " + std::to_string(line_no) + ": " + m); };
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      out.emplace_back();
      cur = &out.back();
      for (const std::string& kv : split(std::string_view(line).substr(2), ';')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) fail("bad metadata '" + kv + "'");
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "study") cur->study = val;
        else if (key == "problem") cur->problem = val.empty() ? '?' : val[0];
        else if (key == "alpha") cur->alpha = std::stod(val);
        else if (key == "scheme") cur->scheme = parse_scheme(val);
        else if (key == "variable") cur->variable = val;
        else if (key == "coupling") cur->coupling = val;
        else if (key == "reference") cur->reference = val;
        else if (key == "stamp") cur->stamp = val;
      }
      expect_header = true;
      continue;
    }
    if (expect_header) {
      if (line != "resolution,error,order") fail("expected header row");
      expect_header = false;
      continue;
    }
    if (!cur) fail("row before metadata");
    const auto f = split(line, ',');
    if (f.size() != 3) fail("expected 3 columns");
    TableRow r;
    r.resolution = f[0];
    try {
      r.error = std::stod(f[1]);
      if (f[2] == "n/a") {
        r.flagged = true;
      } else if (!f[2].empty()) {
        r.order = std::stod(f[2]);
      }
    } catch (const std::logic_error&) {
      fail("bad number");
    }
    cur->rows.push_back(std::move(r));
  }
  return out;
}

std::string emit_markdown(const std::vector<ConvergenceTable>& tables) {
  if (tables.empty()) return "";
  const auto& t0 = tables.front();
  std::string out = "### Study " + t0.study + ": problem (" + std::string(1, t0.problem) + "), " + t0.coupling +
                    ", reference " + t0.reference + "\n\n";
  // Row labels in first-seen order.
  std::vector<std::string> labels;
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      if (std::find(labels.begin(), labels.end(), r.resolution) == labels.end()) labels.push_back(r.resolution);
    }
  }
  out += "| " + t0.variable + " |";
  std::string rule = "|---|";
  for (const auto& t : tables) {
    out += " alpha=" + fmt("%g", t.alpha) + " " + to_string(t.scheme) + " error | order |";
    rule += "---:|---:|";
  }
  out += "\n" + rule + "\n";
  for (const auto& label : labels) {
    out += "| " + label + " |";
    for (const auto& t : tables) {
      auto it = std::find_if(t.rows.begin(), t.rows.end(), [&](const TableRow& r) { return r.resolution == label; });
      if (it == t.rows.end()) {
        out += "  |  |";
        continue;
      }
      out += " " + fmt("%.2e", it->error) + " | ";
      out += it->flagged ? "n/a" : it->order ? fmt("%.2f", *it->order) : "--";
      out += " |";
    }
    out += "\n";
  }
  out += "\nstamp " + t0.stamp + "\n";
  return out;
}

std::string emit(const std::vector<ConvergenceTable>& tables, TableFormat f) {
  return f == TableFormat::Csv ? emit_csv(tables) : emit_markdown(tables);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace fracwave
