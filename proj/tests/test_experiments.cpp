#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fracwave/errors.hpp"
#include "fracwave/experiments.hpp"

using namespace fracwave;

namespace {

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallOde = R"({
  "name": "small",
  "problem": "a",
  "alphas": [1.5],
  "levels": [9, 10, 11],
  "reference": {"kind": "exact"}
})";

}  // namespace

TEST_CASE("observed order") {
  SUBCASE("single pair") {
    const auto o = observed_order({4.0, 1.0});
    REQUIRE(o.size() == 1);
    CHECK(*o[0] == doctest::Approx(2.0));
  }
  SUBCASE("three errors") {
    const auto o = observed_order({1e-3, 2.5e-4, 6.25e-5});
    REQUIRE(o.size() == 2);
    CHECK(*o[0] == doctest::Approx(2.0));
    CHECK(*o[1] == doctest::Approx(2.0));
  }
  SUBCASE("printed pair") {
    CHECK(*observed_order({4.58e-6, 9.95e-7})[0] == doctest::Approx(2.20).epsilon(0.005));
  }
  SUBCASE("too few errors") {
    CHECK_THROWS_AS(observed_order({}), DomainError);
    CHECK_THROWS_AS(observed_order({1.0}), DomainError);
  }
  SUBCASE("zero error is not computable") {
    const auto o = observed_order({1e-3, 0.0, 1e-4});
    CHECK_FALSE(o[0].has_value());
    CHECK_FALSE(o[1].has_value());
  }
}

TEST_CASE("problem catalog") {
  CHECK(parse_problem("d") == ProblemId::D);
  CHECK(problem_letter(ProblemId::F) == 'f');
  CHECK_THROWS_AS(parse_problem("g"), ConfigError);
  CHECK(is_pde(ProblemId::E));
  CHECK_FALSE(is_pde(ProblemId::C));
  CHECK(ode_problem(ProblemId::A).y0 == 1.0);
  CHECK(ode_problem(ProblemId::B).y1 == 1.0);
  CHECK_THROWS_AS(ode_problem(ProblemId::D), ConfigError);
  CHECK_THROWS_AS(pde_problem(ProblemId::A), ConfigError);
  CHECK(pde_problem(ProblemId::D).u0.size() == 1);
  CHECK(parse_scheme("ML1") == Scheme::ML1);
  CHECK_THROWS_AS(parse_scheme("ml1"), ConfigError);
}

TEST_CASE("config parsing and validation") {
  const StudyConfig c = parse_study_config(kSmallOde);
  CHECK(c.name == "small");
  CHECK(c.schemes.size() == 2);
  CHECK(c.reference.kind == ReferenceSpec::Kind::Exact);

  SUBCASE("round trip") {
    CHECK(parse_study_config(to_json(c)) == c);
    for (const char* f : {"table1", "table4", "table6", "table7"}) {
      for (const auto& s : load_study_file(std::filesystem::path(FRACWAVE_CONFIG_DIR) / (std::string(f) + ".json"))) {
        CHECK(parse_study_config(to_json(s)) == s);
      }
    }
  }
  SUBCASE("rejected configs") {
    CHECK_THROWS_AS(parse_study_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_study_config(R"({"problem":"a","alphas":[1.5],"levels":[]})"), ConfigError);
    CHECK_THROWS_AS(parse_study_config(R"({"problem":"a","alphas":[2.5],"levels":[4,5]})"), ConfigError);
    CHECK_THROWS_AS(parse_study_config(R"({"problem":"a","alphas":[1.5],"levels":[5,5]})"), ConfigError);
    // reference must be 8x finer than the finest step
    CHECK_THROWS_AS(parse_study_config(R"({"problem":"a","alphas":[1.5],"levels":[4,5],"reference":{"tau_exp":7}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_study_config(R"({"problem":"a","alphas":[1.5],"levels":[4,5],"coupling":"coupled"})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_study_config(R"({"problem":"d","alphas":[1.5],"levels":[4,5],"coupling":"coupled",
                                           "reference":{"h_exp":5}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_study_config(R"({"problem":"a","alphas":[1.5],"levels":[4,5],
                                           "expect":[{"alpha":1.2,"scheme":"L1"}]})"),
                    ConfigError);
    CHECK_THROWS_AS(load_study_file("/nonexistent/config.json"), IoError);
  }
  SUBCASE("multi-study files") {
    const auto v = parse_study_file(std::string(R"({"studies":[)") + kSmallOde + "," + kSmallOde + "]}");
    CHECK(v.size() == 2);
    CHECK_THROWS_AS(parse_study_file(R"({"studies":[]})"), ConfigError);
  }
}

TEST_CASE("run stamp is deterministic") {
  const StudyConfig c = parse_study_config(kSmallOde);
  const std::string s = run_stamp(c);
  CHECK(s.size() == 12);
  CHECK(run_stamp(c) == s);
  StudyConfig d = c;
  d.alphas = {1.6};
  CHECK(run_stamp(d) != s);
}

TEST_CASE("resolutions") {
  StudyConfig c;
  c.problem = ProblemId::D;
  c.alphas = {1.5};
  c.levels = {5};
  c.coupling = Coupling::Coupled;
  Resolution r = resolve_level(c, 1.5, 6);
  CHECK(r.cells == 64);
  CHECK(r.steps == 256);  // 2^(12/1.5) exactly
  r = resolve_level(c, 1.2, 5);
  CHECK(r.steps == 323);  // ceil(2^(10/1.2)) = ceil(322.54)
  CHECK(r.tau == doctest::Approx(1.0 / 323));
  c.rounding = StepRounding::PowerOfTwo;
  CHECK(resolve_level(c, 1.2, 5).steps == 512);

  c.coupling = Coupling::FixedTau;
  c.fixed_exp = 7;
  r = resolve_level(c, 1.5, 4);
  CHECK(r.cells == 16);
  CHECK(r.steps == 128);

  c.coupling = Coupling::TimeLadder;
  c.fixed_exp = 6;
  r = resolve_level(c, 1.5, 9);
  CHECK(r.cells == 64);
  CHECK(r.steps == 512);
}

TEST_CASE("csv emission") {
  ConvergenceTable t;
  t.study = "one";
  t.problem = 'a';
  t.alpha = 1.5;
  t.scheme = Scheme::ML1;
  t.variable = "tau";
  t.coupling = "tau ladder";
  t.reference = "ML1 tau=2^-10";
  t.stamp = "0123456789ab";
  t.rows = {{"2^-4", 1.25e-3, std::nullopt, false}, {"2^-5", 3.125e-4, 2.0, false}, {"2^-6", 0.0, std::nullopt, true}};

  const std::string csv = emit_csv({t});
  CHECK(csv ==
        "# study=one;problem=a;alpha=1.5;scheme=ML1;variable=tau;coupling=tau ladder;"
        "reference=ML1 tau=2^-10;stamp=0123456789ab\n"
        "resolution,error,order\n"
        "2^-4,1.250000e-03,\n"
        "2^-5,3.125000e-04,2.00\n"
        "2^-6,0.000000e+00,n/a\n");

  const auto back = parse_csv(csv);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == t);
  CHECK(emit_csv(back) == csv);

  const std::string two = emit_csv({t, t});
  CHECK(parse_csv(two).size() == 2);
  CHECK(emit_csv(parse_csv(two)) == two);

  CHECK_THROWS_AS(parse_csv("2^-4,1e-3,\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv("# study=x\nres,err\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv("# study=x\nresolution,error,order\n2^-4,abc,\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv("# study=x\nresolution,error,order\n2^-4,1e-3\n"), ConfigError);
}

TEST_CASE("output format and files") {
  CHECK(parse_format("csv") == TableFormat::Csv);
  CHECK(parse_format("md") == TableFormat::Markdown);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
  CHECK_THROWS_AS(write_file("/nonexistent/dir/out.csv", "x"), IoError);
  const auto p = std::filesystem::temp_directory_path() / "fracwave_write_test.csv";
  write_file(p, "abc\n");
  CHECK(read_text(p) == "abc\n");
  std::filesystem::remove(p);
}

TEST_CASE("small scalar study") {
  const StudyConfig c = parse_study_config(kSmallOde);
  const StudyResult r = run_study(c);
  REQUIRE(r.tables.size() == 2);
  for (const auto& t : r.tables) {
    REQUIRE(t.rows.size() == 3);
    CHECK_FALSE(t.rows[0].order.has_value());
    for (const auto& row : t.rows) CHECK(row.error > 0.0);
  }
  // errors decrease; the modified scheme is the more accurate one
  CHECK(r.tables[0].rows[2].error < r.tables[0].rows[0].error);
  CHECK(r.tables[1].rows[2].error < r.tables[0].rows[2].error);
  CHECK(*r.tables[1].rows[2].order == doctest::Approx(1.87).epsilon(0.02));

  // repeated runs and thread counts give identical output
  const StudyResult again = run_study(c, {4});
  CHECK(emit_csv(again.tables) == emit_csv(r.tables));

  StudyResult fake = r;
  fake.config.expect = {{1.5, Scheme::ML1, {5.0, 5.0}, 0.1, false}, {1.5, Scheme::L1, {}, 0.1, true}};
  const auto bad = check_expectations(fake);
  CHECK(bad.size() == 4);
}

TEST_CASE("coupled study matches the golden table") {
  StudyConfig c = load_study_file(std::filesystem::path(FRACWAVE_CONFIG_DIR) / "table5.json").front();
  c.name = "table5_alpha1.5";
  c.alphas = {1.5};
  std::erase_if(c.expect, [](const Expectation& e) { return e.alpha != 1.5; });
  const StudyResult r = run_study(c, {2});
  CHECK(check_expectations(r).empty());
  CHECK(emit_markdown(r.tables) == read_text(std::filesystem::path(FRACWAVE_GOLDEN_DIR) / "table5_alpha1.5.md"));
}
