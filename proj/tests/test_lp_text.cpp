#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "robustcap/errors.hpp"
#include "robustcap/lp_text.hpp"
#include "robustcap/simplex.hpp"
#include "testutil.hpp"

using namespace robustcap;

TEST_CASE("one-variable problem exports exactly one bounds line") {
  LpProblem lp;
  lp.add_var("x", 0.0, 10.0, 1.0, "t");
  lp.add_row("c", {{0, 1.0}}, Sense::Ge, 3.0);
  const std::string text = export_lp_file(lp);
  std::size_t bounds_pos = text.find("Bounds\n");
  std::size_t end_pos = text.find("End\n");
  REQUIRE(bounds_pos != std::string::npos);
  REQUIRE(end_pos != std::string::npos);
  const std::string section = text.substr(bounds_pos + 7, end_pos - bounds_pos - 7);
  CHECK(std::count(section.begin(), section.end(), '\n') == 1);
  CHECK(section == " 0 <= x <= 10\n");
}

TEST_CASE("problem without constraints still exports and parses") {
  LpProblem lp;
  lp.add_var("x", 1.0, 2.0, 5.0, "t");
  const std::string text = export_lp_file(lp);
  const LpProblem back = parse_lp_file(text);
  REQUIRE(back.num_vars() == 1);
  REQUIRE(back.num_rows() == 0);
  const Solution direct = solve(lp);
  const Solution round = solve(back);
  REQUIRE(direct.optimal());
  REQUIRE(round.optimal());
  CHECK(round.objective == doctest::Approx(direct.objective));
}

TEST_CASE("export -> import -> solve equals direct solve on random instances") {
  std::mt19937 rng(123456);
  int checked = 0;
  for (int k = 0; checked < 20 && k < 100; ++k) {
    const LpProblem lp = testutil::random_small_lp(rng);
    const Solution direct = solve(lp);
    const std::string text = export_lp_file(lp);
    const LpProblem back = parse_lp_file(text);
    const Solution round = solve(back);
    CAPTURE(k);
    REQUIRE(round.status == direct.status);
    if (direct.optimal()) {
      CHECK(round.objective == doctest::Approx(direct.objective).epsilon(1e-9));
      ++checked;
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("export is byte-deterministic") {
  std::mt19937 rng(5);
  const LpProblem lp = testutil::random_small_lp(rng);
  CHECK(export_lp_file(lp) == export_lp_file(lp));
}

TEST_CASE("awkward names are sanitized deterministically") {
  LpProblem lp;
  lp.add_var("0 weird name!", 0.0, 1.0, 1.0, "t");
  lp.add_var("0 weird name?", 0.0, 1.0, 2.0, "t");
  lp.add_row("row with spaces", {{0, 1.0}, {1, 1.0}}, Sense::Ge, 1.0);
  const std::string text = export_lp_file(lp);
  CHECK(text.find("v0_weird_name_") != std::string::npos);
  CHECK(text.find("v0_weird_name___1") != std::string::npos);
  const LpProblem back = parse_lp_file(text);
  const Solution a = solve(lp);
  const Solution b = solve(back);
  REQUIRE(a.optimal());
  REQUIRE(b.optimal());
  CHECK(a.objective == doctest::Approx(b.objective));
}

TEST_CASE("malformed input names the line") {
  CHECK_THROWS_WITH_AS(parse_lp_file("Minimize\n obj: 1 x\nSubject To\n c: 1 x >=\nEnd\n"),
                       doctest::Contains("line 4"), SchemaError);
  CHECK_THROWS_AS(parse_lp_file("Minimize\n obj: 1 x\n"), SchemaError);
}
