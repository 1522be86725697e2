#include <sstream>
#include <stdexcept>

#include <doctest.h>

#include "dpcollapse/cli/commands.hpp"

using namespace dpc::cli;
using nlohmann::json;

TEST_CASE("lengths need units") {
  CHECK(parse_length("2.46A", "x") == doctest::Approx(2.46e-10));
  CHECK(parse_length("2.46Å", "x") == doctest::Approx(2.46e-10));
  CHECK(parse_length("25um", "x") == doctest::Approx(25e-6));
  CHECK(parse_length("25μm", "x") == doctest::Approx(25e-6));
  CHECK(parse_length("3nm", "x") == doctest::Approx(3e-9));
  CHECK(parse_length("1e-4m", "x") == doctest::Approx(1e-4));
  CHECK_THROWS_AS(parse_length("2.46", "lattice.spacing"), ConfigError);
  CHECK_THROWS_AS(parse_length("A", "x"), ConfigError);
  CHECK_THROWS_AS(parse_length("2.46 furlongs", "x"), ConfigError);
  try {
    parse_length("5", "sweep.r0_min");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("sweep.r0_min") != std::string::npos);
  }
}

TEST_CASE("separations") {
  const auto rel = parse_separation("4L", "d");
  CHECK(rel.relative);
  CHECK(rel.resolve(2.0) == 8.0);
  const auto abs = parse_separation("100um", "d");
  CHECK_FALSE(abs.relative);
  CHECK(abs.resolve(2.0) == doctest::Approx(1e-4));
}

TEST_CASE("configuration parsing") {
  json doc = json::parse(R"({"lattice": {"preset": "square", "n1": 7, "n2": 7, "spacing": "2A"},
                             "sweep": {"r0_min": "1A", "r0_max": "1um", "points": 4},
                             "superposition": {"d": "8L"}})");
  const auto cfg = parse_run_config(doc);
  CHECK(cfg.lattice.preset == "square");
  CHECK(cfg.lattice.spacing == doctest::Approx(2e-10));
  CHECK(cfg.sweep.points == 4);
  CHECK(cfg.superposition.d.value == 8.0);

  json typo = json::parse(R"({"sweep": {"r0_mni": "1A"}})");
  CHECK_THROWS_AS(parse_run_config(typo), ConfigError);
  json unitless = json::parse(R"({"sweep": {"r0_min": 1e-10}})");
  CHECK_THROWS_AS(parse_run_config(unitless), ConfigError);
  json bad_preset = json::parse(R"({"lattice": {"preset": "hexagonal"}})");
  CHECK_THROWS_AS(parse_run_config(bad_preset), ConfigError);

  json over = json::object();
  set_dotted(over, "lattice.n1", 12);
  set_dotted(over, "out.timing", false);
  const auto c2 = parse_run_config(over);
  CHECK(c2.lattice.n1 == 12);
  CHECK_FALSE(c2.out.timing);
}

TEST_CASE("grids") {
  const auto g = make_grid(1.0, 1000.0, 4, true);
  REQUIRE(g.size() == 4);
  CHECK(g[1] == doctest::Approx(10.0));
  CHECK(g[3] == 1000.0);
  const auto lin = make_grid(0.0, 3.0, 4, false);
  CHECK(lin[2] == doctest::Approx(2.0));
}

TEST_CASE("separation direction normal to the opposite side") {
  const auto g = dpc::build_graphene_sheet(3, 3);
  const dpc::Vec3 n = separation_direction(g, "normal");
  CHECK(n.norm() == doctest::Approx(1.0));
  CHECK(std::fabs(n.dot(g.primitive(1))) < 1e-20);
  CHECK(separation_direction(g, "a1").dot(g.primitive(0).normalized()) == doctest::Approx(1.0));
}

TEST_CASE("sweep CSV round trip") {
  RunConfig cfg;
  cfg.lattice.preset = "square";
  cfg.lattice.n1 = cfg.lattice.n2 = 12;
  cfg.sweep.points = 5;
  cfg.sweep.r0_max = 1e-6;
  cfg.out.timing = false;
  std::ostringstream first, second, log;
  CHECK(cmd_sweep(cfg, first, log) == kExitNoCrossing);
  CHECK(cmd_sweep(cfg, second, log) == kExitNoCrossing);
  CHECK(first.str() == second.str());
  CHECK(first.str().rfind(std::string(kSweepHeader) + "\n", 0) == 0);

  std::istringstream in(first.str());
  const auto rows = read_sweep_csv(in);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].bound_lower.has_value());
  CHECK_FALSE(rows[0].wall_ms.has_value());
  CHECK(*rows[0].term_count == 23ull * 23);

  std::istringstream again(first.str());
  std::ostringstream replayed;
  cmd_replot(again, replayed, log);
  CHECK(replayed.str() == first.str());

  std::istringstream wrong("r0,tau\n1,2\n");
  CHECK_THROWS_WITH_AS(read_sweep_csv(wrong), doctest::Contains("r0_m,r_eff_m"), std::runtime_error);
}

TEST_CASE("crossing summary interpolates in log space") {
  std::vector<SweepRow> rows(3);
  rows[0].r0 = 1.0;
  rows[0].tau = 1e-4;
  rows[1].r0 = 10.0;
  rows[1].tau = 1e-3;
  rows[2].r0 = 100.0;
  rows[2].tau = 1e-1;
  const auto s = summarize_crossing(rows, 1e-2);
  CHECK(s.crossing);
  CHECK(s.min_tau == 1e-4);
  REQUIRE(s.r0_upper);
  CHECK(*s.r0_upper == doctest::Approx(std::sqrt(10.0) * 10.0));
  rows[0].tau = rows[1].tau = 1.0;
  rows[2].tau = 2.0;
  const auto none = summarize_crossing(rows, 1e-2);
  CHECK_FALSE(none.crossing);
  CHECK(none.min_ratio == doctest::Approx(100.0));
}

TEST_CASE("budget refusal surfaces from commands") {
  RunConfig cfg;
  cfg.lattice.n1 = cfg.lattice.n2 = 2000;
  cfg.exec.term_budget = 1e6;
  std::ostringstream out, log;
  CHECK_THROWS_AS(cmd_sweep(cfg, out, log), dpc::BudgetExceeded);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}
