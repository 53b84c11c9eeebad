#include "dpcjam/cli/commands.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace dpcjam;
using namespace dpcjam::cli;

namespace {

std::string temp_path(const std::string& name) { return "/tmp/dpcjam_cli_" + name; }

int run(const std::string& args) {
  const std::string cmd = std::string(DPCJAM_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("grid syntax") {
  CHECK(Grid::parse("2.5").values == std::vector<double>{2.5});
  CHECK(Grid::parse("0.5, 1,2").values == std::vector<double>{0.5, 1, 2});
  const auto range = Grid::parse("0:1:0.25");
  REQUIRE(range.values.size() == 5);
  CHECK(range.values.back() == doctest::Approx(1.0));
  CHECK(Grid::parse("0.1:0.3:0.1").values.size() == 3);
  CHECK(Grid::parse("1:1:1").values.size() == 1);
  CHECK_THROWS_AS(Grid::parse(""), ConfigError);
  CHECK_THROWS_AS(Grid::parse("0:1:0"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("0:1:-1"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("1:0:1"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("1:2"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("a,b"), ConfigError);
  CHECK_THROWS_AS(Grid::parse("1,,2"), ConfigError);
  CHECK(Grid::parse("0.5,1").to_string() == "0.5,1");
}

TEST_CASE("config keys, file parsing and override order") {
  const auto path = temp_path("cfg.txt");
  {
    std::ofstream out(path);
    out << "# sweep\nP_U = 1,2\nP_J=0.5:1.5:0.5\ngame=both\nseed=7\nbase=nats\n\noutput=x.csv # inline\n";
  }
  SweepSpec spec;
  apply_config(spec, read_config_file(path));
  CHECK(spec.P_U.values.size() == 2);
  CHECK(spec.P_J.values.size() == 3);
  CHECK(spec.game == GameSelection::Both);
  CHECK(spec.seed == 7);
  CHECK(spec.base == LogBase::Nats);
  CHECK(spec.output == "x.csv");
  apply_config(spec, {{"seed", "9"}, {"P_U", "3"}});
  CHECK(spec.seed == 9);
  CHECK(spec.P_U.values == std::vector<double>{3});
  CHECK(spec.points().size() == 3);
  std::remove(path.c_str());

  CHECK_THROWS_AS(apply_config(spec, {{"P_UU", "1"}}), ConfigError);
  CHECK_THROWS_AS(apply_config(spec, {{"n", "two"}}), ConfigError);
  CHECK_THROWS_AS(apply_config(spec, {{"game", "chess"}}), ConfigError);
  CHECK_THROWS_AS(apply_config(spec, {{"base", "dits"}}), ConfigError);
  CHECK_THROWS_AS(read_config_file("/nonexistent/cfg"), Error);

  SweepSpec bad;
  bad.sigma2 = Grid::parse("0");
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("defaults reproduce the flagship number") {
  SweepSpec spec;
  CHECK(spec.points().size() == 1);
  const auto rows = capacity_rows(spec);
  CHECK(rows.front().costa_jammer == doctest::Approx(0.29248125036).epsilon(1e-10));
}

TEST_CASE("capacity rows in grid order with closed-form values") {
  SweepSpec spec;
  spec.P_U = Grid::parse("10");
  spec.P_J = Grid::parse("5");
  const auto single = capacity_rows(spec);
  REQUIRE(single.size() == 1);
  CHECK(single[0].costa_jammer == doctest::Approx(0.70752).epsilon(1e-5));
  CHECK(single[0].si_jammer == single[0].costa_jammer);
  CHECK(single[0].costa_nojam == doctest::Approx(0.5 * std::log2(11.0)).epsilon(1e-14));

  spec.P_U = Grid::parse("1,2");
  spec.P_J = Grid::parse("0,0,3");
  spec.sigma2 = Grid::parse("0.5,1");
  const auto rows = capacity_rows(spec);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].ch.P_U == 1);
  CHECK(rows[11].ch.P_U == 2);
  CHECK(rows[1].ch.sigma2 == 1);
  for (const auto& r : rows) {
    if (r.ch.P_J == 0.0) CHECK(r.costa_jammer == r.costa_nojam);
  }
  // Duplicate grid points give identical rows.
  CHECK(rows[0].costa_jammer == rows[2].costa_jammer);
  std::ostringstream a, b;
  write_capacity_csv(a, {rows[0]});
  write_capacity_csv(b, {rows[2]});
  CHECK(a.str() == b.str());
}

TEST_CASE("CSV formatting") {
  CapacityRow row;
  row.ch.P_U = 0.1;
  row.costa_jammer = 1.0 / 3.0;
  row.si_jammer = 2e-20;
  row.costa_nojam = 1234567.891;
  std::ostringstream out;
  write_capacity_csv(out, {row});
  CHECK(out.str() ==
        "P_U,P_J,sigma2,sigmaS2,C_costa_jammer,C_si_jammer,C_costa_nojam\n"
        "0.1,1,1,1,0.333333333333,2e-20,1234567.891\n");
  std::ostringstream empty;
  write_capacity_csv(empty, {});
  CHECK(empty.str() == "P_U,P_J,sigma2,sigmaS2,C_costa_jammer,C_si_jammer,C_costa_nojam\n");
}

TEST_CASE("equilibrium runs and trace") {
  SweepSpec spec;
  spec.P_J = Grid::parse("0,1");
  spec.random_starts = 2;
  const auto runs = equilibrium_runs(spec);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].report.iterations == 1);
  CHECK(runs[0].report.converged);
  CHECK(std::abs(runs[1].report.value - 0.29248) < 1e-3);
  std::ostringstream trace;
  write_trace_csv(trace, runs);
  CHECK(trace.str().rfind("point,game,round,utility_after_user_BR,utility_after_jammer_BR,beta,alpha,gap\n", 0) == 0);
  const auto blocks = equilibrium_blocks(runs);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[1].get("converged") == "true");
  CHECK(blocks[1].get("flagged") == "false");
  CHECK(std::stod(blocks[1].get("abs_error")) < 1e-3);

  spec.P_J = Grid::parse("1");
  spec.game = GameSelection::Both;
  const auto both = equilibrium_runs(spec);
  REQUIRE(both.size() == 2);
  CHECK(both[0].report.game == GameKind::Costa);
  CHECK(both[1].report.game == GameKind::SideInformation);
}

TEST_CASE("verification suite at reduced scale, with and without the fault hook") {
  SweepSpec spec;
  spec.trial_scale = 0.1;
  const auto clean = run_verify(spec);
  CHECK(clean.passed);
  for (const auto& c : clean.claims) CHECK_MESSAGE(c.passed, c.claim_id);
  const auto blocks = clean.blocks();
  CHECK(blocks.back().get("passed") == "true");

  spec.inject_fault = true;
  const auto faulty = run_verify(spec);
  CHECK_FALSE(faulty.passed);
  bool has_counterexample = false;
  for (const auto& c : faulty.claims) has_counterexample = has_counterexample || c.counterexample.has_value();
  CHECK(has_counterexample);
  // Same pass/fail per claim across scales for the clean run.
  SweepSpec full;
  full.trial_scale = 0.3;
  const auto wider = run_verify(full);
  REQUIRE(wider.claims.size() == clean.claims.size());
  for (std::size_t i = 0; i < wider.claims.size(); ++i) CHECK(wider.claims[i].passed == clean.claims[i].passed);
}

TEST_CASE("binary: exit codes and outputs") {
  const auto csv = temp_path("cap.csv");
  CHECK(run("capacity --P_U 10 --P_J 5 --output " + csv) == kExitOk);
  const auto l = lines(csv);
  REQUIRE(l.size() == 2);
  CHECK(l[1] == "10,5,1,1,0.707518749639,0.707518749639,1.72971580932");

  CHECK(run("capacity --P_U 1:0:1 --output " + csv) == kExitInvalidConfig);
  CHECK(run("capacity --sigma2 -1 --output " + csv) == kExitInvalidConfig);
  CHECK(run("capacity --bogus 1") == kExitInvalidConfig);
  CHECK(run("capacity --config /nonexistent/cfg --output " + csv) == kExitError);
  CHECK(run("capacity --output /nonexistent/dir/out.csv") == kExitError);

  const auto cfg = temp_path("eq.cfg");
  {
    std::ofstream out(cfg);
    out << "P_U=4\nrandom_starts=3\nmax_rounds=500\n";
  }
  const auto eq = temp_path("eq.csv");
  CHECK(run("equilibrium --config " + cfg + " --P_U 1 --output " + eq) == kExitOk);
  std::ifstream report(eq + ".report");
  const auto blocks = parse_report(report);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].get("P_U") == "1");  // flag beats file
  CHECK(blocks[0].get("starts") == "4");
  CHECK(run("equilibrium --max_rounds 1 --output " + eq) == kExitNonConvergence);

  const auto rep = temp_path("verify.report");
  CHECK(run("verify --trial_scale 0.1 --output " + rep) == kExitOk);
  CHECK(run("verify --trial_scale 0.1 --inject-fault --output " + rep) == kExitVerificationFailed);
  std::ifstream vr(rep);
  bool counterexample = false;
  for (const auto& b : parse_report(vr)) counterexample = counterexample || !b.get("counterexample").empty();
  CHECK(counterexample);

  const auto bin = temp_path("s.bin");
  CHECK(run("sample --N 100 --n 2 --shape two-point --output " + bin) == kExitOk);
  std::ifstream sb(bin, std::ios::binary | std::ios::ate);
  CHECK(static_cast<long>(sb.tellg()) == 32 + 48 * 2 * 100);
  CHECK(run("sample --shape cauchy --output " + bin) == kExitInvalidConfig);

  for (const auto& p : {csv, cfg, eq, eq + ".report", rep, bin}) std::remove(p.c_str());
}
