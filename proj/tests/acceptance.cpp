// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Expected values come from direct closed-form evaluation here,
// not from library helpers.

#include "dpcjam/cli/commands.hpp"
#include "dpcjam/montecarlo.hpp"
#include "dpcjam/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace dpcjam;
using C = Component;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
  cli::SweepSpec spec;
  spec.P_U = cli::Grid::parse("0.5,1,2,5,10");
  spec.P_J = cli::Grid::parse("0,0.5,1,2,5");
  spec.sigma2 = cli::Grid::parse("0.5,1,2");
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = cli::capacity_rows(spec);
  std::ostringstream csv;
  cli::write_capacity_csv(csv, rows);
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  int unequal = 0;
  for (const auto& r : rows) {
    const double expected = 0.5 * std::log2(1.0 + r.ch.P_U / (r.ch.sigma2 + r.ch.P_J));
    worst = std::max(worst, std::abs(r.costa_jammer - expected));
    if (r.costa_jammer != r.si_jammer) ++unequal;
  }
  std::ostringstream d;
  d << rows.size() << " points, max |err|=" << worst << ", C_CJ!=C_SIJ at " << unequal
    << " points, " << elapsed << " s";
  return {rows.size() == 75 && worst <= 1e-9 && unequal == 0 && elapsed < 1.0, d.str()};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  ChannelParams ch;
  const auto eq = solve_saddle(ch, GameKind::Costa);
  const auto br = best_response_jammer(ch, eq.user, GameKind::Costa);
  const double elapsed = seconds_since(t0);
  bool all = eq.starts.size() == 9;
  double worst_gap = 0.0, worst_err = 0.0;
  for (const auto& s : eq.starts) {
    all = all && s.converged;
    worst_gap = std::max(worst_gap, s.duality_gap);
    worst_err = std::max(worst_err, std::abs(s.value - 0.29248));
  }
  std::ostringstream d;
  d << eq.starts.size() - 1 << " random starts + canonical, all converged=" << (all ? "yes" : "no")
    << ", max gap=" << worst_gap << ", max |value-0.29248|=" << worst_err
    << ", |beta*|=" << std::abs(br.beta) << ", " << elapsed << " s";
  return {all && worst_gap < 1e-3 && worst_err < 1e-3 && std::abs(br.beta) < 1e-4 && elapsed < 30.0,
          d.str()};
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed("acceptance-games-coincide", 42, 0));
  double worst = 0.0;
  bool converged = true;
  for (int k = 0; k < 10; ++k) {
    ChannelParams ch;
    ch.P_U = rng.uniform(0.25, 4.0);
    ch.P_J = rng.uniform(0.25, 4.0);
    ch.sigma2 = rng.uniform(0.25, 4.0);
    ch.sigmaS2 = rng.uniform(0.25, 4.0);
    SaddleOptions opt;
    opt.seed = static_cast<std::uint64_t>(k);
    const auto costa = solve_saddle(ch, GameKind::Costa, opt);
    const auto si = solve_saddle(ch, GameKind::SideInformation, opt);
    converged = converged && costa.converged && si.converged;
    worst = std::max(worst, std::abs(costa.value - si.value));
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << "10 points in [0.25,4]^4, max |Costa-SI|=" << worst
    << ", all converged=" << (converged ? "yes" : "no") << ", " << elapsed << " s";
  return {worst < 2e-3 && converged && elapsed < 300.0, d.str()};
}

Outcome criterion4() {
  const auto r = sweep_costa_le_si(ChannelParams{}, {1, 2, 4}, 1000, 42);
  std::ostringstream d;
  d << r.trials << " random pairs over n in {1,2,4}, worst slack=" << r.worst_slack;
  return {r.passed && r.trials == 1000, d.str()};
}

Outcome criterion5() {
  ChannelParams ch;
  std::vector<ClaimReport> claims = {
      sweep_zero_mean_invariance(ch, 200, 42),
      check_memoryless_dominance(ch, 4, 42, 500),
      sweep_det_bound(ch, 4, 500, 42),
      check_wprime_indep_yprime(ch),
      check_beta_zero_optimal(ch, GameKind::Costa, 1e-3),
      check_beta_zero_optimal(ch, GameKind::SideInformation, 1e-3),
  };
  bool all = true;
  std::ostringstream d;
  for (const auto& c : claims) {
    all = all && c.passed;
    d << c.claim_id << "=" << (c.passed ? "ok" : "FAILED") << " ";
  }
  const double cross = claims[3].details.front().second;
  d << "| W'Y' cross=" << cross;

  const auto perturbed = check_wprime_indep_yprime(ch, 0.1);
  cli::SweepSpec faulty;
  faulty.inject_fault = true;
  faulty.trial_scale = 0.1;
  const auto injected = cli::run_verify(faulty);
  const bool controls = !perturbed.passed && perturbed.counterexample && !injected.passed;
  d << " | negative controls fail=" << (controls ? "yes" : "no");
  return {all && cross < 1e-12 && controls, d.str()};
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  ChannelParams ch;
  const auto user = dpc_user(ch);
  const auto jammer = iid_gaussian_jammer(ch);
  const auto joint = assemble_joint(ch, user, jammer);
  const double exact_yu = mutual_information(joint, {C::Y}, {C::U}, {});
  const double exact_us = mutual_information(joint, {C::U}, {C::S}, {}, LogBase::Bits, Inversion::Pseudo);
  const double exact_utility = 0.5 * std::log2(1.0 + 1.0 / 2.0);
  int hit_yu = 0, hit_us = 0, hit_utility = 0;
  double abs_error = 0.0;
  constexpr int kRuns = 100;
  for (int r = 0; r < kRuns; ++r) {
    const auto batch = sample_system(ch, user, jammer, 100000,
                                     derive_seed("mc_coverage", 42, static_cast<std::uint64_t>(r)));
    const auto yu = plugin_mi(batch, {C::Y}, {C::U}, {}, LogBase::Bits);
    const auto us = plugin_mi(batch, {C::U}, {C::S}, {}, LogBase::Bits);
    const auto ut = plugin_utility(batch, GameKind::Costa, LogBase::Bits);
    hit_yu += std::abs(yu.value - exact_yu) < 3.0 * yu.standard_error;
    hit_us += std::abs(us.value - exact_us) < 3.0 * us.standard_error;
    hit_utility += std::abs(ut.value - exact_utility) < 3.0 * ut.standard_error;
    abs_error += std::abs(ut.value - exact_utility);
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << "within 3 SE: I(Y;U) " << hit_yu << "/100, I(U;S) " << hit_us << "/100, utility "
    << hit_utility << "/100; mean |err| utility=" << abs_error / kRuns << " bits, " << elapsed << " s";
  return {hit_yu >= 99 && hit_us >= 99 && abs_error / kRuns < 5e-3 && elapsed < 120.0, d.str()};
}

Outcome criterion7() {
  ChannelParams ch;
  const auto eq = solve_saddle(ch, GameKind::Costa);
  const auto probe = verify_equilibrium(ch, eq.user, eq.jammer, GameKind::Costa, 1000, 42, 1e-6);
  std::ostringstream d;
  d << probe.user_probes << " user + " << probe.jammer_probes
    << " jammer deviations, violations=" << probe.violations.size()
    << ", worst user gain=" << probe.worst_user_gain
    << ", worst jammer gain=" << probe.worst_jammer_gain;
  return {probe.passed() && probe.user_probes == 1000 && probe.jammer_probes == 1000, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 capacity formulas", criterion1},
      {"2 saddle point at default parameters", criterion2},
      {"3 Costa and SI games coincide", criterion3},
      {"4 Costa utility <= SI utility", criterion4},
      {"5 claim suite and negative controls", criterion5},
      {"6 Monte Carlo consistency", criterion6},
      {"7 equilibrium probe verification", criterion7},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
