#include "dpcjam/cli/commands.hpp"

#include "dpcjam/montecarlo.hpp"
#include "dpcjam/rng.hpp"
#include "dpcjam/sample_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

namespace dpcjam::cli {

namespace {

// Bounded pool; results land at their own index so output order is fixed.
template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

std::string or_default(const std::string& path, const std::string& fallback) {
  return path.empty() ? fallback : path;
}

int scaled(int trials, double scale) {
  return std::max(1, static_cast<int>(std::lround(trials * scale)));
}

ClaimReport mc_coverage(const ChannelParams& ch, int runs, std::uint64_t seed) {
  constexpr int kSamples = 100000;
  const auto user = dpc_user(ch);
  const auto jammer = iid_gaussian_jammer(ch);
  const double exact_utility = costa_utility(ch, user, jammer);
  const double exact_mi = mutual_information(assemble_joint(ch, user, jammer), {Component::Y},
                                             {Component::U}, {}, ch.base) /
                          ch.n;
  int utility_misses = 0;
  int mi_misses = 0;
  double abs_error = 0.0;
  for (int r = 0; r < runs; ++r) {
    const auto batch = sample_system(ch, user, jammer, kSamples,
                                     derive_seed("mc_coverage", seed, static_cast<std::uint64_t>(r)));
    const auto u = plugin_utility(batch, GameKind::Costa, ch.base);
    const auto mi = plugin_mi(batch, {Component::Y}, {Component::U}, {}, ch.base);
    if (std::abs(u.value - exact_utility) >= 3.0 * u.standard_error) ++utility_misses;
    if (std::abs(mi.value / ch.n - exact_mi) >= 3.0 * mi.standard_error / ch.n) ++mi_misses;
    abs_error += std::abs(u.value - exact_utility);
  }
  const int allowed = std::max(1, runs / 100);
  ClaimAccumulator acc("mc_coverage", 0.0);
  acc.record(allowed - utility_misses, describe(ch) + ";quantity=utility");
  acc.record(allowed - mi_misses, describe(ch) + ";quantity=I(Y;U)");
  acc.detail("runs", runs);
  acc.detail("allowed_misses", allowed);
  acc.detail("utility_misses", utility_misses);
  acc.detail("mi_misses", mi_misses);
  acc.detail("mean_abs_error", abs_error / runs);
  return acc.finish();
}

ClaimReport probe_claim(const ChannelParams& ch, JammerShape shape, std::uint64_t seed) {
  const auto probe = nongaussian_probe(ch, dpc_user(ch), shape, 100000,
                                       derive_seed("nongaussian_probe", seed, 0));
  ClaimAccumulator acc("nongaussian_" + std::string(to_string(shape)), 0.0);
  const double se3 = 3.0 * probe.surrogate.standard_error;
  const double diff = probe.surrogate.value - probe.gaussian;
  // The Gaussian control must agree both ways; shaped jammers one way.
  acc.record(shape == JammerShape::Gaussian ? se3 - std::abs(diff) : probe.margin,
             describe(ch) + ";shape=" + std::string(to_string(shape)));
  acc.detail("surrogate_utility", probe.surrogate.value);
  acc.detail("surrogate_se", probe.surrogate.standard_error);
  acc.detail("gaussian_utility", probe.gaussian);
  return acc.finish();
}

ClaimReport saddle_claim(const ChannelParams& ch, std::uint64_t seed, int probes,
                         bool inject_fault) {
  SaddleOptions options;
  options.seed = seed;
  const auto eq = solve_saddle(ch, GameKind::Costa, options);
  ClaimAccumulator acc("saddle_costa", 0.0);
  const std::string inputs = describe(ch);
  for (const auto& start : eq.starts) {
    acc.record(std::min(1e-3 - start.duality_gap, 1e-3 - std::abs(start.value - eq.closed_form)),
               inputs + ";start=" + start.label);
  }
  acc.detail("value", eq.value);
  acc.detail("closed_form", eq.closed_form);
  acc.detail("duality_gap", eq.duality_gap);

  UserStrategy user = eq.user;
  if (inject_fault) user = dpc_user(ch, dpc_coefficient(ch) + 0.1);
  const auto probe = verify_equilibrium(ch, user, eq.jammer, GameKind::Costa, probes,
                                        derive_seed("equilibrium_probes", seed, 0));
  acc.detail("probe_worst_user_gain", probe.worst_user_gain);
  acc.detail("probe_worst_jammer_gain", probe.worst_jammer_gain);
  acc.detail("probe_violations", static_cast<double>(probe.violations.size()));
  for (const auto& v : probe.violations) {
    acc.record(probe.tolerance - v.improvement,
               inputs + ";probe_side=" + v.side + ";probe_seed=" + std::to_string(v.seed) +
                   (inject_fault ? ";fault=alpha+0.1" : ""));
  }
  return acc.finish();
}

}  // namespace

std::vector<CapacityRow> capacity_rows(const SweepSpec& spec) {
  spec.validate();
  const auto points = spec.points();
  std::vector<CapacityRow> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const auto& ch = points[i];
    rows[i] = {ch, capacity_costa_jammer(ch), capacity_si_jammer(ch), capacity_costa(ch)};
  });
  return rows;
}

void write_capacity_csv(std::ostream& out, const std::vector<CapacityRow>& rows) {
  out << "P_U,P_J,sigma2,sigmaS2,C_costa_jammer,C_si_jammer,C_costa_nojam\n";
  for (const auto& r : rows) {
    out << format_number(r.ch.P_U) << ',' << format_number(r.ch.P_J) << ','
        << format_number(r.ch.sigma2) << ',' << format_number(r.ch.sigmaS2) << ','
        << format_number(r.costa_jammer) << ',' << format_number(r.si_jammer) << ','
        << format_number(r.costa_nojam) << '\n';
  }
}

std::vector<EquilibriumRun> equilibrium_runs(const SweepSpec& spec) {
  spec.validate();
  const auto points = spec.points();
  const auto kinds = games(spec.game);
  std::vector<EquilibriumRun> runs(points.size() * kinds.size());
  SaddleOptions options;
  options.tol = spec.tol;
  options.max_rounds = spec.max_rounds;
  options.random_starts = spec.random_starts;
  options.seed = spec.seed;
  parallel_for(runs.size(), [&](std::size_t i) {
    const std::size_t p = i / kinds.size();
    runs[i].point = static_cast<int>(p);
    runs[i].ch = points[p];
    runs[i].report = solve_saddle(points[p], kinds[i % kinds.size()], options);
  });
  return runs;
}

void write_trace_csv(std::ostream& out, const std::vector<EquilibriumRun>& runs) {
  out << "point,game,round,utility_after_user_BR,utility_after_jammer_BR,beta,alpha,gap\n";
  for (const auto& run : runs) {
    for (const auto& row : run.report.trace) {
      out << run.point << ',' << to_string(run.report.game) << ',' << row.round << ','
          << format_number(row.utility_after_user) << ','
          << format_number(row.utility_after_jammer) << ',' << format_number(row.beta) << ','
          << format_number(row.alpha) << ',' << format_number(row.gap) << '\n';
    }
  }
}

std::vector<ReportBlock> equilibrium_blocks(const std::vector<EquilibriumRun>& runs) {
  std::vector<ReportBlock> blocks;
  for (const auto& run : runs) {
    const auto& r = run.report;
    int converged_starts = 0;
    for (const auto& s : r.starts) converged_starts += s.converged ? 1 : 0;
    ReportBlock b;
    b.add("point", run.point)
        .add("game", std::string(to_string(r.game)))
        .add("P_U", run.ch.P_U)
        .add("P_J", run.ch.P_J)
        .add("sigma2", run.ch.sigma2)
        .add("sigmaS2", run.ch.sigmaS2)
        .add("n", run.ch.n)
        .add("base", std::string(to_string(run.ch.base)))
        .add("value", r.value)
        .add("closed_form", r.closed_form)
        .add("abs_error", std::abs(r.value - r.closed_form))
        .add("duality_gap", r.duality_gap)
        .add("rounds", r.iterations)
        .add("starts", static_cast<int>(r.starts.size()))
        .add("starts_converged", converged_starts)
        .add("converged", r.converged)
        .add("flagged", !r.converged);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

std::vector<ReportBlock> VerifyResult::blocks() const {
  std::vector<ReportBlock> out;
  int failures = 0;
  for (const auto& c : claims) {
    out.push_back(c.to_block());
    failures += c.passed ? 0 : 1;
  }
  ReportBlock summary;
  summary.add("summary", "verify")
      .add("claims", static_cast<int>(claims.size()))
      .add("failures", failures)
      .add("passed", passed);
  out.push_back(std::move(summary));
  return out;
}

VerifyResult run_verify(const SweepSpec& spec) {
  spec.validate();
  const ChannelParams ch = spec.points().front();
  const double scale = spec.trial_scale;
  const std::uint64_t seed = spec.seed;
  const double grid_res = std::clamp(1e-3 / scale, 1e-4, 5e-2);

  VerifyResult result;
  auto& c = result.claims;
  c.push_back(sweep_costa_le_si(ch, {1, 2, 4}, scaled(1000, scale), seed));
  c.push_back(sweep_zero_mean_invariance(ch, scaled(200, scale), seed));
  c.push_back(check_memoryless_dominance(ch, 4, seed, scaled(500, scale)));
  c.push_back(sweep_det_bound(ch, 4, scaled(500, scale), seed));
  c.push_back(check_hadamard(6, scaled(500, scale), seed));
  c.push_back(check_wprime_indep_yprime(ch, spec.inject_fault ? 0.1 : 0.0));
  c.push_back(check_beta_zero_optimal(ch, GameKind::Costa, grid_res));
  c.push_back(check_beta_zero_optimal(ch, GameKind::SideInformation, grid_res));
  c.push_back(saddle_claim(ch, seed, scaled(1000, scale), spec.inject_fault));
  c.push_back(mc_coverage(ch, std::max(10, scaled(100, scale)), seed));
  for (auto shape : {JammerShape::Gaussian, JammerShape::Uniform, JammerShape::TwoPoint}) {
    c.push_back(probe_claim(ch, shape, seed));
  }
  result.passed = std::all_of(c.begin(), c.end(), [](const auto& r) { return r.passed; });
  return result;
}

int cmd_capacity(const SweepSpec& spec, std::ostream& log) {
  const auto rows = capacity_rows(spec);
  const std::string path = or_default(spec.output, "capacity.csv");
  auto out = open_output(path);
  write_capacity_csv(out, rows);
  finish_output(out, path);
  log << "capacity: " << rows.size() << " rows -> " << path << '\n';
  return kExitOk;
}

int cmd_equilibrium(const SweepSpec& spec, std::ostream& log) {
  const auto runs = equilibrium_runs(spec);
  const std::string trace_path = or_default(spec.output, "equilibrium.csv");
  const std::string report_path = or_default(spec.report, trace_path + ".report");
  auto trace = open_output(trace_path);
  write_trace_csv(trace, runs);
  finish_output(trace, trace_path);
  auto report = open_output(report_path);
  write_report(report, equilibrium_blocks(runs));
  finish_output(report, report_path);

  int flagged = 0;
  for (const auto& run : runs) {
    if (!run.report.converged) ++flagged;
    log << "point " << run.point << " game=" << to_string(run.report.game)
        << " value=" << format_number(run.report.value)
        << " closed_form=" << format_number(run.report.closed_form)
        << " gap=" << format_number(run.report.duality_gap)
        << (run.report.converged ? "" : " NOT CONVERGED") << '\n';
  }
  log << "equilibrium: trace -> " << trace_path << ", report -> " << report_path << '\n';
  return flagged > 0 ? kExitNonConvergence : kExitOk;
}

int cmd_verify(const SweepSpec& spec, std::ostream& log) {
  const auto result = run_verify(spec);
  const std::string path = or_default(spec.output, "verify.report");
  auto out = open_output(path);
  write_report(out, result.blocks());
  finish_output(out, path);
  for (const auto& c : result.claims) {
    log << (c.passed ? "PASS " : "FAIL ") << c.claim_id
        << " worst_slack=" << format_number(c.worst_slack) << " trials=" << c.trials << '\n';
    if (c.counterexample) log << "  counterexample: " << *c.counterexample << '\n';
  }
  log << "verify: report -> " << path << '\n';
  return result.passed ? kExitOk : kExitVerificationFailed;
}

int cmd_sample(const SweepSpec& spec, std::ostream& log) {
  spec.validate();
  JammerShape shape;
  try {
    shape = parse_jammer_shape(spec.shape);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  const ChannelParams ch = spec.points().front();
  const auto batch = sample_system(ch, dpc_user(ch), iid_gaussian_jammer(ch), spec.N, spec.seed, shape);
  const std::string path = or_default(spec.output, "samples.bin");
  write_samples(path, batch);
  log << "sample: N=" << batch.N << " n=" << batch.n << " -> " << path << '\n';
  return kExitOk;
}

}  // namespace dpcjam::cli
