#include "dpcjam/game.hpp"

#include "dpcjam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace dpcjam {

namespace {

using C = Component;

// Utilities without validation or feasibility checks; the optimizers probe
// slightly outside the PSD cone through finite differences.
double raw_costa(const ChannelParams& ch, const UserStrategy& user, const JammerStrategy& jammer) {
  const auto joint = detail::assemble_joint_unchecked(ch, user, jammer);
  const double i_uy = mutual_information(joint, {C::Y}, {C::U}, {}, ch.base, Inversion::Pseudo);
  const double i_us = mutual_information(joint, {C::U}, {C::S}, {}, ch.base, Inversion::Pseudo);
  return (i_uy - i_us) / ch.n;
}

double raw_si(const ChannelParams& ch, const UserStrategy& user, const JammerStrategy& jammer) {
  const auto joint = detail::assemble_joint_unchecked(ch, user, jammer);
  return mutual_information(joint, {C::Y}, {C::X}, {C::S}, ch.base, Inversion::Pseudo) / ch.n;
}

double raw_utility(GameKind game, const ChannelParams& ch, const UserStrategy& user,
                   const JammerStrategy& jammer) {
  return game == GameKind::Costa ? raw_costa(ch, user, jammer) : raw_si(ch, user, jammer);
}

void require_feasible(const ChannelParams& ch, const UserStrategy& user,
                      const JammerStrategy& jammer) {
  const auto fu = feasible(user, ch);
  if (fu.well_formed && !fu.feasible) {
    throw InfeasiblePower("user strategy power " + std::to_string(fu.power) +
                          " exceeds budget " + std::to_string(fu.budget));
  }
  const auto fj = feasible(jammer, ch);
  if (fj.well_formed && !fj.feasible) {
    throw InfeasiblePower("jammer strategy power " + std::to_string(fj.power) +
                          " exceeds budget " + std::to_string(fj.budget));
  }
}

double mean_diagonal(const Matrix& m) { return m.rows() > 0 ? m.trace() / m.rows() : 0.0; }

double half_log(double x, LogBase base) { return from_nats(0.5 * std::log1p(x), base); }

UserStrategy mix(const UserStrategy& a, const UserStrategy& b, double t) {
  return {(1.0 - t) * a.state_coupling + t * b.state_coupling,
          (1.0 - t) * a.innovation_cov + t * b.innovation_cov,
          (1.0 - t) * a.dpc_alpha + t * b.dpc_alpha};
}

JammerStrategy mix(const JammerStrategy& a, const JammerStrategy& b, double t) {
  return {(1.0 - t) * a.state_coupling + t * b.state_coupling,
          (1.0 - t) * a.innovation_cov + t * b.innovation_cov, (1.0 - t) * a.mean + t * b.mean};
}

constexpr double kMinRelaxation = 1.0 / 1024.0;

// Moves toward `target` by the largest fraction in {t, t/2, ...} that does
// not hurt the mover; falls back to the full step, then to staying put.
template <typename Strategy, typename Value, typename Better>
std::pair<Strategy, double> relax(const Strategy& current, const Strategy& target, double t,
                                  Value value, Better better) {
  const double base = value(current);
  for (; t >= kMinRelaxation; t *= 0.5) {
    Strategy candidate = mix(current, target, t);
    const double v = value(candidate);
    if (better(v, base)) return {std::move(candidate), v};
  }
  const double v = value(target);
  if (better(v, base)) return {target, v};
  return {current, base};
}

StartOutcome run_start(const ChannelParams& ch, GameKind game, UserStrategy user,
                       JammerStrategy jammer, const SaddleOptions& options, std::string label) {
  StartOutcome out;
  out.label = std::move(label);
  const double slack = 1e-12;
  auto not_worse_for_user = [&](double v, double base) {
    return v >= base - slack * std::max(1.0, std::abs(base));
  };
  auto not_worse_for_jammer = [&](double v, double base) {
    return v <= base + slack * std::max(1.0, std::abs(base));
  };

  // The step fraction adapts to the best-response gap: halved when the gap
  // grows (the pair is rotating around the saddle), regrown slowly otherwise.
  double step = options.relaxation;
  double previous_gap = std::numeric_limits<double>::infinity();
  for (int round = 1; round <= options.max_rounds; ++round) {
    const auto ubr = best_response_user(ch, jammer, game, options.response);
    auto [next_user, after_user] = relax(
        user, ubr.strategy, step,
        [&](const UserStrategy& u) { return raw_utility(game, ch, u, jammer); },
        not_worse_for_user);
    user = std::move(next_user);

    const auto jbr = best_response_jammer(ch, user, game, options.response);
    auto [next_jammer, after_jammer] = relax(
        jammer, jbr.strategy, step,
        [&](const JammerStrategy& j) { return raw_utility(game, ch, user, j); },
        not_worse_for_jammer);
    jammer = std::move(next_jammer);

    const double br_gap = std::max(0.0, ubr.utility - jbr.utility);
    out.trace.push_back({round, after_user, after_jammer, mean_diagonal(jammer.state_coupling),
                         mean_diagonal(user.dpc_alpha), after_user - after_jammer});
    out.rounds = round;
    if (br_gap < options.tol && std::abs(after_user - after_jammer) < options.tol) {
      out.converged = true;
      break;
    }
    if (br_gap > previous_gap) {
      step = std::max(kMinRelaxation, 0.5 * step);
    } else {
      step = std::min(options.relaxation, 1.25 * step);
    }
    previous_gap = br_gap;
  }

  out.value = raw_utility(game, ch, user, jammer);
  const auto ubr = best_response_user(ch, jammer, game, options.response);
  const auto jbr = best_response_jammer(ch, user, game, options.response);
  out.duality_gap = ubr.utility - jbr.utility;
  out.user = std::move(user);
  out.jammer = std::move(jammer);
  return out;
}

}  // namespace

namespace detail {
double utility_unchecked(GameKind game, const ChannelParams& ch, const UserStrategy& user,
                         const JammerStrategy& jammer) {
  return raw_utility(game, ch, user, jammer);
}
}  // namespace detail

std::string_view to_string(GameKind game) {
  return game == GameKind::Costa ? "costa" : "si";
}

std::optional<GameKind> parse_game_kind(std::string_view text) {
  if (text == "costa" || text == "Costa") return GameKind::Costa;
  if (text == "si" || text == "SI" || text == "side-information") return GameKind::SideInformation;
  return std::nullopt;
}

double costa_utility(const ChannelParams& ch, const UserStrategy& user,
                     const JammerStrategy& jammer) {
  assemble_joint(ch, user, jammer);  // validation only
  require_feasible(ch, user, jammer);
  return raw_costa(ch, user, jammer);
}

double si_utility(const ChannelParams& ch, const UserStrategy& user,
                  const JammerStrategy& jammer) {
  assemble_joint(ch, user, jammer);
  require_feasible(ch, user, jammer);
  return raw_si(ch, user, jammer);
}

double utility(GameKind game, const ChannelParams& ch, const UserStrategy& user,
               const JammerStrategy& jammer) {
  return game == GameKind::Costa ? costa_utility(ch, user, jammer)
                                 : si_utility(ch, user, jammer);
}

double capacity_costa(const ChannelParams& ch) {
  ch.validate();
  return half_log(ch.P_U / ch.sigma2, ch.base);
}

double capacity_costa_jammer(const ChannelParams& ch) {
  ch.validate();
  return half_log(ch.P_U / (ch.sigma2 + ch.P_J), ch.base);
}

double capacity_si_jammer(const ChannelParams& ch) {
  ch.validate();
  return half_log(ch.P_U / (ch.P_J + ch.sigma2), ch.base);
}

double capacity(GameKind game, const ChannelParams& ch) {
  return game == GameKind::Costa ? capacity_costa_jammer(ch) : capacity_si_jammer(ch);
}

JammerResponse best_response_jammer(const ChannelParams& ch, const UserStrategy& user,
                                    GameKind game, const ResponseOptions& options) {
  ch.validate();
  const int n = ch.n;
  const Matrix I = Matrix::Identity(n, n);
  JammerResponse out;
  if (ch.P_J == 0.0) {
    out.strategy = iid_gaussian_jammer(ch);
    out.utility = raw_utility(game, ch, user, out.strategy);
    out.flat = true;
    return out;
  }

  auto solve_inner = [&](double beta) {
    const double budget = n * std::max(0.0, max_innovation_power(ch, beta));
    const Matrix coupling = beta * I;
    auto objective = [&](const Matrix& cov) {
      return raw_utility(game, ch, user, JammerStrategy{coupling, cov, Vector::Zero(n)});
    };
    return opt::projected_gradient_minimize(objective, (budget / n) * I, budget, options.psd);
  };

  double beta = 0.0;
  double grid_best = std::numeric_limits<double>::infinity();
  if (ch.sigmaS2 > 0.0) {
    const double beta_max = std::sqrt(ch.P_J / ch.sigmaS2);
    auto outer = [&](double b) {
      const auto inner = solve_inner(b);
      out.converged = out.converged && inner.converged;
      return inner.value;
    };
    const auto r =
        opt::grid_golden_minimize(outer, -beta_max, beta_max, options.grid_points, options.param_tol);
    beta = r.flat ? 0.0 : r.x;
    out.flat = r.flat;
    grid_best = r.grid_best;
  } else {
    out.flat = true;
  }
  const auto inner = solve_inner(beta);
  out.converged = out.converged && inner.converged;
  out.strategy = {beta * I, inner.x, Vector::Zero(n)};
  out.utility = inner.value;
  out.beta = beta;
  out.certified = inner.value <= grid_best + 1e-12 * std::max(1.0, std::abs(grid_best));
  return out;
}

UserResponse best_response_user(const ChannelParams& ch, const JammerStrategy& jammer,
                                GameKind game, const ResponseOptions& options) {
  ch.validate();
  const int n = ch.n;
  UserResponse out;
  if (game == GameKind::Costa) {
    double alpha = dpc_coefficient(ch);
    if (ch.sigmaS2 > 0.0) {
      const double c = 1.0 + mean_diagonal(jammer.state_coupling);
      const double lo = std::min(0.0, c) - 0.5;
      const double hi = std::max(0.0, c) + 0.5;
      auto negated = [&](double a) { return -raw_costa(ch, dpc_user(ch, a), jammer); };
      const auto r = opt::grid_golden_minimize(negated, lo, hi, options.grid_points,
                                               options.param_tol);
      out.flat = r.flat;
      if (!r.flat) alpha = r.x;
    } else {
      out.flat = true;
    }
    out.strategy = dpc_user(ch, alpha);
    out.alpha = alpha;
    out.utility = raw_costa(ch, out.strategy, jammer);
    return out;
  }

  const Matrix alpha = dpc_coefficient(ch) * Matrix::Identity(n, n);
  const Matrix zero = Matrix::Zero(n, n);
  auto negated = [&](const Matrix& cov) {
    return -raw_si(ch, UserStrategy{zero, cov, alpha}, jammer);
  };
  const double budget = n * ch.P_U;
  const auto r = opt::projected_gradient_minimize(
      negated, ch.P_U * Matrix::Identity(n, n), budget, options.psd);
  out.strategy = {zero, r.x, alpha};
  out.alpha = dpc_coefficient(ch);
  out.utility = -r.value;
  out.converged = r.converged;
  return out;
}

UserStrategy random_family_user(const ChannelParams& ch, GameKind game, std::uint64_t seed) {
  ch.validate();
  Rng rng(derive_seed("random_family_user", seed, 0));
  if (game == GameKind::Costa) return dpc_user(ch, rng.uniform(-0.5, 1.5));
  auto user = random_feasible_user(ch, seed);
  user.state_coupling.setZero();
  user.innovation_cov *= (ch.n * ch.P_U) / user.innovation_cov.trace();
  user.dpc_alpha = dpc_coefficient(ch) * Matrix::Identity(ch.n, ch.n);
  return user;
}

JammerStrategy random_family_jammer(const ChannelParams& ch, std::uint64_t seed) {
  ch.validate();
  const int n = ch.n;
  if (ch.P_J == 0.0) return iid_gaussian_jammer(ch);
  Rng rng(derive_seed("random_family_jammer", seed, 0));
  const double beta_max = ch.sigmaS2 > 0.0 ? std::sqrt(ch.P_J / ch.sigmaS2) : 0.0;
  const double beta = rng.uniform(-beta_max, beta_max);
  const double budget = n * std::max(0.0, max_innovation_power(ch, beta));
  Matrix m(n, n + 2);
  for (int j = 0; j < n + 2; ++j) {
    for (int i = 0; i < n; ++i) m(i, j) = rng.normal();
  }
  Matrix cov = m * m.transpose();
  const double fraction = rng.uniform() < 0.5 ? 1.0 : rng.uniform();
  cov *= fraction * budget / cov.trace();
  return {beta * Matrix::Identity(n, n), linalg::symmetrize(cov), Vector::Zero(n)};
}

EquilibriumReport solve_saddle(const ChannelParams& ch, GameKind game,
                               const SaddleOptions& options) {
  ch.validate();
  EquilibriumReport report;
  report.game = game;
  report.closed_form = capacity(game, ch);
  report.flat = ch.sigmaS2 == 0.0;

  std::vector<std::future<StartOutcome>> pending;
  pending.push_back(std::async(std::launch::async, run_start, ch, game, dpc_user(ch),
                               iid_gaussian_jammer(ch), options, std::string("canonical")));
  for (int k = 0; k < options.random_starts; ++k) {
    const auto seed = derive_seed("saddle-start", options.seed, static_cast<std::uint64_t>(k));
    pending.push_back(std::async(std::launch::async, run_start, ch, game,
                                 random_family_user(ch, game, seed),
                                 random_family_jammer(ch, seed), options,
                                 "random-" + std::to_string(k)));
  }
  report.converged = true;
  for (auto& p : pending) {
    report.starts.push_back(p.get());
    report.converged = report.converged && report.starts.back().converged;
  }

  const auto& canonical = report.starts.front();
  report.value = canonical.value;
  report.user = canonical.user;
  report.jammer = canonical.jammer;
  report.duality_gap = canonical.duality_gap;
  report.iterations = canonical.rounds;
  report.trace = canonical.trace;
  if (options.probes > 0) {
    report.probe_violations =
        verify_equilibrium(ch, report.user, report.jammer, game, options.probes, options.seed)
            .violations;
  }
  return report;
}

void require_converged(const EquilibriumReport& report) {
  if (report.converged) return;
  std::ostringstream msg;
  msg << "saddle search did not converge (" << to_string(report.game) << " game)";
  for (const auto& start : report.starts) {
    if (start.converged) continue;
    msg << "\n  start " << start.label << " after " << start.rounds << " rounds";
    const std::size_t tail = std::min<std::size_t>(start.trace.size(), 3);
    for (std::size_t i = start.trace.size() - tail; i < start.trace.size(); ++i) {
      const auto& row = start.trace[i];
      msg << "\n    round=" << row.round << " user=" << row.utility_after_user
          << " jammer=" << row.utility_after_jammer << " beta=" << row.beta
          << " alpha=" << row.alpha;
    }
  }
  throw NonConvergence(msg.str());
}

ProbeReport verify_equilibrium(const ChannelParams& ch, const UserStrategy& user,
                               const JammerStrategy& jammer, GameKind game, int n_probes,
                               std::uint64_t seed, double tolerance) {
  ProbeReport report;
  report.tolerance = tolerance;
  report.candidate_value = utility(game, ch, user, jammer);
  report.worst_user_gain = -std::numeric_limits<double>::infinity();
  report.worst_jammer_gain = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < n_probes; ++i) {
    const auto probe_seed = derive_seed("probe-user", seed, static_cast<std::uint64_t>(i));
    const auto deviation = random_feasible_user(ch, probe_seed);
    double value = -std::numeric_limits<double>::infinity();
    try {
      value = raw_utility(game, ch, deviation, jammer);
    } catch (const SingularCovariance&) {
    }
    const double gain = value - report.candidate_value;
    report.worst_user_gain = std::max(report.worst_user_gain, gain);
    ++report.user_probes;
    if (gain > tolerance) report.violations.push_back({"user", probe_seed, gain});
  }
  if (ch.P_J > 0.0) {
    for (int i = 0; i < n_probes; ++i) {
      const auto probe_seed = derive_seed("probe-jammer", seed, static_cast<std::uint64_t>(i));
      const auto deviation = random_feasible_jammer(ch, probe_seed);
      const double gain = report.candidate_value - raw_utility(game, ch, user, deviation);
      report.worst_jammer_gain = std::max(report.worst_jammer_gain, gain);
      ++report.jammer_probes;
      if (gain > tolerance) report.violations.push_back({"jammer", probe_seed, gain});
    }
  }
  return report;
}

}  // namespace dpcjam
