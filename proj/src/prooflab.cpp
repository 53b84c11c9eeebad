#include "dpcjam/prooflab.hpp"

#include "dpcjam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpcjam {

namespace {

using C = Component;

std::string matrix_text(const Matrix& m) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) os << ';';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_number(m(i, j));
    }
  }
  os << ']';
  return os.str();
}

ChannelParams with_block_length(ChannelParams ch, int n) {
  ch.n = n;
  return ch;
}

double log_det_or_minus_inf(const Matrix& m) {
  const auto ld = linalg::log_det_cholesky(m);
  return ld ? *ld : -std::numeric_limits<double>::infinity();
}

}  // namespace

ReportBlock ClaimReport::to_block() const {
  ReportBlock block;
  block.add("claim", claim_id)
      .add("trials", trials)
      .add("worst_slack", worst_slack)
      .add("tolerance", tolerance)
      .add("passed", passed);
  for (const auto& [key, value] : details) block.add(key, value);
  if (counterexample) block.add("counterexample", *counterexample);
  return block;
}

ClaimAccumulator::ClaimAccumulator(std::string claim_id, double tolerance) {
  report_.claim_id = std::move(claim_id);
  report_.tolerance = tolerance;
  report_.worst_slack = std::numeric_limits<double>::infinity();
}

void ClaimAccumulator::record(double slack, const std::string& inputs) {
  ++report_.trials;
  any_ = true;
  if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
  if (slack < report_.worst_slack) {
    report_.worst_slack = slack;
    if (slack < -report_.tolerance) report_.counterexample = inputs;
  }
}

void ClaimAccumulator::detail(std::string key, double value) {
  report_.details.emplace_back(std::move(key), value);
}

ClaimReport ClaimAccumulator::finish() const {
  ClaimReport out = report_;
  if (!any_) out.worst_slack = 0.0;
  out.passed = out.worst_slack >= -out.tolerance;
  if (out.passed) out.counterexample.reset();
  return out;
}

std::string describe(const ChannelParams& ch) {
  std::ostringstream os;
  os << "n=" << ch.n << ";sigma2=" << format_number(ch.sigma2)
     << ";sigmaS2=" << format_number(ch.sigmaS2) << ";P_U=" << format_number(ch.P_U)
     << ";P_J=" << format_number(ch.P_J) << ";base=" << to_string(ch.base);
  return os.str();
}

std::string describe(const UserStrategy& user) {
  return "A_u=" + matrix_text(user.state_coupling) + ";Lambda_G=" +
         matrix_text(user.innovation_cov) + ";alpha=" + matrix_text(user.dpc_alpha);
}

std::string describe(const JammerStrategy& jammer) {
  return "B_j=" + matrix_text(jammer.state_coupling) + ";Lambda_R=" +
         matrix_text(jammer.innovation_cov) + ";mu=" + matrix_text(jammer.mean.transpose());
}

ClaimReport check_costa_le_si(const ChannelParams& ch, const UserStrategy& user,
                              const JammerStrategy& jammer) {
  ClaimAccumulator acc("costa_le_si", 1e-9);
  const double costa = costa_utility(ch, user, jammer);
  const double si = si_utility(ch, user, jammer);
  acc.record(si - costa, describe(ch) + ";" + describe(user) + ";" + describe(jammer));
  acc.detail("costa_utility", costa);
  acc.detail("si_utility", si);
  return acc.finish();
}

ClaimReport sweep_costa_le_si(const ChannelParams& ch, const std::vector<int>& ns, int trials,
                              std::uint64_t seed) {
  ClaimAccumulator acc("costa_le_si", 1e-9);
  if (ns.empty()) throw InvalidArgument("sweep_costa_le_si: no block lengths");
  for (int t = 0; t < trials; ++t) {
    const auto trial_ch = with_block_length(ch, ns[static_cast<std::size_t>(t) % ns.size()]);
    const auto trial_seed = derive_seed("costa_le_si", seed, static_cast<std::uint64_t>(t));
    const auto user = random_feasible_user(trial_ch, trial_seed);
    const auto jammer = random_feasible_jammer(trial_ch, trial_seed);
    const double costa = detail::utility_unchecked(GameKind::Costa, trial_ch, user, jammer);
    const double si = detail::utility_unchecked(GameKind::SideInformation, trial_ch, user, jammer);
    acc.record(si - costa, describe(trial_ch) + ";seed=" + std::to_string(trial_seed));
  }
  return acc.finish();
}

ClaimReport check_zero_mean_invariance(const ChannelParams& ch, const JammerStrategy& jammer) {
  ClaimAccumulator acc("zero_mean_invariance", 1e-12);
  JammerStrategy centered = jammer;
  centered.mean.setZero();
  const auto user = dpc_user(ch);
  const std::string inputs = describe(ch) + ";" + describe(jammer);
  for (GameKind game : {GameKind::Costa, GameKind::SideInformation}) {
    const double shifted = utility(game, ch, user, jammer);
    const double zero_mean = utility(game, ch, user, centered);
    acc.record(1e-12 - std::abs(shifted - zero_mean), inputs);
  }
  const auto original = feasible(jammer, ch);
  const auto demeaned = feasible(centered, ch);
  const double mean_power = jammer.mean.squaredNorm() / ch.n;
  acc.record(demeaned.slack - mean_power + 1e-12 * std::max(1.0, ch.P_J), inputs);
  acc.detail("demeaned_slack", demeaned.slack);
  acc.detail("original_slack", original.slack);
  return acc.finish();
}

ClaimReport sweep_zero_mean_invariance(const ChannelParams& ch, int trials, std::uint64_t seed) {
  ClaimAccumulator acc("zero_mean_invariance", 1e-12);
  for (int t = 0; t < trials; ++t) {
    const auto trial_seed = derive_seed("zero_mean_invariance", seed, static_cast<std::uint64_t>(t));
    auto jammer = random_feasible_jammer(ch, trial_seed);
    Rng rng(trial_seed);
    const double leftover = std::max(0.0, ch.n * ch.P_J - jammer.power(ch));
    Vector direction(ch.n);
    for (int i = 0; i < ch.n; ++i) direction(i) = rng.normal();
    if (leftover > 0.0 && direction.norm() > 0.0) {
      jammer.mean = direction.normalized() * std::sqrt(rng.uniform() * leftover);
    }
    const auto r = check_zero_mean_invariance(ch, jammer);
    acc.record(r.worst_slack, describe(ch) + ";seed=" + std::to_string(trial_seed));
  }
  return acc.finish();
}

ClaimReport check_memoryless_dominance(const ChannelParams& ch, const JammerStrategy& jammer) {
  ClaimAccumulator acc("memoryless_dominance", 1e-9);
  JammerStrategy memoryless = jammer;
  memoryless.innovation_cov = Matrix(jammer.innovation_cov.diagonal().asDiagonal());
  const auto user = dpc_user(ch);
  const double correlated = si_utility(ch, user, jammer);
  const double diagonal = si_utility(ch, user, memoryless);
  acc.record(correlated - diagonal, describe(ch) + ";" + describe(jammer));
  acc.detail("correlated_utility", correlated);
  acc.detail("memoryless_utility", diagonal);
  return acc.finish();
}

ClaimReport check_memoryless_dominance(const ChannelParams& ch, int n, std::uint64_t seed,
                                       int trials) {
  if (n < 2) throw InvalidArgument("check_memoryless_dominance: n must be >= 2");
  ClaimAccumulator acc("memoryless_dominance", 1e-9);
  const auto trial_ch = with_block_length(ch, n);
  const auto user = dpc_user(trial_ch);
  for (int t = 0; t < trials; ++t) {
    const auto trial_seed = derive_seed("memoryless_dominance", seed, static_cast<std::uint64_t>(t));
    const auto jammer = random_feasible_jammer(trial_ch, trial_seed);
    JammerStrategy memoryless = jammer;
    memoryless.innovation_cov = Matrix(jammer.innovation_cov.diagonal().asDiagonal());
    const double correlated =
        detail::utility_unchecked(GameKind::SideInformation, trial_ch, user, jammer);
    const double diagonal =
        detail::utility_unchecked(GameKind::SideInformation, trial_ch, user, memoryless);
    acc.record(correlated - diagonal, describe(trial_ch) + ";seed=" + std::to_string(trial_seed));
  }
  return acc.finish();
}

ClaimReport check_det_bound(const ChannelParams& ch, const JammerStrategy& jammer) {
  ClaimAccumulator acc("det_bound", 1e-9);
  const double alpha = dpc_coefficient(ch);
  const auto joint = assemble_joint(ch, dpc_user(ch), jammer);
  const Matrix lambda_w = joint.block(C::W, C::W);
  const Matrix formula = (1.0 - alpha) * (1.0 - alpha) * joint.block(C::X, C::X) +
                         alpha * alpha * joint.block(C::J, C::J) +
                         alpha * alpha * joint.block(C::Z, C::Z);
  const double scale = std::max(1.0, lambda_w.cwiseAbs().maxCoeff());
  const double mismatch = (lambda_w - formula).cwiseAbs().maxCoeff() / scale;
  const std::string inputs = describe(ch) + ";" + describe(jammer);
  acc.record(1e-9 - mismatch, inputs);

  const int n = ch.n;
  const double per_symbol = (1.0 - alpha) * (1.0 - alpha) * ch.P_U + alpha * alpha * ch.P_J +
                            alpha * alpha * ch.sigma2;
  const double log_det = log_det_or_minus_inf(lambda_w);
  const Vector diag = lambda_w.diagonal();
  const double log_hadamard = diag.array().log().sum();
  const double log_am = n * std::log(diag.mean());
  const double log_bound = n * std::log(per_symbol);
  // Each link of the chain |W| <= prod diag <= (mean diag)^n <= bound^n.
  const double rel = 1e-9 * std::max(1.0, std::abs(log_bound));
  acc.record(log_hadamard - log_det + rel - 1e-9, inputs);
  acc.record(log_am - log_hadamard + rel - 1e-9, inputs);
  acc.record(log_bound - log_am + rel - 1e-9, inputs);
  acc.detail("log_det_w", log_det);
  acc.detail("log_bound", log_bound);
  acc.detail("formula_mismatch", mismatch);
  return acc.finish();
}

ClaimReport sweep_det_bound(const ChannelParams& ch, int n, int trials, std::uint64_t seed) {
  ClaimAccumulator acc("det_bound", 1e-9);
  const auto trial_ch = with_block_length(ch, n);
  for (int t = 0; t < trials; ++t) {
    const auto trial_seed = derive_seed("det_bound", seed, static_cast<std::uint64_t>(t));
    const auto r = check_det_bound(trial_ch, random_feasible_jammer(trial_ch, trial_seed));
    acc.record(r.worst_slack, describe(trial_ch) + ";seed=" + std::to_string(trial_seed));
  }
  return acc.finish();
}

ClaimReport check_hadamard(int max_dim, int trials, std::uint64_t seed) {
  ClaimAccumulator acc("hadamard", 1e-9);
  for (int t = 0; t < trials; ++t) {
    const auto trial_seed = derive_seed("hadamard", seed, static_cast<std::uint64_t>(t));
    Rng rng(trial_seed);
    const int dim = 1 + t % std::max(1, max_dim);
    const int dof = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(dim + 3));
    Matrix m(dim, dof);
    for (int j = 0; j < dof; ++j) {
      for (int i = 0; i < dim; ++i) m(i, j) = rng.normal();
    }
    const Matrix psd = m * m.transpose() + 1e-3 * Matrix::Identity(dim, dim);
    const double log_det = log_det_or_minus_inf(psd);
    const double log_diag = psd.diagonal().array().log().sum();
    acc.record((log_diag - log_det) + 1e-9 * std::max(1.0, std::abs(log_diag)) - 1e-9,
               "dim=" + std::to_string(dim) + ";seed=" + std::to_string(trial_seed));
  }
  return acc.finish();
}

ClaimReport check_wprime_indep_yprime(const ChannelParams& ch, double alpha_offset) {
  ClaimAccumulator acc("wprime_indep_yprime", 0.0);
  const double alpha = dpc_coefficient(ch) + alpha_offset;
  const auto joint = assemble_joint(ch, dpc_user(ch, alpha), iid_gaussian_jammer(ch));
  const double cross = joint.block(C::W, C::Y).cwiseAbs().maxCoeff();
  acc.record(1e-12 - cross, describe(ch) + ";alpha=" + format_number(alpha));
  acc.detail("max_cross_covariance", cross);
  acc.detail("alpha", alpha);
  return acc.finish();
}

ClaimReport check_beta_zero_optimal(const ChannelParams& ch, GameKind game, double grid_res) {
  ch.validate();
  if (!(grid_res > 0.0)) throw InvalidArgument("check_beta_zero_optimal: grid_res must be > 0");
  ClaimAccumulator acc(game == GameKind::Costa ? "beta_zero_optimal_costa" : "beta_zero_optimal_si",
                       1e-12);
  const int n = ch.n;
  const Matrix I = Matrix::Identity(n, n);
  const auto user = dpc_user(ch);
  auto value = [&](double beta, double sigmaR2) {
    return detail::utility_unchecked(game, ch, user,
                                     JammerStrategy{beta * I, sigmaR2 * I, Vector::Zero(n)});
  };

  const double beta_max = ch.sigmaS2 > 0.0 ? std::sqrt(ch.P_J / ch.sigmaS2) : 0.0;
  const auto k_max = static_cast<long>(std::floor(beta_max / grid_res + 1e-9));
  double best = std::numeric_limits<double>::infinity();
  double best_beta = 0.0;
  double best_r = 0.0;
  long points = 0;
  auto consider = [&](double beta, double r) {
    const double v = value(beta, r);
    ++points;
    // Ties resolve toward the smaller |beta| and the larger sigmaR2.
    if (v < best - 1e-15 ||
        (v <= best + 1e-15 && (std::abs(beta) < std::abs(best_beta) ||
                               (std::abs(beta) == std::abs(best_beta) && r > best_r)))) {
      best = v;
      best_beta = beta;
      best_r = r;
    }
  };
  for (long k = -k_max; k <= k_max; ++k) {
    const double beta = static_cast<double>(k) * grid_res;
    const double r_max = std::max(0.0, max_innovation_power(ch, beta));
    const auto m_max = static_cast<long>(std::floor(r_max / grid_res + 1e-9));
    for (long m = 0; m <= m_max; ++m) consider(beta, static_cast<double>(m) * grid_res);
    if (r_max - static_cast<double>(m_max) * grid_res > 1e-12) consider(beta, r_max);
  }

  const double distance = std::max(std::abs(best_beta), std::abs(best_r - ch.P_J));
  acc.record(grid_res - distance, describe(ch) + ";game=" + std::string(to_string(game)) +
                                      ";argmin_beta=" + format_number(best_beta) +
                                      ";argmin_sigmaR2=" + format_number(best_r));
  acc.detail("grid_points", static_cast<double>(points));
  acc.detail("argmin_beta", best_beta);
  acc.detail("argmin_sigmaR2", best_r);
  acc.detail("min_utility", best);
  acc.detail("utility_at_white", value(0.0, ch.P_J));
  return acc.finish();
}

}  // namespace dpcjam
