#pragma once

// Executable checks for each step of the saddle-point argument. Every check
// returns a ClaimReport; a check passes iff its worst slack is >= -tolerance.
// Randomized sweeps draw per-trial generators from (claim id, seed, trial).

#include "dpcjam/game.hpp"
#include "dpcjam/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpcjam {

struct ClaimReport {
  std::string claim_id;
  int trials = 0;
  double worst_slack = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::optional<std::string> counterexample;  // key=value;... of the worst failing trial
  std::vector<std::pair<std::string, double>> details;

  ReportBlock to_block() const;
};

/// Folds per-trial slacks into a ClaimReport, keeping the worst counterexample.
class ClaimAccumulator {
 public:
  ClaimAccumulator(std::string claim_id, double tolerance);
  void record(double slack, const std::string& inputs);
  void detail(std::string key, double value);
  ClaimReport finish() const;

 private:
  ClaimReport report_;
  bool any_ = false;
};

/// Serializes channel parameters and strategies as "key=value;..." text.
std::string describe(const ChannelParams& ch);
std::string describe(const UserStrategy& user);
std::string describe(const JammerStrategy& jammer);

/// costa_utility <= si_utility + 1e-9 for one pair.
ClaimReport check_costa_le_si(const ChannelParams& ch, const UserStrategy& user,
                              const JammerStrategy& jammer);
/// Random feasible pairs spread over the block lengths in `ns`.
ClaimReport sweep_costa_le_si(const ChannelParams& ch, const std::vector<int>& ns, int trials,
                              std::uint64_t seed);

/// Utility unchanged by the jammer mean (both games, i.i.d. Gaussian user) and
/// the de-meaned jammer gains |mu|^2/n of per-symbol power slack.
ClaimReport check_zero_mean_invariance(const ChannelParams& ch, const JammerStrategy& jammer);
ClaimReport sweep_zero_mean_invariance(const ChannelParams& ch, int trials, std::uint64_t seed);

/// SI game, i.i.d. Gaussian user: utility(jammer) >= utility(jammer with
/// Lambda_R replaced by its diagonal) - 1e-9.
ClaimReport check_memoryless_dominance(const ChannelParams& ch, const JammerStrategy& jammer);
/// Random correlated jammers at block length n (n >= 2).
ClaimReport check_memoryless_dominance(const ChannelParams& ch, int n, std::uint64_t seed,
                                       int trials = 500);

/// Lambda_W of the DPC user (alpha = P_U/(P_U+P_J+sigma2)),
/// (1-alpha)^2 Lambda_X + alpha^2 Lambda_J + alpha^2 Lambda_Z, satisfies
/// |Lambda_W| <= ((1-alpha)^2 P_U + alpha^2 P_J + alpha^2 sigma2)^n (relative 1e-9).
/// Also confirms the formula against the assembled W block.
ClaimReport check_det_bound(const ChannelParams& ch, const JammerStrategy& jammer);
ClaimReport sweep_det_bound(const ChannelParams& ch, int n, int trials, std::uint64_t seed);

/// det(L) <= prod L_ii on random PSD matrices of dimension 1..max_dim.
ClaimReport check_hadamard(int max_dim, int trials, std::uint64_t seed);

/// Cross-covariance of W' = (1-alpha)X - alpha J' - alpha Z with Y' under the
/// DPC user and white jamming; max |entry| < 1e-12. alpha_offset perturbs
/// alpha for negative controls.
ClaimReport check_wprime_indep_yprime(const ChannelParams& ch, double alpha_offset = 0.0);

/// Exhaustive grid over feasible (beta, sigmaR2) at resolution grid_res against
/// the game's canonical user; the minimum must sit within one cell of (0, P_J).
ClaimReport check_beta_zero_optimal(const ChannelParams& ch, GameKind game,
                                    double grid_res = 1e-3);

}  // namespace dpcjam
