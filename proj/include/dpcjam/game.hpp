#pragma once

// Zero-sum mutual-information games between a power-limited user and a
// power-limited jammer who both know the channel state non-causally.
//
//   Costa game: utility (1/n) [I(U;Y) - I(U;S)], decoder blind to S.
//   SI game:    utility (1/n) I(X;Y|S), decoder also sees S.
//
// Best responses search parametrized Gaussian families:
//   user, Costa: A_u = 0, Lambda_G = P_U I, scalar alpha
//   user, SI:    A_u = 0, Lambda_G PSD with trace <= n P_U
//   jammer:      B_j = beta I, Lambda_R PSD with trace <= n (P_J - beta^2 sigmaS2)

#include "dpcjam/optimize.hpp"
#include "dpcjam/strategies.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpcjam {

enum class GameKind { Costa, SideInformation };

std::string_view to_string(GameKind game);
std::optional<GameKind> parse_game_kind(std::string_view text);

/// Throw InfeasiblePower when either strategy exceeds its budget.
double costa_utility(const ChannelParams& ch, const UserStrategy& user,
                     const JammerStrategy& jammer);
double si_utility(const ChannelParams& ch, const UserStrategy& user,
                  const JammerStrategy& jammer);
double utility(GameKind game, const ChannelParams& ch, const UserStrategy& user,
               const JammerStrategy& jammer);

/// 1/2 log(1 + P_U / sigma2); ignores P_J.
double capacity_costa(const ChannelParams& ch);
/// 1/2 log(1 + P_U / (sigma2 + P_J)).
double capacity_costa_jammer(const ChannelParams& ch);
/// 1/2 log(1 + P_U / (P_J + sigma2)).
double capacity_si_jammer(const ChannelParams& ch);
double capacity(GameKind game, const ChannelParams& ch);

struct ResponseOptions {
  int grid_points = 41;     // coarse grid before golden section
  double param_tol = 1e-8;  // golden-section interval width
  opt::PsdOptions psd{};
};

struct JammerResponse {
  JammerStrategy strategy;
  double utility = 0.0;
  double beta = 0.0;
  bool converged = true;  // every inner PSD solve stopped before max_iterations
  bool certified = true;  // final value no worse than the coarse-grid minimum
  bool flat = false;      // beta does not matter (sigmaS2 == 0)
};

struct UserResponse {
  UserStrategy strategy;
  double utility = 0.0;
  double alpha = 0.0;
  bool converged = true;
  bool flat = false;  // alpha does not matter; canonical alpha returned
};

JammerResponse best_response_jammer(const ChannelParams& ch, const UserStrategy& user,
                                    GameKind game, const ResponseOptions& options = {});
UserResponse best_response_user(const ChannelParams& ch, const JammerStrategy& jammer,
                                GameKind game, const ResponseOptions& options = {});

/// Random members of the best-response families, used as saddle-search starts.
UserStrategy random_family_user(const ChannelParams& ch, GameKind game, std::uint64_t seed);
JammerStrategy random_family_jammer(const ChannelParams& ch, std::uint64_t seed);

struct TraceRow {
  int round = 0;
  double utility_after_user = 0.0;
  double utility_after_jammer = 0.0;
  double beta = 0.0;   // mean diagonal of the jammer's state coupling
  double alpha = 0.0;  // mean diagonal of the user's alpha
  double gap = 0.0;    // utility_after_user - utility_after_jammer
};

struct StartOutcome {
  std::string label;  // "canonical" or "random-<k>"
  UserStrategy user;
  JammerStrategy jammer;
  double value = 0.0;
  double duality_gap = 0.0;
  int rounds = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

struct ProbeViolation {
  std::string side;  // "user" or "jammer"
  std::uint64_t seed = 0;
  double improvement = 0.0;
};

struct SaddleOptions {
  int max_rounds = 500;
  double tol = 1e-9;        // on the best-response gap
  int random_starts = 8;
  std::uint64_t seed = 42;
  double relaxation = 0.2;  // largest fraction moved toward each best response
  int probes = 0;           // random deviations checked at the end (0 = skip)
  ResponseOptions response{};
};

struct EquilibriumReport {
  GameKind game = GameKind::Costa;
  double value = 0.0;        // bits/symbol (or nats) at the canonical start's end point
  double closed_form = 0.0;  // capacity(game, ch)
  UserStrategy user;
  JammerStrategy jammer;
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;    // every start converged
  bool flat = false;
  std::vector<TraceRow> trace;
  std::vector<StartOutcome> starts;  // starts[0] is the canonical start
  std::vector<ProbeViolation> probe_violations;
};

/// Damped alternating best responses from the canonical pair and from
/// `random_starts` seeded family members. Each round moves the user, then the
/// jammer, part of the way toward its best response; a move is shortened until
/// it does not hurt the mover. The step starts at `relaxation`, halves when the
/// best-response gap f(BR_u(j), j) - f(u, BR_j(u)) grows and regrows by 1.25
/// otherwise. Converged when that gap and the half-round difference are both
/// below tol.
EquilibriumReport solve_saddle(const ChannelParams& ch, GameKind game,
                               const SaddleOptions& options = {});

/// Throws NonConvergence (message includes the tail of the trace) when the
/// report did not converge.
void require_converged(const EquilibriumReport& report);

struct ProbeReport {
  int user_probes = 0;
  int jammer_probes = 0;
  double candidate_value = 0.0;
  double worst_user_gain = 0.0;    // max_u f(u, j*) - f(u*, j*)
  double worst_jammer_gain = 0.0;  // max_j f(u*, j*) - f(u*, j)
  double tolerance = 1e-6;
  std::vector<ProbeViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// Random feasible deviations on both sides (full random matrices, not just
/// the best-response families). Violations beyond tolerance are reported.
ProbeReport verify_equilibrium(const ChannelParams& ch, const UserStrategy& user,
                               const JammerStrategy& jammer, GameKind game, int n_probes,
                               std::uint64_t seed, double tolerance = 1e-6);

namespace detail {
/// Utility without validation or feasibility checks (grid scans, probes).
double utility_unchecked(GameKind game, const ChannelParams& ch, const UserStrategy& user,
                         const JammerStrategy& jammer);
}  // namespace detail

}  // namespace dpcjam
