#pragma once

// Jointly Gaussian strategy families for the user and the jammer, their
// power constraints, and assembly of the channel's joint covariance.
//
// Sources: S ~ N(0, sigmaS2 I), G ~ N(0, Lambda_G), R ~ N(0, Lambda_R),
// Z ~ N(0, sigma2 I), mutually independent. Then
//   X = A_u S + G,  J = B_j S + R + mu,  Y = X + S + J + Z,
//   U = X + alpha S,  W = U - alpha Y = (I - alpha) X - alpha J - alpha Z.
//
// Power constraints are per block and in expectation:
//   trace(A_u sigmaS2 A_u^T + Lambda_G) <= n P_U,
//   trace(B_j sigmaS2 B_j^T + Lambda_R) + |mu|^2 <= n P_J.

#include "dpcjam/gauss.hpp"

#include <cstdint>

namespace dpcjam {

struct ChannelParams {
  int n = 1;            // block length
  double sigma2 = 1.0;  // channel noise variance, > 0
  double sigmaS2 = 1.0; // per-symbol state variance, >= 0
  double P_U = 1.0;     // per-symbol user power, > 0
  double P_J = 1.0;     // per-symbol jammer power, >= 0
  LogBase base = LogBase::Bits;

  /// Throws InvalidArgument on non-finite values or sign violations.
  void validate() const;
  double state_power() const { return n * sigmaS2; }
};

struct UserStrategy {
  Matrix state_coupling;  // A_u
  Matrix innovation_cov;  // Lambda_G, covariance of X given S
  Matrix dpc_alpha;       // alpha in U = X + alpha S

  double power(const ChannelParams& ch) const;
};

struct JammerStrategy {
  Matrix state_coupling;  // B_j
  Matrix innovation_cov;  // Lambda_R
  Vector mean;            // mu

  double power(const ChannelParams& ch) const;
};

struct FeasibilityReport {
  bool feasible = false;
  bool well_formed = false;  // shapes conform and the innovation covariance is PSD
  double power = 0.0;        // block power (trace form)
  double budget = 0.0;       // n * P
  double slack = 0.0;        // per-symbol (budget - power) / n
};

inline constexpr double kPowerTolerance = 1e-9;

FeasibilityReport feasible(const UserStrategy& user, const ChannelParams& ch);
FeasibilityReport feasible(const JammerStrategy& jammer, const ChannelParams& ch);

/// alpha = P_U / (P_U + P_J + sigma2).
double dpc_coefficient(const ChannelParams& ch);

/// i.i.d. N(0, P_U) input independent of the state, U = X + alpha S.
UserStrategy dpc_user(const ChannelParams& ch);
UserStrategy dpc_user(const ChannelParams& ch, double alpha);

/// i.i.d. N(0, P_J) jamming independent of the state.
JammerStrategy iid_gaussian_jammer(const ChannelParams& ch);

/// Largest sigmaR2 with beta^2 sigmaS2 + sigmaR2 <= P_J (may be negative).
double max_innovation_power(const ChannelParams& ch, double beta);

/// J_i = beta S_i + R_i with R_i ~ N(0, sigmaR2). Throws InfeasiblePower
/// when beta^2 sigmaS2 + sigmaR2 > P_J, InvalidArgument when sigmaR2 < 0.
JammerStrategy linear_jammer(const ChannelParams& ch, double beta, double sigmaR2);

/// Average fraction of the power budget used by the random generators:
/// half the draws sit on the boundary, half at a uniform fraction inside.
inline constexpr double kRandomPowerFraction = 0.75;

/// Random feasible strategies for probing. Deterministic in seed.
UserStrategy random_feasible_user(const ChannelParams& ch, std::uint64_t seed);
JammerStrategy random_feasible_jammer(const ChannelParams& ch, std::uint64_t seed);

/// Joint covariance over (X, S, J, Z, U, Y, W) with J, Y, W means set from mu.
/// Validates shapes and PSD innovations; does not check power.
JointCovariance assemble_joint(const ChannelParams& ch, const UserStrategy& user,
                               const JammerStrategy& jammer);

namespace detail {
/// assemble_joint without the PSD checks, for finite-difference probes that
/// step slightly outside the cone.
JointCovariance assemble_joint_unchecked(const ChannelParams& ch, const UserStrategy& user,
                                         const JammerStrategy& jammer);
}  // namespace detail

}  // namespace dpcjam
