#include "dpcjam/strategies.hpp"

#include "dpcjam/rng.hpp"

#include <cmath>
#include <string>

namespace dpcjam {

namespace {

bool square(const Matrix& m, int n) { return m.rows() == n && m.cols() == n; }

Matrix random_gaussian(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

// Wishart-like draw with n + 2 degrees of freedom; full rank almost surely.
Matrix random_psd(Rng& rng, int n) {
  const Matrix m = random_gaussian(rng, n, n + 2);
  return linalg::symmetrize(m * m.transpose() / static_cast<double>(n + 2));
}

double random_power_target(Rng& rng, double budget) {
  if (rng.uniform() < 0.5) return budget;
  return budget * (rng.uniform() + 0x1.0p-54);
}

void check_shapes(const ChannelParams& ch, const UserStrategy& user,
                  const JammerStrategy& jammer) {
  const int n = ch.n;
  if (!square(user.state_coupling, n) || !square(user.innovation_cov, n) ||
      !square(user.dpc_alpha, n)) {
    throw InvalidArgument("user strategy matrices must be " + std::to_string(n) + "x" +
                          std::to_string(n));
  }
  if (!square(jammer.state_coupling, n) || !square(jammer.innovation_cov, n) ||
      jammer.mean.size() != n) {
    throw InvalidArgument("jammer strategy shapes do not match block length");
  }
}

}  // namespace

void ChannelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (n < 1) throw InvalidArgument("block length n must be positive");
  if (!finite(sigma2) || sigma2 <= 0.0) throw InvalidArgument("sigma2 must be finite and > 0");
  if (!finite(sigmaS2) || sigmaS2 < 0.0) throw InvalidArgument("sigmaS2 must be finite and >= 0");
  if (!finite(P_U) || P_U <= 0.0) throw InvalidArgument("P_U must be finite and > 0");
  if (!finite(P_J) || P_J < 0.0) throw InvalidArgument("P_J must be finite and >= 0");
}

double UserStrategy::power(const ChannelParams& ch) const {
  return ch.sigmaS2 * state_coupling.squaredNorm() + innovation_cov.trace();
}

double JammerStrategy::power(const ChannelParams& ch) const {
  return ch.sigmaS2 * state_coupling.squaredNorm() + innovation_cov.trace() + mean.squaredNorm();
}

FeasibilityReport feasible(const UserStrategy& user, const ChannelParams& ch) {
  FeasibilityReport r;
  r.budget = ch.n * ch.P_U;
  r.well_formed = square(user.state_coupling, ch.n) && square(user.innovation_cov, ch.n) &&
                  square(user.dpc_alpha, ch.n) && linalg::is_symmetric(user.innovation_cov) &&
                  linalg::is_psd(user.innovation_cov);
  if (!r.well_formed) return r;
  r.power = user.power(ch);
  r.slack = (r.budget - r.power) / ch.n;
  r.feasible = r.power <= r.budget + kPowerTolerance;
  return r;
}

FeasibilityReport feasible(const JammerStrategy& jammer, const ChannelParams& ch) {
  FeasibilityReport r;
  r.budget = ch.n * ch.P_J;
  r.well_formed = square(jammer.state_coupling, ch.n) && square(jammer.innovation_cov, ch.n) &&
                  jammer.mean.size() == ch.n && linalg::is_symmetric(jammer.innovation_cov) &&
                  linalg::is_psd(jammer.innovation_cov);
  if (!r.well_formed) return r;
  r.power = jammer.power(ch);
  r.slack = (r.budget - r.power) / ch.n;
  r.feasible = r.power <= r.budget + kPowerTolerance;
  return r;
}

double dpc_coefficient(const ChannelParams& ch) { return ch.P_U / (ch.P_U + ch.P_J + ch.sigma2); }

UserStrategy dpc_user(const ChannelParams& ch) { return dpc_user(ch, dpc_coefficient(ch)); }

UserStrategy dpc_user(const ChannelParams& ch, double alpha) {
  ch.validate();
  const int n = ch.n;
  return {Matrix::Zero(n, n), ch.P_U * Matrix::Identity(n, n), alpha * Matrix::Identity(n, n)};
}

JammerStrategy iid_gaussian_jammer(const ChannelParams& ch) {
  ch.validate();
  const int n = ch.n;
  return {Matrix::Zero(n, n), ch.P_J * Matrix::Identity(n, n), Vector::Zero(n)};
}

double max_innovation_power(const ChannelParams& ch, double beta) {
  return ch.P_J - beta * beta * ch.sigmaS2;
}

JammerStrategy linear_jammer(const ChannelParams& ch, double beta, double sigmaR2) {
  ch.validate();
  if (!std::isfinite(beta) || !std::isfinite(sigmaR2) || sigmaR2 < 0.0) {
    throw InvalidArgument("linear_jammer: sigmaR2 must be finite and >= 0");
  }
  const double used = beta * beta * ch.sigmaS2 + sigmaR2;
  if (used > ch.P_J + kPowerTolerance) {
    throw InfeasiblePower("linear_jammer: beta^2 sigmaS2 + sigmaR2 = " + std::to_string(used) +
                          " exceeds P_J = " + std::to_string(ch.P_J));
  }
  const int n = ch.n;
  return {beta * Matrix::Identity(n, n), sigmaR2 * Matrix::Identity(n, n), Vector::Zero(n)};
}

UserStrategy random_feasible_user(const ChannelParams& ch, std::uint64_t seed) {
  ch.validate();
  const int n = ch.n;
  Rng rng(derive_seed("random_feasible_user", seed, 0));
  Matrix coupling = 0.5 * random_gaussian(rng, n, n);
  Matrix innovation = random_psd(rng, n);
  Matrix alpha = rng.uniform(-0.5, 1.5) * Matrix::Identity(n, n) + 0.2 * random_gaussian(rng, n, n);
  const double target = random_power_target(rng, n * ch.P_U);
  const double drawn = ch.sigmaS2 * coupling.squaredNorm() + innovation.trace();
  const double scale = target / drawn;
  coupling *= std::sqrt(scale);
  innovation *= scale;
  return {std::move(coupling), std::move(innovation), std::move(alpha)};
}

JammerStrategy random_feasible_jammer(const ChannelParams& ch, std::uint64_t seed) {
  ch.validate();
  const int n = ch.n;
  if (ch.P_J == 0.0) return iid_gaussian_jammer(ch);
  Rng rng(derive_seed("random_feasible_jammer", seed, 0));
  Matrix coupling = 0.5 * random_gaussian(rng, n, n);
  Matrix innovation = random_psd(rng, n);
  const double target = random_power_target(rng, n * ch.P_J);
  const double drawn = ch.sigmaS2 * coupling.squaredNorm() + innovation.trace();
  const double scale = target / drawn;
  coupling *= std::sqrt(scale);
  innovation *= scale;
  return {std::move(coupling), std::move(innovation), Vector::Zero(n)};
}

namespace detail {

JointCovariance assemble_joint_unchecked(const ChannelParams& ch, const UserStrategy& user,
                                         const JammerStrategy& jammer) {
  check_shapes(ch, user, jammer);
  const int n = ch.n;
  const Matrix I = Matrix::Identity(n, n);
  const Matrix O = Matrix::Zero(n, n);
  const Matrix& A = user.state_coupling;
  const Matrix& alpha = user.dpc_alpha;
  const Matrix& B = jammer.state_coupling;

  // Rows: X, S, J, Z, U, Y, W. Columns: sources S, G, R, Z.
  Matrix L(7 * n, 4 * n);
  const Matrix y_state = A + I + B;
  L << A, I, O, O,
       I, O, O, O,
       B, O, I, O,
       O, O, O, I,
       A + alpha, I, O, O,
       y_state, I, I, I,
       A + alpha - alpha * y_state, I - alpha, -alpha, -alpha;

  Matrix D = Matrix::Zero(4 * n, 4 * n);
  D.block(0, 0, n, n) = ch.sigmaS2 * I;
  D.block(n, n, n, n) = user.innovation_cov;
  D.block(2 * n, 2 * n, n, n) = jammer.innovation_cov;
  D.block(3 * n, 3 * n, n, n) = ch.sigma2 * I;

  using C = Component;
  auto joint = JointCovariance::trusted(n, {C::X, C::S, C::J, C::Z, C::U, C::Y, C::W},
                                        linalg::symmetrize(L * D * L.transpose()));
  if (jammer.mean.size() == n && jammer.mean.squaredNorm() > 0.0) {
    joint.set_mean(C::J, jammer.mean);
    joint.set_mean(C::Y, jammer.mean);
    joint.set_mean(C::W, -alpha * jammer.mean);
  }
  return joint;
}

}  // namespace detail

JointCovariance assemble_joint(const ChannelParams& ch, const UserStrategy& user,
                               const JammerStrategy& jammer) {
  ch.validate();
  check_shapes(ch, user, jammer);
  if (!linalg::is_symmetric(user.innovation_cov) || !linalg::is_psd(user.innovation_cov)) {
    throw InvalidCovariance("user innovation covariance is not symmetric PSD");
  }
  if (!linalg::is_symmetric(jammer.innovation_cov) || !linalg::is_psd(jammer.innovation_cov)) {
    throw InvalidCovariance("jammer innovation covariance is not symmetric PSD");
  }
  return detail::assemble_joint_unchecked(ch, user, jammer);
}

}  // namespace dpcjam
