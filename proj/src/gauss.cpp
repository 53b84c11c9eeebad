#include "dpcjam/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dpcjam {

namespace {

const double kLogSingular = std::log(kSingularDeterminant);

struct Conditioned {
  Matrix cov;
  double condition = 1.0;
  double ridge = 0.0;
};

void require_disjoint(const ComponentSet& a, const ComponentSet& b, const char* what) {
  for (Component x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      throw InvalidArgument(std::string(what) + ": component " +
                            std::string(to_string(x)) + " appears in two sets");
    }
  }
}

ComponentSet join(const ComponentSet& a, const ComponentSet& b) {
  ComponentSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Conditioned condition_on(const Matrix& tt, const Matrix& tg, const Matrix& gg,
                         Inversion inversion) {
  if (gg.size() == 0) return {linalg::symmetrize(tt), 1.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::symmetrize(gg));
  Vector lambda = es.eigenvalues();
  const double lo = lambda(0);
  const double hi = lambda(lambda.size() - 1);
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();

  Conditioned out;
  out.condition = condition;
  Vector weight = Vector::Zero(lambda.size());
  switch (inversion) {
    case Inversion::Strict:
      if (!(condition <= kMaxCondition)) {
        throw IllConditioned("conditioning block has condition number " +
                             std::to_string(condition));
      }
      weight = lambda.cwiseSqrt().cwiseInverse();
      break;
    case Inversion::Ridge:
      if (!(condition <= kMaxCondition)) {
        out.ridge = kRidgeScale * gg.trace();
        if (!(out.ridge > 0.0)) return {linalg::symmetrize(tt), condition, 0.0};
        lambda.array() += out.ridge;
      }
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > 0.0) weight(i) = 1.0 / std::sqrt(lambda(i));
      }
      break;
    case Inversion::Pseudo: {
      const double cutoff = kPseudoCutoff * std::max(hi, 0.0);
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > cutoff && lambda(i) > 0.0) weight(i) = 1.0 / std::sqrt(lambda(i));
      }
      break;
    }
  }
  const Matrix m = tg * es.eigenvectors() * weight.asDiagonal();
  out.cov = linalg::symmetrize(tt - m * m.transpose());
  return out;
}

Conditioned condition_on(const JointCovariance& joint, const ComponentSet& target,
                         const ComponentSet& given, Inversion inversion) {
  require_disjoint(target, given, "conditional covariance");
  if (given.empty()) return {linalg::symmetrize(joint.covariance(target)), 1.0, 0.0};
  return condition_on(joint.covariance(target), joint.cross(target, given),
                      joint.covariance(given), inversion);
}

std::optional<double> finite_log_det(const Matrix& m) {
  const auto ld = linalg::log_det_cholesky(m);
  if (!ld || *ld < kLogSingular) return std::nullopt;
  return ld;
}

}  // namespace

double from_nats(double nats, LogBase base) {
  return base == LogBase::Bits ? nats / std::numbers::ln2 : nats;
}

std::string_view to_string(LogBase base) { return base == LogBase::Bits ? "bits" : "nats"; }

std::optional<LogBase> parse_log_base(std::string_view text) {
  if (text == "bits" || text == "2") return LogBase::Bits;
  if (text == "nats" || text == "e") return LogBase::Nats;
  return std::nullopt;
}

CovarianceMatrix::CovarianceMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InvalidCovariance("covariance matrix is not square");
  if (m_.rows() == 0) throw InvalidCovariance("covariance matrix is empty");
  if (!m_.allFinite()) throw InvalidCovariance("covariance matrix has non-finite entries");
  if (!linalg::is_symmetric(m_)) throw InvalidCovariance("covariance matrix is not symmetric");
  if (!linalg::is_psd(m_)) {
    throw InvalidCovariance("covariance matrix is not positive semidefinite (min eigenvalue " +
                            std::to_string(linalg::min_eigenvalue(m_)) + ")");
  }
  m_ = linalg::symmetrize(m_);
}

CovarianceMatrix::CovarianceMatrix(Matrix m, TrustedTag) : m_(linalg::symmetrize(m)) {}

CovarianceMatrix CovarianceMatrix::trusted(Matrix m) {
  return CovarianceMatrix(std::move(m), TrustedTag{});
}

double Entropy::checked() const {
  if (singular) throw SingularCovariance("differential entropy of a singular covariance");
  return value;
}

Entropy differential_entropy(const CovarianceMatrix& cov, LogBase base) {
  const auto ld = finite_log_det(cov.matrix());
  if (!ld) return {-std::numeric_limits<double>::infinity(), true};
  const double dim = cov.dim();
  const double nats = 0.5 * (dim * std::log(2.0 * std::numbers::pi * std::numbers::e) + *ld);
  return {from_nats(nats, base), false};
}

std::string_view to_string(Component c) {
  switch (c) {
    case Component::X: return "X";
    case Component::S: return "S";
    case Component::J: return "J";
    case Component::Z: return "Z";
    case Component::U: return "U";
    case Component::Y: return "Y";
    case Component::W: return "W";
  }
  return "?";
}

JointCovariance::JointCovariance(int n, std::vector<Component> layout, Matrix full)
    : JointCovariance(n, std::move(layout), std::move(full), TrustedTag{}) {
  if (!full_.allFinite()) throw InvalidCovariance("joint covariance has non-finite entries");
  if (!linalg::is_symmetric(full_)) throw InvalidCovariance("joint covariance is not symmetric");
  if (!linalg::is_psd(full_)) {
    throw InvalidCovariance("joint covariance is not positive semidefinite");
  }
  full_ = linalg::symmetrize(full_);
}

JointCovariance::JointCovariance(int n, std::vector<Component> layout, Matrix full, TrustedTag)
    : n_(n), layout_(std::move(layout)), full_(std::move(full)) {
  if (n_ <= 0) throw InvalidArgument("block dimension must be positive");
  const auto expected = static_cast<Eigen::Index>(layout_.size()) * n_;
  if (full_.rows() != expected || full_.cols() != expected) {
    throw InvalidArgument("joint covariance shape does not match layout");
  }
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    for (std::size_t j = i + 1; j < layout_.size(); ++j) {
      if (layout_[i] == layout_[j]) throw InvalidArgument("duplicate component in layout");
    }
  }
}

JointCovariance JointCovariance::trusted(int n, std::vector<Component> layout, Matrix full) {
  return JointCovariance(n, std::move(layout), std::move(full), TrustedTag{});
}

bool JointCovariance::contains(Component c) const {
  return std::find(layout_.begin(), layout_.end(), c) != layout_.end();
}

int JointCovariance::offset(Component c) const {
  const auto it = std::find(layout_.begin(), layout_.end(), c);
  if (it == layout_.end()) {
    throw InvalidArgument("component " + std::string(to_string(c)) + " not in joint covariance");
  }
  return static_cast<int>(it - layout_.begin()) * n_;
}

std::vector<int> JointCovariance::indices(const ComponentSet& set) const {
  std::vector<int> idx;
  idx.reserve(set.size() * static_cast<std::size_t>(n_));
  for (Component c : set) {
    const int base = offset(c);
    for (int i = 0; i < n_; ++i) idx.push_back(base + i);
  }
  return idx;
}

Matrix JointCovariance::block(Component a, Component b) const {
  return full_.block(offset(a), offset(b), n_, n_);
}

Matrix JointCovariance::covariance(const ComponentSet& set) const {
  const auto idx = indices(set);
  return full_(idx, idx);
}

Matrix JointCovariance::cross(const ComponentSet& a, const ComponentSet& b) const {
  return full_(indices(a), indices(b));
}

Vector JointCovariance::mean(Component c) const {
  offset(c);
  const auto& m = means_[static_cast<std::size_t>(c)];
  return m ? *m : Vector::Zero(n_);
}

void JointCovariance::set_mean(Component c, Vector mu) {
  offset(c);
  if (mu.size() != n_) throw InvalidArgument("mean vector has wrong length");
  means_[static_cast<std::size_t>(c)] = std::move(mu);
}

JointCovariance::ChannelCheck JointCovariance::check_channel_structure(double tol) const {
  ChannelCheck out;
  const double scale = std::max(1.0, full_.cwiseAbs().maxCoeff());
  using C = Component;
  if (contains(C::X) && contains(C::S) && contains(C::J) && contains(C::Z) && contains(C::Y)) {
    for (Component a : layout_) {
      const Matrix residual =
          block(a, C::Y) - (block(a, C::X) + block(a, C::S) + block(a, C::J) + block(a, C::Z));
      out.worst_linearity = std::max(out.worst_linearity, residual.cwiseAbs().maxCoeff());
    }
    out.linear = out.worst_linearity <= tol * scale;
  }
  if (contains(C::Z)) {
    for (Component a : {C::X, C::S, C::J}) {
      if (!contains(a)) continue;
      out.worst_noise_correlation =
          std::max(out.worst_noise_correlation, block(a, C::Z).cwiseAbs().maxCoeff());
    }
    out.noise_uncorrelated = out.worst_noise_correlation <= tol * scale;
  }
  return out;
}

ConditionalCovariance schur_conditional_cov(const JointCovariance& joint,
                                            const ComponentSet& target,
                                            const ComponentSet& given, Inversion inversion) {
  auto c = condition_on(joint, target, given, inversion);
  return {CovarianceMatrix::trusted(std::move(c.cov)), c.condition, c.ridge};
}

LlseResult llse_error_covariance(const Matrix& tt, const Matrix& tg, const Matrix& gg,
                                 Inversion inversion) {
  if (tt.rows() != tt.cols() || gg.rows() != gg.cols() || tg.rows() != tt.rows() ||
      tg.cols() != gg.rows()) {
    throw InvalidArgument("llse_error_covariance: non-conformable blocks");
  }
  if (gg.size() == 0) {
    return {CovarianceMatrix::trusted(tt), Matrix::Zero(tt.rows(), 0), 1.0, 0.0};
  }
  const Matrix g = linalg::symmetrize(gg);
  const double condition = linalg::condition_number(g);
  double ridge = 0.0;
  Matrix gain;
  switch (inversion) {
    case Inversion::Strict:
    case Inversion::Ridge: {
      Matrix solve_block = g;
      if (!(condition <= kMaxCondition)) {
        if (inversion == Inversion::Strict) {
          throw IllConditioned("LLSE observation covariance has condition number " +
                               std::to_string(condition));
        }
        ridge = kRidgeScale * g.trace();
        if (!(ridge > 0.0)) {
          return {CovarianceMatrix::trusted(tt), Matrix::Zero(tt.rows(), gg.rows()), condition,
                  0.0};
        }
        solve_block.diagonal().array() += ridge;
      }
      gain = solve_block.ldlt().solve(tg.transpose()).transpose();
      break;
    }
    case Inversion::Pseudo: {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(g);
      cod.setThreshold(kPseudoCutoff);
      gain = tg * cod.pseudoInverse();
      break;
    }
  }
  // Joseph form; the ridge (if any) does not enter the true error covariance.
  const Matrix error = tt - gain * tg.transpose() - tg * gain.transpose() +
                       gain * g * gain.transpose();
  return {CovarianceMatrix::trusted(error), std::move(gain), condition, ridge};
}

LlseEstimator llse(const JointCovariance& joint, const ComponentSet& target,
                   const ComponentSet& given, Inversion inversion) {
  require_disjoint(target, given, "llse");
  auto r = llse_error_covariance(joint.covariance(target), joint.cross(target, given),
                                 joint.covariance(given), inversion);
  LlseEstimator out{std::move(r.error), {}};
  const int n = joint.block_dim();
  for (std::size_t k = 0; k < given.size(); ++k) {
    out.gains.push_back(r.gain.middleCols(static_cast<Eigen::Index>(k) * n, n));
  }
  return out;
}

Entropy conditional_entropy(const JointCovariance& joint, const ComponentSet& a,
                            const ComponentSet& given, LogBase base, Inversion inversion) {
  const auto c = condition_on(joint, a, given, inversion);
  return differential_entropy(CovarianceMatrix::trusted(c.cov), base);
}

double mutual_information(const JointCovariance& joint, const ComponentSet& a,
                          const ComponentSet& b, const ComponentSet& given, LogBase base,
                          Inversion inversion) {
  require_disjoint(a, b, "mutual_information");
  require_disjoint(a, given, "mutual_information");
  require_disjoint(b, given, "mutual_information");
  if (a.empty() || b.empty()) return 0.0;
  const auto marginal = condition_on(joint, a, given, inversion);
  const auto ld_marginal = finite_log_det(marginal.cov);
  if (!ld_marginal) {
    throw SingularCovariance("mutual_information: conditional covariance of the first set is "
                             "singular");
  }
  const auto posterior = condition_on(joint, a, join(b, given), inversion);
  const auto ld_posterior = finite_log_det(posterior.cov);
  if (!ld_posterior) return std::numeric_limits<double>::infinity();
  return from_nats(0.5 * (*ld_marginal - *ld_posterior), base);
}

}  // namespace dpcjam
