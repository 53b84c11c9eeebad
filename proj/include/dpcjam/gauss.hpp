#pragma once

// Second-order Gaussian information machinery: validated covariance
// matrices, joint covariances over named channel components, differential
// entropy, conditional (Schur complement) covariances, LLSE error
// covariances and mutual information.

#include "dpcjam/errors.hpp"
#include "dpcjam/linalg.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace dpcjam {

enum class LogBase { Bits, Nats };

/// Converts a quantity in nats to the requested base.
double from_nats(double nats, LogBase base);
std::string_view to_string(LogBase base);
std::optional<LogBase> parse_log_base(std::string_view text);

/// Symmetric positive semidefinite matrix. Construction rejects inputs that
/// are asymmetric beyond 1e-12 (relative) or have an eigenvalue below
/// -1e-10 * trace; they are never repaired.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix m);

  /// Wraps a matrix that is PSD by construction (Schur complements, sample
  /// covariances already checked). Only symmetrizes.
  static CovarianceMatrix trusted(Matrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  struct TrustedTag {};
  CovarianceMatrix(Matrix m, TrustedTag);
  Matrix m_;
};

/// Differential entropy. A singular covariance yields value == -inf with
/// singular set; call checked() to turn that into SingularCovariance.
struct Entropy {
  double value = 0.0;
  bool singular = false;

  double checked() const;
};

inline constexpr double kSingularDeterminant = 1e-300;

Entropy differential_entropy(const CovarianceMatrix& cov, LogBase base = LogBase::Bits);

enum class Component { X, S, J, Z, U, Y, W };
inline constexpr std::size_t kComponentCount = 7;

std::string_view to_string(Component c);
using ComponentSet = std::vector<Component>;

/// Block-structured covariance of stacked n-dimensional components.
class JointCovariance {
 public:
  /// Validates symmetry and PSD of the full matrix. Rows/cols are ordered as
  /// `layout`, each component occupying n consecutive indices.
  JointCovariance(int n, std::vector<Component> layout, Matrix full);

  static JointCovariance trusted(int n, std::vector<Component> layout, Matrix full);

  int block_dim() const { return n_; }
  const std::vector<Component>& layout() const { return layout_; }
  const Matrix& full() const { return full_; }
  bool contains(Component c) const;

  Matrix block(Component a, Component b) const;
  Matrix covariance(const ComponentSet& set) const;
  Matrix cross(const ComponentSet& a, const ComponentSet& b) const;

  /// Component means default to zero.
  Vector mean(Component c) const;
  void set_mean(Component c, Vector mu);

  struct ChannelCheck {
    bool linear = true;             // Lambda_AY = Lambda_AX + Lambda_AS + Lambda_AJ + Lambda_AZ
    bool noise_uncorrelated = true; // Z orthogonal to X, S, J
    double worst_linearity = 0.0;
    double worst_noise_correlation = 0.0;
  };

  /// Checks the Y = X + S + J + Z structure (when all five are present) and
  /// independence of Z (when present), to tol relative to the largest entry.
  ChannelCheck check_channel_structure(double tol = 1e-9) const;

 private:
  struct TrustedTag {};
  JointCovariance(int n, std::vector<Component> layout, Matrix full, TrustedTag);
  std::vector<int> indices(const ComponentSet& set) const;
  int offset(Component c) const;

  int n_;
  std::vector<Component> layout_;
  Matrix full_;
  std::array<std::optional<Vector>, kComponentCount> means_{};
};

/// How a conditioning block Lambda_GG is inverted.
///  Strict: condition number above kMaxCondition throws IllConditioned.
///  Ridge:  above kMaxCondition, adds kRidgeScale * trace to the diagonal.
///  Pseudo: Moore-Penrose inverse dropping eigenvalues below
///          kPseudoCutoff * largest; exact for degenerate (constant) directions.
enum class Inversion { Strict, Ridge, Pseudo };

inline constexpr double kMaxCondition = 1e12;
inline constexpr double kRidgeScale = 1e-12;
inline constexpr double kPseudoCutoff = 1e-12;

struct ConditionalCovariance {
  CovarianceMatrix covariance;
  double condition = 1.0;  // of the conditioning block
  double ridge = 0.0;      // added to its diagonal, 0 when unused
};

/// Lambda_TT - Lambda_TG Lambda_GG^-1 Lambda_TG^T via an eigendecomposition
/// of the conditioning block.
ConditionalCovariance schur_conditional_cov(const JointCovariance& joint,
                                            const ComponentSet& target,
                                            const ComponentSet& given,
                                            Inversion inversion = Inversion::Strict);

struct LlseResult {
  CovarianceMatrix error;
  Matrix gain;  // estimate of T is gain * G
  double condition = 1.0;
  double ridge = 0.0;
};

/// LLSE error covariance computed from the gain K = Lambda_TG Lambda_GG^-1
/// (LDLT solve) in Joseph form E[(T - KG)(T - KG)^T]. Independent of the
/// eigendecomposition path used by schur_conditional_cov.
LlseResult llse_error_covariance(const Matrix& tt, const Matrix& tg, const Matrix& gg,
                                 Inversion inversion = Inversion::Strict);

/// LLSE of a target set from given components; gains split per given component
/// (the A, B of an estimate A Y + B S).
struct LlseEstimator {
  CovarianceMatrix error;
  std::vector<Matrix> gains;
};

LlseEstimator llse(const JointCovariance& joint, const ComponentSet& target,
                   const ComponentSet& given, Inversion inversion = Inversion::Strict);

/// I(A; B | given) = h(A | given) - h(A | B, given).
/// Throws SingularCovariance when A | given is degenerate; returns +inf when
/// only A | B, given is.
double mutual_information(const JointCovariance& joint, const ComponentSet& a,
                          const ComponentSet& b, const ComponentSet& given,
                          LogBase base = LogBase::Bits,
                          Inversion inversion = Inversion::Strict);

/// Conditional entropy h(A | given).
Entropy conditional_entropy(const JointCovariance& joint, const ComponentSet& a,
                            const ComponentSet& given, LogBase base = LogBase::Bits,
                            Inversion inversion = Inversion::Strict);

}  // namespace dpcjam
