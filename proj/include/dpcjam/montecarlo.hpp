#pragma once

// Sampling cross-checks. Draws of (X,S,J,Z) are formed from the strategy
// matrices, and information quantities are estimated by plugging the sample
// covariance into the Gaussian closed forms. Standard errors come from a
// delete-one-fold jackknife over contiguous folds.

#include "dpcjam/game.hpp"
#include "dpcjam/report.hpp"

#include <cstdint>
#include <string_view>

namespace dpcjam {

/// Marginal law of the jammer innovation coordinates, scaled to unit variance
/// before Lambda_R^{1/2} is applied.
enum class JammerShape { Gaussian, Uniform, TwoPoint };

std::string_view to_string(JammerShape shape);
JammerShape parse_jammer_shape(std::string_view text);

/// N x n draws per component; row k is one realization of the length-n block.
struct SampleBatch {
  int N = 0;
  int n = 0;
  std::uint64_t seed = 0;
  LogBase base = LogBase::Bits;
  Matrix X, S, J, Z, Y, U;

  /// X, S, J, Z, Y or U. W is not stored and throws InvalidArgument.
  const Matrix& component(Component c) const;
};

inline constexpr int kSampleChunkRows = 4096;

/// Deterministic in seed regardless of thread count: every chunk of
/// kSampleChunkRows rows has its own derived generator.
SampleBatch sample_system(const ChannelParams& ch, const UserStrategy& user,
                          const JammerStrategy& jammer, int N, std::uint64_t seed,
                          JammerShape shape = JammerShape::Gaussian);

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  int folds = 0;
};

inline constexpr int kJackknifeFolds = 20;

/// Gaussian plug-in I(A;B|given) from the sample covariance (means estimated).
/// Throws DegenerateSample when the symmetrized covariance is not PSD or a
/// conditional covariance collapses.
Estimate plugin_mi(const SampleBatch& batch, const ComponentSet& a, const ComponentSet& b,
                   const ComponentSet& given, LogBase base);

/// Plug-in per-symbol utility: Costa (1/n)[I(Y;U) - I(U;S)], SI (1/n) I(Y;X|S).
Estimate plugin_utility(const SampleBatch& batch, GameKind game, LogBase base);

struct ProbeComparison {
  JammerShape shape = JammerShape::Gaussian;
  GameKind game = GameKind::Costa;
  Estimate surrogate;      // plug-in utility under the shaped jammer
  double gaussian = 0.0;   // closed-form utility of the power-matched Gaussian jammer
  double margin = 0.0;     // surrogate - gaussian + 3 SE
  bool passed = false;     // margin >= 0

  ReportBlock to_block() const;
};

/// Memoryless zero-mean jammer with i.i.d. coordinates of the given shape and
/// power P_J, independent of the state. The plug-in value is a Gaussian
/// surrogate, not the true mutual information of the shaped law.
ProbeComparison nongaussian_probe(const ChannelParams& ch, const UserStrategy& user,
                                  JammerShape shape, int N, std::uint64_t seed,
                                  GameKind game = GameKind::Costa);

}  // namespace dpcjam
