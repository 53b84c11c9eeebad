#pragma once

// Sweep configuration. A config file is flat "key=value" text with '#'
// comments; keys are the SweepSpec field names. Grids are either a
// comma-separated list ("0.5,1,2") or an inclusive range "start:stop:step".

#include "dpcjam/game.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dpcjam::cli {

struct ConfigError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct Grid {
  std::vector<double> values{1.0};

  static Grid parse(const std::string& text);
  std::string to_string() const;
};

enum class GameSelection { Costa, SideInformation, Both };

std::vector<GameKind> games(GameSelection selection);

struct SweepSpec {
  Grid P_U, P_J, sigma2, sigmaS2;
  GameSelection game = GameSelection::Costa;
  int n = 1;
  LogBase base = LogBase::Bits;
  std::uint64_t seed = 42;
  std::string output;
  // equilibrium runs
  double tol = 1e-9;
  int max_rounds = 500;
  int random_starts = 8;
  std::string report;  // defaults to <output>.report
  // verify runs
  double trial_scale = 1.0;
  bool inject_fault = false;
  // sample runs
  int N = 10000;
  std::string shape = "gaussian";

  /// Throws ConfigError on an empty grid, a non-positive step or bad ranges.
  void validate() const;

  /// Grid points in order: P_U outermost, then P_J, sigma2, sigmaS2.
  std::vector<ChannelParams> points() const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses a config file. Throws ConfigError for malformed lines and Error
/// naming the path when the file cannot be read.
KeyValues read_config_file(const std::string& path);

/// Applies key=value pairs in order; later pairs win. Unknown keys and bad
/// values throw ConfigError.
void apply_config(SweepSpec& spec, const KeyValues& values);

}  // namespace dpcjam::cli
