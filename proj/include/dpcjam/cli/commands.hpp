#pragma once

#include "dpcjam/cli/config.hpp"
#include "dpcjam/prooflab.hpp"

#include <iosfwd>
#include <vector>

namespace dpcjam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitVerificationFailed = 3;
inline constexpr int kExitNonConvergence = 4;

struct CapacityRow {
  ChannelParams ch;
  double costa_jammer = 0.0;
  double si_jammer = 0.0;
  double costa_nojam = 0.0;
};

std::vector<CapacityRow> capacity_rows(const SweepSpec& spec);
void write_capacity_csv(std::ostream& out, const std::vector<CapacityRow>& rows);

struct EquilibriumRun {
  int point = 0;
  ChannelParams ch;
  EquilibriumReport report;
};

/// One run per (grid point, game), in grid order with games innermost.
std::vector<EquilibriumRun> equilibrium_runs(const SweepSpec& spec);
void write_trace_csv(std::ostream& out, const std::vector<EquilibriumRun>& runs);
std::vector<ReportBlock> equilibrium_blocks(const std::vector<EquilibriumRun>& runs);

struct VerifyResult {
  std::vector<ClaimReport> claims;
  bool passed = true;

  std::vector<ReportBlock> blocks() const;
};

/// Trial counts are the defaults times spec.trial_scale (at least one trial).
/// The channel is the first grid point. With inject_fault the user's alpha is
/// moved to alpha* + 0.1 in the W'/Y' check and in the equilibrium probes.
VerifyResult run_verify(const SweepSpec& spec);

/// Each command writes its files, logs a summary, and returns an exit code.
int cmd_capacity(const SweepSpec& spec, std::ostream& log);
int cmd_equilibrium(const SweepSpec& spec, std::ostream& log);
int cmd_verify(const SweepSpec& spec, std::ostream& log);
int cmd_sample(const SweepSpec& spec, std::ostream& log);

}  // namespace dpcjam::cli
