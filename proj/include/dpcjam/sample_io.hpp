#pragma once

// Raw sample dump. Layout is documented in docs/sample-format.md.

#include "dpcjam/montecarlo.hpp"

#include <cstdint>
#include <string>

namespace dpcjam {

inline constexpr std::uint32_t kSampleMagic = 0x4A435044u;  // bytes "DPCJ"
inline constexpr std::uint32_t kSampleVersion = 1;
inline constexpr std::uint32_t kSampleComponents = 6;       // X S J Z Y U

/// Throws Error with the path on IO failure.
void write_samples(const std::string& path, const SampleBatch& batch);
SampleBatch read_samples(const std::string& path);

}  // namespace dpcjam
