#pragma once

#include <cstdint>
#include <random>

namespace codedphoton {

/// Stream identifiers keep unrelated ensembles that share a seed apart.
enum class Stream : std::uint64_t {
  kCodes = 1,
  kPhaseNoise = 2,
  kChipFlips = 3,
  kCorrelation = 4,
  kInterference = 5,
  kCrosstalk = 6,
  kParity = 7,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Engine for one Monte-Carlo trial, keyed by (seed, stream, trial). Trials
/// never share state, so results do not depend on evaluation order or on how
/// many workers run them.
std::mt19937_64 trial_engine(std::uint64_t seed, Stream stream, std::uint64_t trial);

/// +1 or -1 with probability 1/2 each.
inline int rademacher(std::mt19937_64& eng) { return (eng() >> 63) != 0U ? -1 : 1; }

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace codedphoton
