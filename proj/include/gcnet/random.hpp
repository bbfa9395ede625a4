#pragma once

#include <cstdint>
#include <random>

namespace gcnet {

using Rng = std::mt19937_64;

/// Independent generator for stream `stream` of a master seed. Replicates and
/// per-task generators are derived this way so results do not depend on the
/// order in which work is scheduled.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

}  // namespace gcnet
