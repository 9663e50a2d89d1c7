#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dcop {

/// Generator seeded from (seed, label). Streams for distinct labels are
/// independent of each other and of the order in which they are created,
/// which keeps margin-parallel code bit-identical to serial code.
std::mt19937_64 keyed_stream(std::uint64_t seed, std::string_view label);

/// Uniformly random permutation of {0..n-1} drawn from `rng`.
///
/// Implemented as a sort on raw 64-bit draws so the result depends only on
/// the engine output, not on the standard library's distributions.
std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng);

}  // namespace dcop
