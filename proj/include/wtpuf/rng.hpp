#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace wtpuf {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based seed fan-out: the seed of trial `counter` within `stream`
/// depends only on (master, stream, counter), so parallel trial loops stay
/// reproducible regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter);

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t counter) {
  return Rng(derive_seed(master, stream, counter));
}

/// Stream identifiers; keep distinct so unrelated draws never share seeds.
namespace streams {
inline constexpr std::uint64_t device = 0x01;
inline constexpr std::uint64_t remeasure = 0x02;
inline constexpr std::uint64_t construct = 0x03;
inline constexpr std::uint64_t fer = 0x04;
inline constexpr std::uint64_t enroll = 0x05;
inline constexpr std::uint64_t demo = 0x06;
}  // namespace streams

/// Runs body(block) for blocks [0, blocks) on up to `threads` workers.
/// Callers keep one accumulator per block and merge them in block order, so
/// results do not depend on the thread count.
void parallel_blocks(std::size_t blocks, unsigned threads,
                     const std::function<void(std::size_t)>& body);

/// Worker count used by Monte-Carlo loops (hardware concurrency, at least 1).
unsigned default_threads();

}  // namespace wtpuf
