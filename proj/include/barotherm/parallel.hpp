#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace barotherm {

/// Worker threads used for block-parallel loops. Defaults to the hardware
/// concurrency, capped by the BAROTHERM_THREADS environment variable.
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; ordering across indices is unspecified.
void parallel_for(int n, const std::function<void(int)>& body);

/// Engine for one block of a stochastic computation, derived from the run
/// seed and the block index so results do not depend on the worker count.
std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block, std::uint32_t stream = 0);

}  // namespace barotherm
