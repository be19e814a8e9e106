#pragma once

#include <cstdint>
#include <functional>

namespace gaplab {

/// Worker count: hardware concurrency, capped by GAPLAB_THREADS when set.
int thread_budget();

/// Runs body(i) for i in [0, count) on up to thread_budget() threads. Each
/// index is handled exactly once; results must be written to disjoint slots.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body);

/// Derived stream seed for (seed, index), splitmix64 mixing.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace gaplab
