#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace planefield {

/// Worker count from PLANEFIELD_JOBS, else the hardware concurrency (>= 1).
int default_jobs();

/// Runs body(i) for i in [0, n) on up to `jobs` threads (contiguous static
/// chunks). The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation in a fixed order; bit-identical for a given
/// input regardless of how the values were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace planefield
