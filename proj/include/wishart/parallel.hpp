#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace wishart {

// Worker count: WISHART_LDP_THREADS caps it when set, otherwise the hardware
// concurrency (at least 1).
int worker_count();

// Runs fn(begin, end) over disjoint index ranges on worker_count() threads.
// The partition depends only on `count`, never on the thread count, so any
// output written by index is identical for every worker configuration.
void parallel_for(size_t count, const std::function<void(size_t, size_t)>& fn);

// Pairwise summation over a fixed-order array; deterministic for a given
// input regardless of how it was produced.
double pairwise_sum(const double* data, size_t count);
inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
};

// Two-pass mean/variance with pairwise sums.
MeanVar mean_variance(const std::vector<double>& v);

}  // namespace wishart
