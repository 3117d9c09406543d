#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tdf {

// Pairwise (cascade) summation. Deterministic for a given input order and
// accurate to ~eps*log2(n), which the reproducibility contract relies on.
double pairwise_sum(std::span<const double> x);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0; // sample std, n-1 denominator (0 when n < 2)
    std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> x);

// Runs fn(i) for i in [0, n) on up to max_threads threads. Work is handed
// out in fixed blocks; fn must only write to slots owned by index i, so
// results cannot depend on the schedule. max_threads <= 0 means hardware
// concurrency. The global default honours set_default_threads().
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int max_threads = 0);

void set_default_threads(int n); // 0 = hardware
int default_threads();

// Piecewise-linear interpolation on a strictly increasing grid, clamped to
// the end values outside the grid.
double lerp_clamped(std::span<const double> xs, std::span<const double> ys, double x);

// Index of the last grid point <= x (0 if x below grid, n-2 capped).
std::size_t bracket_index(std::span<const double> xs, double x);

// Golden-section minimisation of a unimodal function on [lo, hi].
// Returns the argmin; f is evaluated ~iters+2 times.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          int iters = 40);

} // namespace tdf
