#include "tdf/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace tdf {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int n) { g_default_threads.store(n < 0 ? 0 : n); }

int default_threads() {
    int n = g_default_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

double pairwise_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

MeanStd mean_std(std::span<const double> x) {
    MeanStd out;
    out.n = x.size();
    if (out.n == 0) return out;
    out.mean = pairwise_sum(x) / static_cast<double>(out.n);
    if (out.n < 2) return out;
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - out.mean;
        sq[i] = d * d;
    }
    const double ss = pairwise_sum(sq);
    out.std = std::sqrt(ss / static_cast<double>(out.n - 1));
    return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int max_threads) {
    if (n == 0) return;
    int n_threads = max_threads > 0 ? max_threads : default_threads();
    n_threads = static_cast<int>(std::min<std::size_t>(n_threads, n));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    // An atomic cursor hands chunks to workers. Chunking affects scheduling
    // only; fn(i) owns everything index i writes, so results are identical
    // for any thread count.
    const std::size_t chunk =
        std::max<std::size_t>(1, std::min<std::size_t>(1024, n / (4 * static_cast<std::size_t>(n_threads))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const std::size_t end = std::min(begin + chunk, n);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads) - 1);
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

std::size_t bracket_index(std::span<const double> xs, double x) {
    if (xs.size() < 2 || x <= xs.front()) return 0;
    if (x >= xs[xs.size() - 2]) return xs.size() - 2;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    return static_cast<std::size_t>(it - xs.begin()) - 1;
}

double lerp_clamped(std::span<const double> xs, std::span<const double> ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const std::size_t i = bracket_index(xs, x);
    const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          int iters) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iters; ++k) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

} // namespace tdf
