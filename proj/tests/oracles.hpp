#pragma once

// Test-only reference computations. They deliberately avoid the library's
// dynamic programs and log-space machinery.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// P(N in tau) by summing prod K(gaps) over every subset of {1..N} that contains N.
inline long double renewal_by_enumeration(const std::vector<double>& K, std::size_t N) {
    long double total = 0.0L;
    const std::uint32_t endpoint = 1u << (N - 1);
    for (std::uint32_t inner = 0; inner < endpoint; ++inner) {
        const std::uint32_t s = inner | endpoint;
        long double w = 1.0L;
        std::size_t prev = 0;
        for (std::size_t n = 1; n <= N; ++n) {
            if (!(s >> (n - 1) & 1u)) continue;
            const std::size_t gap = n - prev;
            w *= gap < K.size() ? K[gap] : 0.0;
            prev = n;
        }
        total += w;
    }
    return total;
}

/// Linear-space polymer weights: Z_N, and per-subset weights on request.
inline long double partition_by_enumeration(const std::vector<double>& K, const std::vector<double>& omega,
                                            double beta, double h, std::size_t N,
                                            std::vector<long double>* weights = nullptr) {
    long double total = 0.0L;
    const std::uint32_t endpoint = 1u << (N - 1);
    if (weights) weights->assign(endpoint, 0.0L);
    for (std::uint32_t inner = 0; inner < endpoint; ++inner) {
        const std::uint32_t s = inner | endpoint;
        long double w = 1.0L;
        std::size_t prev = 0;
        for (std::size_t n = 1; n <= N; ++n) {
            if (!(s >> (n - 1) & 1u)) continue;
            const std::size_t gap = n - prev;
            w *= (gap < K.size() ? K[gap] : 0.0) * std::exp(static_cast<long double>(beta * omega[n - 1] + h));
            prev = n;
        }
        if (weights) (*weights)[inner] = w;
        total += w;
    }
    return total;
}

/// sum_{n>=1} g(n) until terms fall below rel * partial sum for `patience` consecutive n.
inline long double sum_until_negligible(const std::function<long double(long double)>& g, long double rel = 1e-22L,
                                        std::size_t start = 1) {
    long double s = 0.0L;
    std::size_t quiet = 0;
    for (std::size_t n = start;; ++n) {
        const long double t = g(static_cast<long double>(n));
        s += t;
        if (t < rel * s) {
            if (++quiet > 64) break;
        } else {
            quiet = 0;
        }
    }
    return s;
}

/// Composite Simpson rule on [a, b] with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
    const double step = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * step) * ((i % 2) ? 4.0 : 2.0);
    return s * step / 3.0;
}

inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace oracle
