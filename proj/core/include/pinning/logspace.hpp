#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace pinning {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == neg_inf) return a;
    return a + std::log1p(std::exp(b - a));
}

/// Streaming log-sum-exp. Keeps a running maximum and a scaled sum so that a
/// single pass suffices; -inf terms are ignored.
class LogSumExp {
  public:
    void add(double x) {
        if (x == neg_inf) return;
        if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
    }

    double value() const { return max_ == neg_inf ? neg_inf : max_ + std::log(sum_); }

  private:
    double max_ = neg_inf;
    double sum_ = 0.0;
};

inline double log_sum_exp(std::span<const double> xs) {
    LogSumExp acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

/// Neumaier-compensated summation.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace pinning
