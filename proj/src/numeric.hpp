#pragma once

// Small numerical helpers shared by the library sources.

#include <cmath>
#include <functional>

namespace fractal_tube::detail {

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Root of a strictly decreasing function on [lo, hi] with g(lo) > 0 > g(hi).
/// Stops when |g| <= tol or the bracket collapses; returns false if the
/// iteration budget ran out first.
bool bisect_decreasing(const std::function<double(double)>& g, double lo, double hi, double tol,
                       double& root, int max_iter = 400);

}  // namespace fractal_tube::detail
