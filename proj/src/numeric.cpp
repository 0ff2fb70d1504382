#include "numeric.hpp"

namespace fractal_tube::detail {

bool bisect_decreasing(const std::function<double(double)>& g, double lo, double hi, double tol,
                       double& root, int max_iter)
{
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = g(mid);
        if (std::abs(v) <= tol || mid == lo || mid == hi) {
            root = mid;
            return std::abs(v) <= tol;
        }
        (v > 0.0 ? lo : hi) = mid;
    }
    root = 0.5 * (lo + hi);
    return false;
}

}  // namespace fractal_tube::detail
