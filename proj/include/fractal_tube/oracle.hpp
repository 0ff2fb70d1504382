#pragma once

#include "fractal_tube/generator.hpp"
#include "fractal_tube/geometry.hpp"
#include "fractal_tube/ifs.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fractal_tube {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(samples)
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Exact inner tube volume of the self-similar tiling: saturated subtrees are
/// summed in closed form, the rest word by word. Words with equal ratios are
/// merged, so lattice systems with one ratio cost O(depth).
/// Throws TilingNotSummable (sum_j r_j^d >= 1) and BudgetExceeded.
double tiling_volume_direct(const IfsSystem& system, std::span<const GeneratorProfile> profiles, double epsilon,
                            std::size_t node_budget = kDefaultNodeBudget);

/// Fixed point of a planar similitude.
Vec2 fixed_point(const Similitude& map);

/// {phi_w(p_j) : |w| = depth} over the fixed points p_j of the maps; every
/// point lies on the attractor. J^(depth+1) points.
/// Throws NoRealization and BudgetExceeded.
std::vector<Vec2> attractor_points(const IfsSystem& system, int depth,
                                   std::size_t point_budget = kDefaultNodeBudget);

/// Convex hull of the attractor, from its fixed-point cloud at `depth`.
std::vector<Vec2> attractor_hull(const IfsSystem& system, int depth = 6);

/// Area of the eps-neighbourhood of a point set: uniform samples over the
/// eps-dilated bounding box. Deterministic in `seed`.
McEstimate mc_point_set_volume(std::span<const Vec2> points, double epsilon, std::size_t samples,
                               std::uint64_t seed);

/// Monte Carlo V_F(eps) from the depth-`depth` cloud. The cloud lies in F, so
/// the distance error is at most r_1^depth diam(C); eps must exceed twice that
/// or EpsilonTooSmall is thrown.
McEstimate mc_neighborhood_volume(const IfsSystem& system, int depth, double epsilon, std::size_t samples,
                                  std::uint64_t seed);

/// (1/log T) * integral over x in [0, log T] of e^{-x(D-d)} V_T(e^{-x}) dx,
/// trapezoid rule on `grid` equally spaced nodes.
double average_content_numeric(const IfsSystem& system, std::span<const GeneratorProfile> profiles, double t_max,
                               int grid = 2000, std::size_t node_budget = kDefaultNodeBudget);

struct McParams {
    int depth = 10;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

struct PearseWinterCheck {
    McEstimate mc;
    double predicted = 0.0;  // V_T(eps) + V_C(eps) - V_C(0)
    double residual = 0.0;   // |mc - predicted| in standard errors
};

PearseWinterCheck pearse_winter_residual(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                         const HullSteiner& hull, double epsilon, const McParams& params);

/// integral_0^inf eps^(s-d-1) V(eps) d eps by adaptive Gauss-Kronrod, for
/// d-1 < s < d. Agrees with generator_mellin(profile, s).
double mellin_quadrature(const GeneratorProfile& profile, double s);

}  // namespace fractal_tube
