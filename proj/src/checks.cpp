#include "fractal_tube/checks.hpp"

#include "fractal_tube/error.hpp"
#include "fractal_tube/oracle.hpp"
#include "fractal_tube/tube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fractal_tube {

double largest_inradius(std::span<const GeneratorProfile> profiles)
{
    if (profiles.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no generators");
    }
    double g = 0.0;
    for (const GeneratorProfile& p : profiles) {
        g = std::max(g, p.inradius);
    }
    return g;
}

GridComparison compare_residue_direct(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                      std::span<const ComplexDimension> poles, double eps_min, double eps_max,
                                      int points, std::size_t node_budget)
{
    GridComparison out;
    out.points = points;
    for (double eps : log_epsilon_grid(eps_min, eps_max, points)) {
        const double direct = tiling_volume_direct(system, profiles, eps, node_budget);
        const double residue = residue_tube_volume(system, profiles, poles, eps).value;
        const double rel = std::abs(residue - direct) / std::abs(direct);
        if (rel >= out.max_rel_error) {
            out.max_rel_error = rel;
            out.worst_epsilon = eps;
        }
    }
    return out;
}

std::vector<double> scaled_direct_sequence(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                           std::span<const int> ks, std::size_t node_budget)
{
    const double g = largest_inradius(profiles);
    const double dim = moran_dimension(system);
    const int d = system.ambient_dim();
    std::vector<double> out;
    out.reserve(ks.size());
    for (int k : ks) {
        const double eps = std::ldexp(g, -k);
        out.push_back(std::pow(eps, dim - d) * tiling_volume_direct(system, profiles, eps, node_budget));
    }
    return out;
}

double empirical_lattice_amplitude(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                   const LatticeClass& lattice, int periods, int points, std::size_t node_budget)
{
    if (!lattice.lattice()) {
        throw Error(ErrorCode::NotLattice, "multiplicative period needs a lattice system");
    }
    const double dim = moran_dimension(system);
    const int d = system.ambient_dim();
    const double span = 2.0 * M_PI / lattice.period;  // = log(1/base_r)
    const double x0 = -std::log(largest_inradius(profiles)) + periods * span;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < points; ++i) {
        const double x = x0 + span * i / points;
        const double v = std::exp(-x * (dim - d)) * tiling_volume_direct(system, profiles, std::exp(-x), node_budget);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

}  // namespace fractal_tube
