#pragma once

// Comparisons between the residue machinery and the brute-force oracles,
// shared by the command line tool and the acceptance suite.

#include "fractal_tube/generator.hpp"
#include "fractal_tube/ifs.hpp"
#include "fractal_tube/zeta.hpp"

#include <span>
#include <vector>

namespace fractal_tube {

struct GridComparison {
    double max_rel_error = 0.0;
    double worst_epsilon = 0.0;
    int points = 0;
};

/// Residue sum against tiling_volume_direct on a log grid of eps.
GridComparison compare_residue_direct(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                      std::span<const ComplexDimension> poles, double eps_min, double eps_max,
                                      int points, std::size_t node_budget = kDefaultNodeBudget);

/// eps^(D-d) V_T(eps) at eps = g 2^-k for each k, g the largest inradius.
std::vector<double> scaled_direct_sequence(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                           std::span<const int> ks, std::size_t node_budget = kDefaultNodeBudget);

/// max - min of eps^(D-d) V_T(eps) over one multiplicative period starting
/// `periods` periods below the largest inradius.
double empirical_lattice_amplitude(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                   const LatticeClass& lattice, int periods = 30, int points = 1000,
                                   std::size_t node_budget = kDefaultNodeBudget);

double largest_inradius(std::span<const GeneratorProfile> profiles);

}  // namespace fractal_tube
