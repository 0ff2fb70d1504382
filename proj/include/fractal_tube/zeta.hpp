#pragma once

#include "fractal_tube/ifs.hpp"

#include <complex>
#include <vector>

namespace fractal_tube {

using cplx = std::complex<double>;

/// A pole of the scaling zeta function 1 / (1 - sum_j r_j^s).
struct ComplexDimension {
    cplx omega;
    cplx residue;  // 1 / f'(omega) for a simple pole
    bool simple = true;
};

/// Search rectangle [sigma_min, sigma_max] x [-t_max, t_max].
struct PoleWindow {
    double sigma_min = 0.0;
    double sigma_max = 1.0;
    double t_max = 10.0;
};

struct PoleSearchOptions {
    double tol = 1e-10;               // |f(omega)| after Newton refinement
    double derivative_floor = 1e-12;  // |f'| below this marks a pole non-simple
    double terminal_diameter = 0.05;  // stop subdividing single-zero rectangles here
    double min_diameter = 1e-7;       // multi-zero rectangles below this are reported
    int max_retries = 6;              // jittered retries when a contour hits a zero
};

/// Terminal rectangle of the subdivision with its argument-principle count.
struct RectangleCount {
    double re_lo, re_hi, im_lo, im_hi;
    int winding;
    int zeros;
};

struct PoleSearchResult {
    /// Conjugate-symmetric, sorted by (Im, Re).
    std::vector<ComplexDimension> poles;
    /// Upper half-plane rectangles (Im >= -small offset) that held zeros.
    std::vector<RectangleCount> rectangles;
    int total_winding = 0;
};

/// f(s) = 1 - sum_j r_j^s, evaluated as exp(s log r_j).
cplx dirichlet_f(const IfsSystem& system, cplx s);
/// f'(s) = sum_j log(1/r_j) r_j^s
cplx dirichlet_f_prime(const IfsSystem& system, cplx s);

/// 1 / f(s); throws AtPole when |f(s)| <= pole_tol.
cplx zeta_value(const IfsSystem& system, cplx s, double pole_tol = 1e-10);

/// Number of zeros of f inside the rectangle, from the winding of f along its
/// boundary. Throws ContourThroughZero if the boundary passes a zero.
int winding_number(const IfsSystem& system, double re_lo, double re_hi, double im_lo, double im_hi,
                   double zero_tol = 1e-10);

/// All poles in the window: argument-principle subdivision, Newton refinement
/// from terminal rectangle centres, residues 1/f'. Only Im >= 0 is searched
/// and the rest is mirrored.
PoleSearchResult find_poles(const IfsSystem& system, const PoleWindow& window,
                            const PoleSearchOptions& options = {});

/// D + i n p for |n| <= n_max with the common residue 1 / sum_j r_j^D log(1/r_j).
/// Throws NotLattice.
std::vector<ComplexDimension> lattice_poles(const IfsSystem& system, const LatticeClass& lattice, int n_max);

struct DTilde {
    double value = 0.0;
    bool degenerate = false;  // J = 2: the single-term equation r_1^s = 1 gives 0
};

/// Real root of sum_{j<J} r_j^s = 1 (the J-1 largest ratios); lies below D.
DTilde dtilde(const IfsSystem& system, double tol = 1e-14);

/// Every zero of f has real part >= this bound: below it the smallest-ratio
/// terms dominate |sum_j r_j^s| and f cannot vanish.
double pole_real_part_lower_bound(const IfsSystem& system);

/// Window covering every pole with |Im| <= t_max, padded by `pad`.
PoleWindow full_strip_window(const IfsSystem& system, double t_max, double pad = 0.1);

}  // namespace fractal_tube
