#pragma once

#include "fractal_tube/generator.hpp"
#include "fractal_tube/ifs.hpp"
#include "fractal_tube/zeta.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fractal_tube {

/// Real part of a truncated residue sum with its diagnostics.
struct TubeEstimate {
    double value = 0.0;
    /// |sum of imaginary parts| / |value|; conjugate pairs make this ~0.
    double imag_residual = 0.0;
    /// Empirical bound on the omitted poles, from a K/|s|^2 envelope fitted
    /// to the supplied poles and their density. Not a proven constant.
    double error_bar = 0.0;
};

struct ResidueOptions {
    double collision_tol = 1e-9;
    double imag_tol = 1e-8;
};

/// Sum over the supplied poles of res(zeta) eps^(d-omega) A(omega) plus the
/// integer-dimension terms zeta(m) kappa_m eps^(d-m), m = 0..d-1, where A is
/// the summed generator Mellin factor.
/// Throws MissingDominantPole, PoleCollision, ConjugateMismatch.
TubeEstimate residue_tube_volume(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                 std::span<const ComplexDimension> poles, double epsilon,
                                 const ResidueOptions& options = {});

/// A(D) / sum_j r_j^D log(1/r_j). Throws LatticeSystem for lattice systems
/// (the lattice class is computed when not supplied) and DimensionOutOfRange
/// unless d-1 < D < d.
double minkowski_content(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                         const std::optional<LatticeClass>& lattice = std::nullopt);

/// Same closed form, valid for lattice and non-lattice systems alike.
double average_content(const IfsSystem& system, std::span<const GeneratorProfile> profiles);

/// Fourier series of the periodic part of eps^(D-d) V(eps) in x = -log eps:
/// h(x) = prefactor * sum_{|n|<=N} a_n e^{inpx}.
struct FourierCoeffs {
    double period = 0.0;     // p
    double dimension = 0.0;  // D
    double prefactor = 0.0;  // 1 / sum_j r_j^D log(1/r_j)
    int n_max = 0;
    std::vector<cplx> coeffs;  // a_{-N} .. a_N
    /// max over n = 1..5 of |a_n| |D + inp|^2
    double envelope_k = 0.0;

    cplx at(int n) const { return coeffs.at(static_cast<std::size_t>(n + n_max)); }
    double eval(double x) const;
    /// prefactor * sum_{|n|>N} K / (np)^2
    double truncation_bound() const;
};

/// Throws NotLattice.
FourierCoeffs lattice_fourier_coeffs(const IfsSystem& system, const LatticeClass& lattice,
                                     std::span<const GeneratorProfile> profiles, int n_max);

/// max - min of h over grid_points evenly spaced x in one period.
double oscillation_amplitude(const FourierCoeffs& coeffs, int grid_points = 1000);

/// V_F(eps) = V_T(eps) + V_C(eps) - V_C(0); assumes the boundary condition.
TubeEstimate fractal_volume(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                            const HullSteiner& hull, double epsilon, std::span<const ComplexDimension> poles);

enum class CurveKind { TilingResidue, TilingDirect, FractalVolume, ScaledLimit };

struct TubeCurve {
    std::vector<double> epsilons;  // strictly decreasing
    std::vector<double> values;
    CurveKind kind = CurveKind::TilingDirect;
};

/// `points` log-uniform values from eps_max down to eps_min.
/// Throws InvalidArgument unless 0 < eps_min < eps_max and points >= 2.
std::vector<double> log_epsilon_grid(double eps_min, double eps_max, int points);

/// Poles used by the residue sum: the lattice ladder when `lattice` is a
/// lattice class, otherwise an argument-principle search over the strip.
std::vector<ComplexDimension> tube_poles(const IfsSystem& system, const LatticeClass& lattice, double t_max);

}  // namespace fractal_tube
