#include "fractal_tube/tube.hpp"

#include "fractal_tube/error.hpp"
#include "numeric.hpp"

#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fractal_tube {

namespace {

int profile_dim(const IfsSystem& system, std::span<const GeneratorProfile> profiles)
{
    for (const GeneratorProfile& p : profiles) {
        if (p.dim != system.ambient_dim()) {
            throw Error(ErrorCode::DimMismatch, "generator dimension differs from the ambient dimension");
        }
    }
    return system.ambient_dim();
}

// sum_j r_j^D log(1/r_j) = f'(D)
double moran_weight(const IfsSystem& system, double dim)
{
    detail::CompensatedSum sum;
    for (double r : system.ratios()) {
        sum.add(std::pow(r, dim) * std::log(1.0 / r));
    }
    return sum.value();
}

void require_dimension_range(double dim, int d)
{
    if (!(dim > d - 1 && dim < d)) {
        std::ostringstream os;
        os << "D = " << dim << " must satisfy " << d - 1 << " < D < " << d;
        throw Error(ErrorCode::DimensionOutOfRange, os.str());
    }
}

bool all_ratios_equal(const IfsSystem& system)
{
    const auto& r = system.ratios();
    return std::abs(r.front() - r.back()) <= 1e-15 * r.front();
}

}  // namespace

TubeEstimate residue_tube_volume(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                 std::span<const ComplexDimension> poles, double epsilon,
                                 const ResidueOptions& options)
{
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    }
    if (profiles.empty()) {
        return {};
    }
    const int d = profile_dim(system, profiles);
    const double dim = moran_dimension(system);

    bool has_dominant = false;
    for (const ComplexDimension& p : poles) {
        if (std::abs(p.omega - cplx(dim, 0.0)) <= 1e-8 * std::max(1.0, dim)) {
            has_dominant = true;
        }
        for (int m = 0; m < d; ++m) {
            if (std::abs(p.omega - cplx(m, 0.0)) <= options.collision_tol) {
                throw Error(ErrorCode::PoleCollision, "a pole of zeta coincides with an integer dimension");
            }
        }
        if (!p.simple) {
            throw Error(ErrorCode::MultiplicitySuspected, "residue sum needs simple poles");
        }
    }
    if (!has_dominant) {
        throw Error(ErrorCode::MissingDominantPole, "pole list does not contain D");
    }

    const double log_eps = std::log(epsilon);
    detail::CompensatedSum re_sum;
    detail::CompensatedSum im_sum;
    double envelope = 0.0;
    double t_top = 0.0;
    int upper = 0;
    double max_residue = 0.0;
    for (const ComplexDimension& p : poles) {
        const cplx mellin = generator_mellin(profiles, p.omega);
        const cplx term = p.residue * std::exp((static_cast<double>(d) - p.omega) * log_eps) * mellin;
        re_sum.add(term.real());
        im_sum.add(term.imag());
        if (p.omega.imag() > 0.0) {
            envelope = std::max(envelope, std::abs(mellin) * std::norm(p.omega));
            t_top = std::max(t_top, p.omega.imag());
            max_residue = std::max(max_residue, std::abs(p.residue));
            ++upper;
        }
    }
    for (int m = 0; m < d; ++m) {
        cplx zeta_m;
        try {
            zeta_m = zeta_value(system, cplx(m, 0.0), options.collision_tol);
        } catch (const Error&) {
            throw Error(ErrorCode::PoleCollision, "zeta has a pole at an integer dimension");
        }
        double kappa_total = 0.0;
        for (const GeneratorProfile& q : profiles) {
            kappa_total += q.kappa[m];
        }
        re_sum.add(zeta_m.real() * kappa_total * std::pow(epsilon, d - m));
    }

    TubeEstimate out;
    out.value = re_sum.value();
    const double imag = im_sum.value();
    out.imag_residual = std::abs(imag) / std::max(std::abs(out.value), std::numeric_limits<double>::min());
    if (out.imag_residual > options.imag_tol) {
        std::ostringstream os;
        os << "imaginary part " << imag << " vs real part " << out.value << ": a conjugate pole is missing";
        throw Error(ErrorCode::ConjugateMismatch, os.str());
    }
    if (upper == 0) {
        out.error_bar = std::numeric_limits<double>::infinity();
    } else {
        // omitted poles above t_top: density upper/t_top, terms <= K/t^2
        const double density = upper / t_top;
        const double sigma = epsilon <= 1.0 ? dim : pole_real_part_lower_bound(system);
        out.error_bar = std::pow(epsilon, d - sigma) * max_residue * 2.0 * density * envelope / t_top;
    }
    return out;
}

double minkowski_content(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                         const std::optional<LatticeClass>& lattice)
{
    const LatticeClass cls = lattice ? *lattice : classify_lattice(system);
    if (cls.lattice()) {
        throw Error(ErrorCode::LatticeSystem, "lattice systems are not Minkowski measurable; use average_content");
    }
    return average_content(system, profiles);
}

double average_content(const IfsSystem& system, std::span<const GeneratorProfile> profiles)
{
    if (profiles.empty()) {
        throw Error(ErrorCode::InvalidArgument, "content needs at least one generator");
    }
    const int d = profile_dim(system, profiles);
    const double dim = moran_dimension(system);
    require_dimension_range(dim, d);
    return generator_mellin(profiles, cplx(dim, 0.0)).real() / moran_weight(system, dim);
}

double FourierCoeffs::eval(double x) const
{
    double sum = at(0).real();
    for (int n = 1; n <= n_max; ++n) {
        // a_{-n} = conj(a_n)
        sum += 2.0 * (at(n) * std::exp(cplx(0.0, n * period * x))).real();
    }
    return prefactor * sum;
}

double FourierCoeffs::truncation_bound() const
{
    const double tail = boost::math::trigamma(static_cast<double>(n_max) + 1.0);  // sum_{n>N} 1/n^2
    return prefactor * 2.0 * envelope_k * tail / (period * period);
}

FourierCoeffs lattice_fourier_coeffs(const IfsSystem& system, const LatticeClass& lattice,
                                     std::span<const GeneratorProfile> profiles, int n_max)
{
    if (!lattice.lattice()) {
        throw Error(ErrorCode::NotLattice, "Fourier coefficients need a lattice system");
    }
    if (n_max < 0) {
        throw Error(ErrorCode::InvalidArgument, "n_max must be nonnegative");
    }
    if (profiles.empty()) {
        throw Error(ErrorCode::InvalidArgument, "Fourier coefficients need at least one generator");
    }
    const int d = profile_dim(system, profiles);
    FourierCoeffs out;
    out.dimension = moran_dimension(system);
    require_dimension_range(out.dimension, d);
    out.period = lattice.period;
    out.prefactor = 1.0 / moran_weight(system, out.dimension);
    out.n_max = n_max;
    out.coeffs.resize(2 * static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const cplx a = generator_mellin(profiles, cplx(out.dimension, n * out.period));
        out.coeffs[n_max + n] = n == 0 ? cplx(a.real(), 0.0) : a;
        out.coeffs[n_max - n] = std::conj(out.coeffs[n_max + n]);
    }
    for (int n = 1; n <= 5; ++n) {
        const cplx s(out.dimension, n * out.period);
        out.envelope_k = std::max(out.envelope_k, std::abs(generator_mellin(profiles, s)) * std::norm(s));
    }
    return out;
}

double oscillation_amplitude(const FourierCoeffs& coeffs, int grid_points)
{
    if (grid_points < 1) {
        throw Error(ErrorCode::InvalidArgument, "grid_points must be positive");
    }
    const double span = 2.0 * M_PI / coeffs.period;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < grid_points; ++i) {
        const double h = coeffs.eval(span * i / grid_points);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return hi - lo;
}

TubeEstimate fractal_volume(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                            const HullSteiner& hull, double epsilon, std::span<const ComplexDimension> poles)
{
    if (hull.dim != system.ambient_dim()) {
        throw Error(ErrorCode::DimMismatch, "hull dimension differs from the ambient dimension");
    }
    TubeEstimate out = residue_tube_volume(system, profiles, poles, epsilon);
    out.value += hull.excess(epsilon);
    return out;
}

std::vector<double> log_epsilon_grid(double eps_min, double eps_max, int points)
{
    if (!(eps_min > 0.0 && eps_min < eps_max) || points < 2) {
        throw Error(ErrorCode::InvalidArgument, "need 0 < eps_min < eps_max and at least two points");
    }
    std::vector<double> grid(points);
    const double lo = std::log(eps_min);
    const double hi = std::log(eps_max);
    for (int i = 0; i < points; ++i) {
        grid[i] = std::exp(hi + (lo - hi) * i / (points - 1));
    }
    grid.front() = eps_max;
    grid.back() = eps_min;
    return grid;
}

std::vector<ComplexDimension> tube_poles(const IfsSystem& system, const LatticeClass& lattice, double t_max)
{
    if (lattice.lattice() && all_ratios_equal(system)) {
        return lattice_poles(system, lattice, static_cast<int>(std::floor(t_max / lattice.period)));
    }
    return find_poles(system, full_strip_window(system, t_max)).poles;
}

}  // namespace fractal_tube
