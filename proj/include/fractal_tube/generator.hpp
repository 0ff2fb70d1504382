#pragma once

#include "fractal_tube/geometry.hpp"

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace fractal_tube {

/// Diphase generator: inner eps-neighbourhood volume
///   V(eps) = sum_{m<d} kappa[m] eps^(d-m)   for eps < inradius,
///   V(eps) = -kappa[d]                      for eps >= inradius.
struct GeneratorProfile {
    int dim = 1;
    std::vector<double> kappa;  // kappa_0 .. kappa_d
    double inradius = 0.0;

    double volume() const { return -kappa.back(); }
    /// Inner-neighbourhood volume of the unscaled generator.
    double inner_volume(double eps) const;
};

/// Steiner polynomial V_C(eps) = sum_m a[m] eps^m of a convex hull.
struct HullSteiner {
    int dim = 1;
    std::vector<double> a;  // a_0 .. a_d

    double value(double eps) const;
    /// V_C(eps) - V_C(0)
    double excess(double eps) const;
};

/// Interval of length l: kappa = (2, -l), inradius l/2.
GeneratorProfile profile_interval(double length);

/// Open triangle. Its inner parallel body at distance eps is the similar
/// triangle scaled by (g - eps)/g, so V(eps) = Area (1 - (1 - eps/g)^2).
GeneratorProfile profile_triangle(Vec2 a, Vec2 b, Vec2 c);

/// User-supplied coefficients; dim = kappa.size() - 1. Only the shape is
/// checked here, validate_profile reports on the analytic constraints.
GeneratorProfile profile_from_kappa(std::vector<double> kappa, double inradius);

/// V^-_{rG}(eps): sum_m kappa_m r^m eps^(d-m) below r*g, -r^d kappa_d above.
double inner_volume(const GeneratorProfile& profile, double scale, double eps);

HullSteiner hull_steiner_polygon(std::span<const Vec2> polygon);
HullSteiner hull_steiner_interval(double length);

/// sum_{m=0}^{d} kappa_m g^(s-m) / (s-m): the Mellin transform of
/// V^-_G(eps) / eps^d, analytic away from s = 0..d.
std::complex<double> generator_mellin(const GeneratorProfile& profile, std::complex<double> s);
std::complex<double> generator_mellin(std::span<const GeneratorProfile> profiles, std::complex<double> s);

/// generator_mellin at real D with d-1 < D < d; strictly positive for a valid
/// profile. Throws DimensionOutOfRange outside that interval.
double content_numerator(const GeneratorProfile& profile, double dimension);

struct ProfileDiagnostics {
    bool continuity = false;   // sum_{m<d} kappa_m g^(d-m) == -kappa_d
    bool monotone = false;     // V nonnegative and nondecreasing on (0, g]
    bool decay = false;        // |mellin(s)| |s|^2 bounded on a vertical line
    double continuity_error = 0.0;
    double decay_growth = 0.0; // max over |t| in [900,1000] / max over [90,100]
    int numerator_degree = 0;  // degree of P(s) in mellin = g^(s-d) P(s)/Q(s)

    bool ok() const { return continuity && monotone && decay; }
    std::string summary() const;
};

ProfileDiagnostics validate_profile(const GeneratorProfile& profile);

}  // namespace fractal_tube
