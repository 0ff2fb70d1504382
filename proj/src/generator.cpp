#include "fractal_tube/generator.hpp"

#include "fractal_tube/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fractal_tube {

double GeneratorProfile::inner_volume(double eps) const
{
    return fractal_tube::inner_volume(*this, 1.0, eps);
}

double HullSteiner::value(double eps) const
{
    double v = 0.0;
    for (std::size_t m = a.size(); m-- > 0;) {
        v = v * eps + a[m];
    }
    return v;
}

double HullSteiner::excess(double eps) const
{
    return value(eps) - a.front();
}

GeneratorProfile profile_interval(double length)
{
    if (!(length > 0.0)) {
        throw Error(ErrorCode::NonPositiveLength, "interval generator length must be positive");
    }
    return GeneratorProfile{1, {2.0, -length}, 0.5 * length};
}

GeneratorProfile profile_triangle(Vec2 a, Vec2 b, Vec2 c)
{
    const double area = 0.5 * std::abs(cross(b - a, c - a));
    const double per = distance(a, b) + distance(b, c) + distance(c, a);
    if (!(area > 1e-12 * per * per)) {
        throw Error(ErrorCode::DegenerateTriangle, "triangle vertices are (nearly) collinear");
    }
    const double g = 2.0 * area / per;
    return GeneratorProfile{2, {-area / (g * g), per, -area}, g};
}

GeneratorProfile profile_from_kappa(std::vector<double> kappa, double inradius)
{
    if (kappa.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "kappa needs at least two coefficients");
    }
    if (!(inradius > 0.0)) {
        throw Error(ErrorCode::NonPositiveLength, "inradius must be positive");
    }
    if (!(kappa.back() < 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa_d must be negative (minus the generator volume)");
    }
    const int dim = static_cast<int>(kappa.size()) - 1;
    return GeneratorProfile{dim, std::move(kappa), inradius};
}

double inner_volume(const GeneratorProfile& profile, double scale, double eps)
{
    const int d = profile.dim;
    if (eps >= scale * profile.inradius) {
        return -std::pow(scale, d) * profile.kappa[d];
    }
    double v = 0.0;
    for (int m = 0; m < d; ++m) {
        v += profile.kappa[m] * std::pow(scale, m) * std::pow(eps, d - m);
    }
    return v;
}

HullSteiner hull_steiner_polygon(std::span<const Vec2> polygon)
{
    if (!is_convex(polygon)) {
        throw Error(ErrorCode::NonConvex, "hull polygon is not convex");
    }
    return HullSteiner{2, {std::abs(signed_area(polygon)), perimeter(polygon), M_PI}};
}

HullSteiner hull_steiner_interval(double length)
{
    if (!(length > 0.0)) {
        throw Error(ErrorCode::NonPositiveLength, "hull interval length must be positive");
    }
    return HullSteiner{1, {length, 2.0}};
}

std::complex<double> generator_mellin(const GeneratorProfile& profile, std::complex<double> s)
{
    const double log_g = std::log(profile.inradius);
    std::complex<double> sum = 0.0;
    for (int m = 0; m <= profile.dim; ++m) {
        const std::complex<double> shift = s - static_cast<double>(m);
        sum += profile.kappa[m] * std::exp(shift * log_g) / shift;
    }
    return sum;
}

std::complex<double> generator_mellin(std::span<const GeneratorProfile> profiles, std::complex<double> s)
{
    std::complex<double> sum = 0.0;
    for (const GeneratorProfile& p : profiles) {
        sum += generator_mellin(p, s);
    }
    return sum;
}

double content_numerator(const GeneratorProfile& profile, double dimension)
{
    const int d = profile.dim;
    if (!(dimension > d - 1 && dimension < d)) {
        throw Error(ErrorCode::DimensionOutOfRange, "content numerator needs d-1 < D < d");
    }
    return generator_mellin(profile, dimension).real();
}

namespace {

// Coefficients (ascending) of P(s) = sum_m kappa_m g^(d-m) prod_{k != m} (s - k).
std::vector<double> numerator_polynomial(const GeneratorProfile& profile)
{
    const int d = profile.dim;
    std::vector<double> total(d + 1, 0.0);
    for (int m = 0; m <= d; ++m) {
        std::vector<double> poly{1.0};
        for (int k = 0; k <= d; ++k) {
            if (k == m) {
                continue;
            }
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] += poly[i];
                next[i] -= k * poly[i];
            }
            poly = std::move(next);
        }
        const double w = profile.kappa[m] * std::pow(profile.inradius, d - m);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            total[i] += w * poly[i];
        }
    }
    return total;
}

}  // namespace

ProfileDiagnostics validate_profile(const GeneratorProfile& profile)
{
    ProfileDiagnostics diag;
    const int d = profile.dim;
    const double g = profile.inradius;

    double lhs = 0.0;
    for (int m = 0; m < d; ++m) {
        lhs += profile.kappa[m] * std::pow(g, d - m);
    }
    diag.continuity_error = std::abs(lhs + profile.kappa[d]) / std::abs(profile.kappa[d]);
    diag.continuity = diag.continuity_error <= 1e-9;

    constexpr int kSteps = 400;
    diag.monotone = true;
    double prev = 0.0;
    for (int i = 1; i <= kSteps; ++i) {
        const double eps = g * static_cast<double>(i) / kSteps * (1.0 - 1e-12);
        const double v = inner_volume(profile, 1.0, eps);
        const double slack = 1e-12 * profile.volume();
        if (v < -slack || v < prev - slack) {
            diag.monotone = false;
        }
        prev = v;
    }

    const std::vector<double> poly = numerator_polynomial(profile);
    double scale = 0.0;
    for (double c : poly) {
        scale = std::max(scale, std::abs(c));
    }
    diag.numerator_degree = 0;
    for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) {
        if (std::abs(poly[i]) > 1e-9 * scale) {
            diag.numerator_degree = i;
            break;
        }
    }

    // bounded |mellin| |s|^2 means no growth between the two windows
    const double sigma = d - 0.5;
    const auto window_max = [&](double t0, double t1) {
        double best = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double t = t0 + (t1 - t0) * i / 2000.0;
            const std::complex<double> s(sigma, t);
            best = std::max(best, std::abs(generator_mellin(profile, s)) * std::norm(s));
        }
        return best;
    };
    const double low = window_max(90.0, 100.0);
    const double high = window_max(900.0, 1000.0);
    diag.decay_growth = low > 0.0 ? high / low : 0.0;
    diag.decay = diag.decay_growth <= 3.0;
    return diag;
}

std::string ProfileDiagnostics::summary() const
{
    std::ostringstream os;
    os << "continuity=" << (continuity ? "pass" : "fail") << " (rel err " << continuity_error << ")"
       << " monotone=" << (monotone ? "pass" : "fail")
       << " decay=" << (decay ? "pass" : "fail") << " (growth " << decay_growth << ")"
       << " deg P=" << numerator_degree;
    return os.str();
}

}  // namespace fractal_tube
