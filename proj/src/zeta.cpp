#include "fractal_tube/zeta.hpp"

#include "fractal_tube/error.hpp"
#include "numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace fractal_tube {

cplx dirichlet_f(const IfsSystem& system, cplx s)
{
    cplx sum = 0.0;
    for (double r : system.ratios()) {
        sum += std::exp(s * std::log(r));
    }
    return 1.0 - sum;
}

cplx dirichlet_f_prime(const IfsSystem& system, cplx s)
{
    cplx sum = 0.0;
    for (double r : system.ratios()) {
        const double log_r = std::log(r);
        sum -= log_r * std::exp(s * log_r);
    }
    return sum;
}

cplx zeta_value(const IfsSystem& system, cplx s, double pole_tol)
{
    const cplx f = dirichlet_f(system, s);
    if (std::abs(f) <= pole_tol) {
        std::ostringstream os;
        os << "s = " << s << " is within " << pole_tol << " of a pole";
        throw Error(ErrorCode::AtPole, os.str());
    }
    return 1.0 / f;
}

namespace {

struct ContourHit {};

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;

    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    double diameter() const { return std::hypot(width(), height()); }
    cplx center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
    bool contains(cplx z) const
    {
        return z.real() > re_lo && z.real() < re_hi && z.imag() > im_lo && z.imag() < im_hi;
    }
};

class ContourCounter {
public:
    ContourCounter(const IfsSystem& system, double zero_tol) : system_(system), zero_tol_(zero_tol)
    {
        double fastest = 1.0;
        for (double r : system.ratios()) {
            fastest = std::max(fastest, std::abs(std::log(r)));
        }
        // r_j^s turns by |log r_j| radians per unit of Im(s)
        base_step_ = std::min(0.1, 0.5 / fastest);
    }

    // Throws ContourHit if the boundary passes within zero_tol of a zero.
    int winding(const Rect& r) const
    {
        const std::array<cplx, 4> corners{cplx(r.re_lo, r.im_lo), cplx(r.re_hi, r.im_lo),
                                          cplx(r.re_hi, r.im_hi), cplx(r.re_lo, r.im_hi)};
        double total = 0.0;
        for (int e = 0; e < 4; ++e) {
            total += edge(corners[e], corners[(e + 1) % 4]);
        }
        const double turns = total / (2.0 * M_PI);
        const double rounded = std::round(turns);
        if (std::abs(turns - rounded) > 0.05) {
            throw ContourHit{};
        }
        return static_cast<int>(rounded);
    }

private:
    cplx eval(cplx s) const
    {
        const cplx v = dirichlet_f(system_, s);
        if (std::abs(v) <= zero_tol_) {
            throw ContourHit{};
        }
        return v;
    }

    double edge(cplx a, cplx b) const
    {
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / base_step_)));
        double total = 0.0;
        cplx prev = a;
        cplx f_prev = eval(a);
        for (int i = 1; i <= pieces; ++i) {
            const cplx next = a + (b - a) * (static_cast<double>(i) / pieces);
            const cplx f_next = eval(next);
            total += piece(prev, f_prev, next, f_next, 0);
            prev = next;
            f_prev = f_next;
        }
        return total;
    }

    // Phase change along [a, b], bisected until both halves turn by < pi/4.
    double piece(cplx a, cplx fa, cplx b, cplx fb, int depth) const
    {
        const cplx m = 0.5 * (a + b);
        const cplx fm = eval(m);
        const double d1 = std::arg(fm / fa);
        const double d2 = std::arg(fb / fm);
        if (std::abs(d1) < M_PI / 4 && std::abs(d2) < M_PI / 4) {
            return d1 + d2;
        }
        if (depth > 48) {
            throw ContourHit{};
        }
        return piece(a, fa, m, fm, depth + 1) + piece(m, fm, b, fb, depth + 1);
    }

    const IfsSystem& system_;
    double zero_tol_;
    double base_step_;
};

class PoleSearch {
public:
    PoleSearch(const IfsSystem& system, const PoleSearchOptions& options)
        : system_(system), options_(options), counter_(system, options.tol)
    {
    }

    void run(const Rect& top, int winding)
    {
        total_winding_ = winding;
        search(top, winding);
    }

    std::vector<cplx> zeros;
    std::vector<RectangleCount> rectangles;
    int total_winding() const { return total_winding_; }

    int count(const Rect& r) const { return counter_.winding(r); }

private:
    bool newton(const Rect& r, cplx& out) const
    {
        cplx s = r.center();
        for (int it = 0; it < 80; ++it) {
            const cplx f = dirichlet_f(system_, s);
            const cplx fp = dirichlet_f_prime(system_, s);
            if (std::abs(fp) < 1e-300) {
                return false;
            }
            const cplx step = f / fp;
            s -= step;
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
                return false;
            }
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s)) ||
                (std::abs(dirichlet_f(system_, s)) <= 0.01 * options_.tol && it > 1)) {
                break;
            }
        }
        out = s;
        return std::abs(dirichlet_f(system_, s)) <= options_.tol && r.contains(s);
    }

    void search(const Rect& r, int winding)
    {
        if (winding == 0) {
            return;
        }
        if (winding < 0) {
            throw Error(ErrorCode::ContourThroughZero, "negative winding number: f has no poles");
        }
        const double diam = r.diameter();
        if (winding == 1 && diam < options_.terminal_diameter) {
            cplx z;
            if (newton(r, z)) {
                zeros.push_back(z);
                rectangles.push_back({r.re_lo, r.re_hi, r.im_lo, r.im_hi, winding, 1});
                return;
            }
        }
        if (diam < options_.min_diameter) {
            std::ostringstream os;
            os << "rectangle around " << r.center() << " of diameter " << diam << " has winding number "
               << winding;
            throw Error(winding > 1 ? ErrorCode::MultiplicitySuspected : ErrorCode::NoConvergence, os.str());
        }

        static constexpr std::array<double, 7> kSplits{0.5, 0.5137, 0.4769, 0.5291, 0.4583, 0.5419, 0.4411};
        const bool split_re = r.width() >= r.height();
        for (int attempt = 0; attempt <= options_.max_retries && attempt < static_cast<int>(kSplits.size());
             ++attempt) {
            Rect a = r;
            Rect b = r;
            if (split_re) {
                const double cut = r.re_lo + kSplits[attempt] * r.width();
                a.re_hi = cut;
                b.re_lo = cut;
            } else {
                const double cut = r.im_lo + kSplits[attempt] * r.height();
                a.im_hi = cut;
                b.im_lo = cut;
            }
            int wa = 0;
            int wb = 0;
            try {
                wa = counter_.winding(a);
                wb = counter_.winding(b);
            } catch (const ContourHit&) {
                continue;
            }
            if (wa + wb != winding) {
                continue;
            }
            search(a, wa);
            search(b, wb);
            return;
        }
        throw Error(ErrorCode::ContourThroughZero, "subdivision lines keep passing through zeros");
    }

    const IfsSystem& system_;
    const PoleSearchOptions& options_;
    ContourCounter counter_;
    int total_winding_ = 0;
};

bool less_im_re(const ComplexDimension& a, const ComplexDimension& b)
{
    if (a.omega.imag() != b.omega.imag()) {
        return a.omega.imag() < b.omega.imag();
    }
    return a.omega.real() < b.omega.real();
}

}  // namespace

int winding_number(const IfsSystem& system, double re_lo, double re_hi, double im_lo, double im_hi,
                   double zero_tol)
{
    try {
        return ContourCounter(system, zero_tol).winding(Rect{re_lo, re_hi, im_lo, im_hi});
    } catch (const ContourHit&) {
        throw Error(ErrorCode::ContourThroughZero, "rectangle boundary passes through a zero of f");
    }
}

PoleSearchResult find_poles(const IfsSystem& system, const PoleWindow& window, const PoleSearchOptions& options)
{
    if (!(window.sigma_min < window.sigma_max) || !(window.t_max >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "pole window needs sigma_min < sigma_max and t_max >= 0");
    }
    // The lower edge sits just below the real axis: f is real there and its
    // only real zero is D, so the contour crosses the axis only at the sides.
    PoleSearch search(system, options);
    bool done = false;
    for (int attempt = 0; attempt <= options.max_retries && !done; ++attempt) {
        const double jitter = 1e-3 * attempt;
        const Rect top{window.sigma_min - 1.1 * jitter, window.sigma_max + 1.3 * jitter,
                       -0.0123 * (1.0 + 0.37 * attempt), window.t_max + 1.7 * jitter + 1e-3};
        int winding = 0;
        try {
            winding = search.count(top);
        } catch (const ContourHit&) {
            continue;
        }
        search.zeros.clear();
        search.rectangles.clear();
        search.run(top, winding);
        done = true;
    }
    if (!done) {
        throw Error(ErrorCode::ContourThroughZero, "window boundary passes through a zero after retries");
    }

    PoleSearchResult result;
    result.rectangles = search.rectangles;
    result.total_winding = search.total_winding();
    const double snap = 1e-9;
    for (cplx z : search.zeros) {
        if (std::abs(z.imag()) <= snap) {
            z = cplx(z.real(), 0.0);
            // one more real Newton step keeps the real root on the axis
            const cplx fp = dirichlet_f_prime(system, z);
            z -= dirichlet_f(system, z) / fp;
            z = cplx(z.real(), 0.0);
        } else if (z.imag() < 0.0) {
            continue;  // mirror image of a zero just above the axis
        }
        if (z.real() < window.sigma_min || z.real() > window.sigma_max || z.imag() > window.t_max) {
            continue;
        }
        const cplx fp = dirichlet_f_prime(system, z);
        const bool simple = std::abs(fp) > options.derivative_floor;
        const cplx residue = simple ? 1.0 / fp : cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
        result.poles.push_back({z, residue, simple});
        if (z.imag() != 0.0) {
            result.poles.push_back({std::conj(z), std::conj(residue), simple});
        }
    }
    std::sort(result.poles.begin(), result.poles.end(), less_im_re);
    return result;
}

std::vector<ComplexDimension> lattice_poles(const IfsSystem& system, const LatticeClass& lattice, int n_max)
{
    if (!lattice.lattice()) {
        throw Error(ErrorCode::NotLattice, "lattice poles requested for a non-lattice system");
    }
    if (n_max < 0) {
        throw Error(ErrorCode::InvalidArgument, "n_max must be nonnegative");
    }
    const double dim = moran_dimension(system);
    double weight = 0.0;
    for (double r : system.ratios()) {
        weight += std::pow(r, dim) * std::log(1.0 / r);
    }
    std::vector<ComplexDimension> poles;
    poles.reserve(2 * n_max + 1);
    for (int n = -n_max; n <= n_max; ++n) {
        poles.push_back({cplx(dim, n * lattice.period), cplx(1.0 / weight, 0.0), true});
    }
    return poles;
}

DTilde dtilde(const IfsSystem& system, double tol)
{
    const auto& r = system.ratios();
    if (r.size() == 2) {
        return {0.0, true};
    }
    const auto residual = [&](double s) {
        detail::CompensatedSum sum;
        for (std::size_t j = 0; j + 1 < r.size(); ++j) {
            sum.add(std::pow(r[j], s));
        }
        return sum.value() - 1.0;
    };
    double hi = 1.0;
    while (residual(hi) >= 0.0) {
        hi *= 2.0;
    }
    double root = 0.0;
    detail::bisect_decreasing(residual, 0.0, hi, tol, root);
    return {root, false};
}

double pole_real_part_lower_bound(const IfsSystem& system)
{
    const auto& r = system.ratios();
    const double r_min = r.back();
    int multiplicity = 0;
    std::vector<double> others;
    for (double x : r) {
        if (std::abs(x - r_min) <= 1e-15 * r_min) {
            ++multiplicity;
        } else {
            others.push_back(x);
        }
    }
    const double dim = moran_dimension(system);
    if (others.empty()) {
        return dim;  // f = 1 - J r^s vanishes only on Re(s) = D
    }
    // h > 0 excludes zeros; h is increasing as sigma decreases once positive
    const auto h = [&](double sigma) {
        double rest = 1.0;
        for (double x : others) {
            rest += std::pow(x, sigma);
        }
        return multiplicity * std::pow(r_min, sigma) - rest;
    };
    double hi = dim;
    double lo = dim - 0.5;
    while (h(lo) <= 0.0) {
        hi = lo;
        lo -= 0.5;
        if (lo < -1e4) {
            throw Error(ErrorCode::NoConvergence, "could not bound the pole strip");
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) > 0.0 ? lo : hi) = mid;
    }
    return lo;
}

PoleWindow full_strip_window(const IfsSystem& system, double t_max, double pad)
{
    return PoleWindow{pole_real_part_lower_bound(system) - pad, moran_dimension(system) + pad, t_max};
}

}  // namespace fractal_tube
