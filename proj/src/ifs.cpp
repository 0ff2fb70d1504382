#include "fractal_tube/ifs.hpp"

#include "fractal_tube/error.hpp"
#include "fractal_tube/oracle.hpp"
#include "numeric.hpp"
#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fractal_tube {

Vec2 Similitude::apply(Vec2 p) const
{
    if (reflect) {
        p.y = -p.y;
    }
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    return {ratio * (c * p.x - s * p.y) + translation.at(0),
            ratio * (s * p.x + c * p.y) + translation.at(1)};
}

double Similitude::apply(double x) const
{
    return ratio * (reflect ? -x : x) + translation.at(0);
}

double IfsSystem::ratio_power_sum(double s) const
{
    detail::CompensatedSum sum;
    for (double r : ratios_) {
        sum.add(std::pow(r, s));
    }
    return sum.value();
}

IfsSystem build_system(std::vector<Similitude> maps, int ambient_dim)
{
    if (maps.size() < 2) {
        throw Error(ErrorCode::EmptySystem, "an IFS needs at least two maps");
    }
    if (ambient_dim < 1) {
        throw Error(ErrorCode::DimMismatch, "ambient dimension must be >= 1");
    }
    const bool realized = maps.front().realized();
    for (const Similitude& m : maps) {
        if (!(m.ratio > 0.0 && m.ratio < 1.0)) {
            throw Error(ErrorCode::BadRatio, "contraction ratio " + std::to_string(m.ratio) + " not in (0,1)");
        }
        if (m.realized() != realized) {
            throw Error(ErrorCode::DimMismatch, "either all maps or none carry a geometric realization");
        }
        if (realized && m.translation.size() != static_cast<std::size_t>(ambient_dim)) {
            throw Error(ErrorCode::DimMismatch, "translation length differs from the ambient dimension");
        }
    }
    std::stable_sort(maps.begin(), maps.end(),
                     [](const Similitude& a, const Similitude& b) { return a.ratio > b.ratio; });

    IfsSystem system;
    system.dim_ = ambient_dim;
    system.ratios_.reserve(maps.size());
    for (const Similitude& m : maps) {
        system.ratios_.push_back(m.ratio);
    }
    system.maps_ = std::move(maps);
    return system;
}

IfsSystem ratio_system(const std::vector<double>& ratios, int ambient_dim)
{
    std::vector<Similitude> maps;
    maps.reserve(ratios.size());
    for (double r : ratios) {
        maps.push_back(Similitude{r, 0.0, false, {}});
    }
    return build_system(std::move(maps), ambient_dim);
}

double moran_dimension(const IfsSystem& system, double tol)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    }
    const auto residual = [&](double s) { return system.ratio_power_sum(s) - 1.0; };

    // sum r_j^0 = J >= 2 > 1, so lo = 0 brackets from above
    double hi = 1.0;
    while (residual(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 1e6) {
            throw Error(ErrorCode::NoConvergence, "could not bracket the Moran root");
        }
    }
    double root = 0.0;
    detail::bisect_decreasing(residual, 0.0, hi, tol, root);

    for (int step = 0; step < 2; ++step) {
        double deriv = 0.0;
        for (double r : system.ratios()) {
            deriv += std::pow(r, root) * std::log(r);
        }
        const double next = root - residual(root) / deriv;
        if (std::isfinite(next) && std::abs(residual(next)) <= std::abs(residual(root))) {
            root = next;
        }
    }
    if (!(std::abs(residual(root)) <= tol)) {
        throw Error(ErrorCode::NoConvergence, "Moran residual above tolerance; tolerance too small");
    }
    return root;
}

namespace {

struct Fraction {
    long num = 0;
    long den = 1;
};

// First continued-fraction convergent of x within tol whose denominator does
// not exceed max_den. Convergents are the only candidates that can be this
// close for tol < 1/(2 max_den^2).
bool rational_approximation(double x, double tol, long max_den, Fraction& out)
{
    long h_prev = 1, h = static_cast<long>(std::floor(x));
    long k_prev = 0, k = 1;
    double rem = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
            out = {h, k};
            return true;
        }
        if (rem < 1e-300) {
            break;
        }
        const double inv = 1.0 / rem;
        const long a = static_cast<long>(std::floor(inv));
        rem = inv - static_cast<double>(a);
        const long h_next = a * h + h_prev;
        const long k_next = a * k + k_prev;
        if (k_next > max_den || k_next <= 0) {
            break;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    return false;
}

LatticeClass lattice_from_exponents(const IfsSystem& system, std::vector<int> k)
{
    int g = 0;
    for (int v : k) {
        g = std::gcd(g, v);
    }
    for (int& v : k) {
        v /= g;
    }
    // least-squares base: log r_j ~ k_j log base
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        num += k[j] * std::log(system.ratios()[j]);
        den += static_cast<double>(k[j]) * k[j];
    }
    LatticeClass out;
    out.kind = LatticeKind::Lattice;
    out.base_r = std::exp(num / den);
    out.multipliers = std::move(k);
    out.period = 2.0 * M_PI / std::log(1.0 / out.base_r);
    return out;
}

}  // namespace

LatticeClass classify_lattice(const IfsSystem& system, double tol, int max_denominator)
{
    const auto& r = system.ratios();
    const double log_r1 = std::log(r.front());
    std::vector<Fraction> fractions;
    fractions.reserve(r.size());
    for (double rj : r) {
        Fraction f;
        if (!rational_approximation(std::log(rj) / log_r1, tol, max_denominator, f)) {
            return LatticeClass{};
        }
        fractions.push_back(f);
    }
    // log r_j = (num_j / den_j) log r_1; bring to a common denominator
    long common = 1;
    for (const Fraction& f : fractions) {
        common = std::lcm(common, f.den);
    }
    std::vector<int> k;
    k.reserve(fractions.size());
    for (const Fraction& f : fractions) {
        const long v = f.num * (common / f.den);
        if (v <= 0 || v > 1'000'000'000L) {
            return LatticeClass{};
        }
        k.push_back(static_cast<int>(v));
    }
    return lattice_from_exponents(system, std::move(k));
}

LatticeClass declared_lattice(const IfsSystem& system, double base_r, std::vector<int> exponents, double tol)
{
    if (!(base_r > 0.0 && base_r < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "lattice base must lie in (0,1)");
    }
    if (exponents.size() != system.size()) {
        throw Error(ErrorCode::InvalidArgument, "one lattice exponent per map is required");
    }
    for (int k : exponents) {
        if (k <= 0) {
            throw Error(ErrorCode::InvalidArgument, "lattice exponents must be positive integers");
        }
    }
    // match declared exponents to the sorted ratios by value
    std::sort(exponents.begin(), exponents.end());
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        const double expected = exponents[j] * std::log(base_r);
        const double actual = std::log(system.ratios()[j]);
        if (std::abs(actual - expected) > tol * std::abs(actual)) {
            throw Error(ErrorCode::InvalidArgument, "declared lattice does not reproduce the map ratios");
        }
    }
    return lattice_from_exponents(system, std::move(exponents));
}

WordEnumeration enumerate_words(const IfsSystem& system, double cutoff, std::size_t node_budget)
{
    if (!(cutoff > 0.0 && cutoff <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "word cutoff must lie in (0,1]");
    }
    WordEnumeration out;
    std::vector<WordEntry> stack;
    stack.push_back(WordEntry{{}, 1.0});
    std::size_t visited = 0;
    const auto& r = system.ratios();
    while (!stack.empty()) {
        WordEntry node = std::move(stack.back());
        stack.pop_back();
        if (++visited > node_budget) {
            throw Error(ErrorCode::BudgetExceeded, "word tree exceeds the node budget; raise the cutoff");
        }
        if (node.scale <= cutoff) {
            out.pruned.push_back(std::move(node));
            continue;
        }
        // push in reverse so map 1 is expanded first
        for (std::size_t j = r.size(); j-- > 0;) {
            WordEntry child{node.word, node.scale * r[j]};
            child.word.push_back(static_cast<int>(j) + 1);
            stack.push_back(std::move(child));
        }
        out.words.push_back(std::move(node));
    }
    return out;
}

namespace {

bool inside_or_on_convex(std::span<const Vec2> ccw, Vec2 p, double tol)
{
    const std::size_t n = ccw.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 edge = ccw[(i + 1) % n] - ccw[i];
        if (cross(edge, p - ccw[i]) < -tol * norm(edge)) {
            return false;
        }
    }
    return true;
}

int report_depth(const IfsSystem& system)
{
    // largest depth with J^(depth+1) cloud points under ~2e6, capped at 14
    int depth = 1;
    double count = static_cast<double>(system.size()) * system.size();
    while (depth < 14 && count * system.size() <= 2e6) {
        count *= system.size();
        ++depth;
    }
    return depth;
}

}  // namespace

ConditionReport condition_report(const IfsSystem& system, std::size_t samples, std::uint64_t seed)
{
    if (!system.planar()) {
        throw Error(ErrorCode::NoRealization, "condition report needs a planar realization");
    }
    ConditionReport report;
    report.notes.emplace_back("HEURISTIC: sampling-based evidence, not a proof");
    report.depth = report_depth(system);

    const std::vector<Vec2> cloud = attractor_points(system, report.depth);
    const std::vector<Vec2> hull = convex_hull(cloud);
    report.hull_area = hull.size() >= 3 ? signed_area(hull) : 0.0;
    const double diam = hull.size() >= 2 ? diameter(hull) : 0.0;
    if (hull.size() < 3 || report.hull_area <= 1e-12 * std::max(diam * diam, 1e-300)) {
        report.notes.emplace_back("degenerate convex hull: attractor is not two-dimensional");
        return report;
    }

    // images of the hull under each map, re-oriented counter-clockwise
    std::vector<std::vector<Vec2>> images;
    images.reserve(system.size());
    report.images_inside_hull = true;
    for (const Similitude& m : system.maps()) {
        std::vector<Vec2> img;
        img.reserve(hull.size());
        for (const Vec2& v : hull) {
            img.push_back(m.apply(v));
            report.images_inside_hull =
                report.images_inside_hull && inside_or_on_convex(hull, img.back(), 1e-9 * diam);
        }
        if (signed_area(img) < 0.0) {
            std::reverse(img.begin(), img.end());
        }
        images.push_back(std::move(img));
    }

    const Box2 box = bounding_box(hull);
    std::size_t in_hull = 0;
    std::size_t overlap = 0;
    std::size_t uncovered = 0;
    auto rng = detail::chunk_rng(seed, 0);
    const double margin = 1e-12 * diam;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec2 p = detail::uniform_point(rng, box);
        if (!strictly_inside_convex(hull, p, margin)) {
            continue;
        }
        ++in_hull;
        int covering = 0;
        bool touched = false;
        for (const auto& img : images) {
            if (strictly_inside_convex(img, p, margin)) {
                ++covering;
            }
            touched = touched || inside_or_on_convex(img, p, margin);
        }
        overlap += covering >= 2 ? 1 : 0;
        uncovered += touched ? 0 : 1;
    }
    const double per_sample = box.area() / static_cast<double>(std::max<std::size_t>(samples, 1));
    report.overlap_area = per_sample * static_cast<double>(overlap);
    report.tile_area = per_sample * static_cast<double>(uncovered);
    report.tileset = report.images_inside_hull && report.overlap_area <= 1e-3 * report.hull_area;
    report.nontrivial = report.tile_area >= 1e-3 * report.hull_area;

    const PointGrid grid(cloud, std::max(diam / std::sqrt(static_cast<double>(cloud.size())), 1e-12));
    const std::size_t boundary_count = std::clamp<std::size_t>(samples / 50, 64, 20000);
    for (const Vec2& b : sample_boundary(hull, boundary_count)) {
        report.max_boundary_gap = std::max(report.max_boundary_gap, grid.nearest_distance(b));
    }
    report.gap_threshold = 2.0 * std::pow(system.ratios().front(), report.depth) * diam;
    report.pearse_winter = report.max_boundary_gap <= report.gap_threshold;
    return report;
}

}  // namespace fractal_tube
