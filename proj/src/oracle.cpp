#include "fractal_tube/oracle.hpp"

#include "fractal_tube/error.hpp"
#include "numeric.hpp"
#include "sampling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fractal_tube {

namespace {

struct RatioGroup {
    double ratio;
    double count;
};

std::vector<RatioGroup> group_ratios(const IfsSystem& system)
{
    std::vector<RatioGroup> groups;
    for (double r : system.ratios()) {
        if (!groups.empty() && std::abs(groups.back().ratio - r) <= 1e-15 * r) {
            groups.back().count += 1.0;
        } else {
            groups.push_back({r, 1.0});
        }
    }
    return groups;
}

struct Node {
    double scale;
    double weight;
};

}  // namespace

double tiling_volume_direct(const IfsSystem& system, std::span<const GeneratorProfile> profiles, double epsilon,
                            std::size_t node_budget)
{
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    }
    const int d = system.ambient_dim();
    const double sum_rd = system.ratio_power_sum(d);
    if (!(sum_rd < 1.0)) {
        throw Error(ErrorCode::TilingNotSummable, "sum_j r_j^d >= 1: the tiling has infinite volume");
    }
    const std::vector<RatioGroup> groups = group_ratios(system);
    std::vector<double> eps_pow(d + 1);
    for (int k = 0; k <= d; ++k) {
        eps_pow[k] = std::pow(epsilon, k);
    }

    std::size_t visited = 0;
    detail::CompensatedSum total;
    std::vector<Node> stack;
    for (const GeneratorProfile& q : profiles) {
        if (q.dim != d) {
            throw Error(ErrorCode::DimMismatch, "generator dimension differs from the ambient dimension");
        }
        const double cutoff = epsilon / q.inradius;
        detail::CompensatedSum body;
        detail::CompensatedSum saturated;  // sum of weight * r_w^d over pruned roots
        stack.assign(1, Node{1.0, 1.0});
        while (!stack.empty()) {
            const Node node = stack.back();
            stack.pop_back();
            if (++visited > node_budget) {
                std::ostringstream os;
                os << "word tree exceeds " << node_budget << " nodes at eps = " << epsilon;
                throw Error(ErrorCode::BudgetExceeded, os.str());
            }
            if (node.scale <= cutoff) {
                saturated.add(node.weight * std::pow(node.scale, d));
                continue;
            }
            double v = 0.0;
            double r_pow = 1.0;
            for (int m = 0; m < d; ++m) {
                v += q.kappa[m] * r_pow * eps_pow[d - m];
                r_pow *= node.scale;
            }
            body.add(node.weight * v);
            for (const RatioGroup& g : groups) {
                stack.push_back({node.scale * g.ratio, node.weight * g.count});
            }
        }
        total.add(body.value());
        total.add(-q.kappa[d] * saturated.value() / (1.0 - sum_rd));
    }
    return total.value();
}

Vec2 fixed_point(const Similitude& map)
{
    if (map.translation.size() != 2) {
        throw Error(ErrorCode::NoRealization, "fixed point needs a planar map");
    }
    // x = A x + t with A = r R(theta) M
    const double c = map.ratio * std::cos(map.rotation);
    const double s = map.ratio * std::sin(map.rotation);
    const double sign = map.reflect ? -1.0 : 1.0;
    const double a11 = 1.0 - c;
    const double a12 = s * sign;
    const double a21 = -s;
    const double a22 = 1.0 - c * sign;
    const double det = a11 * a22 - a12 * a21;
    const double tx = map.translation[0];
    const double ty = map.translation[1];
    return {(a22 * tx - a12 * ty) / det, (a11 * ty - a21 * tx) / det};
}

std::vector<Vec2> attractor_points(const IfsSystem& system, int depth, std::size_t point_budget)
{
    if (!system.planar()) {
        throw Error(ErrorCode::NoRealization, "attractor points need a planar realization");
    }
    if (depth < 0) {
        throw Error(ErrorCode::InvalidArgument, "depth must be nonnegative");
    }
    const double count = std::pow(static_cast<double>(system.size()), depth + 1);
    if (count > static_cast<double>(point_budget)) {
        std::ostringstream os;
        os << "attractor cloud of " << count << " points exceeds the budget " << point_budget;
        throw Error(ErrorCode::BudgetExceeded, os.str());
    }
    std::vector<Vec2> points;
    points.reserve(static_cast<std::size_t>(count));
    for (const Similitude& m : system.maps()) {
        points.push_back(fixed_point(m));
    }
    std::vector<Vec2> next;
    for (int level = 0; level < depth; ++level) {
        next.clear();
        next.reserve(points.size() * system.size());
        for (const Similitude& m : system.maps()) {
            for (const Vec2& p : points) {
                next.push_back(m.apply(p));
            }
        }
        points.swap(next);
    }
    return points;
}

std::vector<Vec2> attractor_hull(const IfsSystem& system, int depth)
{
    return convex_hull(attractor_points(system, depth));
}

McEstimate mc_point_set_volume(std::span<const Vec2> points, double epsilon, std::size_t samples,
                               std::uint64_t seed)
{
    if (points.empty() || !(epsilon > 0.0) || samples == 0) {
        throw Error(ErrorCode::InvalidArgument, "need points, eps > 0 and at least one sample");
    }
    Box2 box = bounding_box(points);
    box.lo = box.lo - Vec2{epsilon, epsilon};
    box.hi = box.hi + Vec2{epsilon, epsilon};
    // cells of side eps/2 fit inside an eps-ball around any of their points
    const PointGrid grid(points, 0.5 * epsilon);

    constexpr std::size_t kChunk = 1 << 16;
    std::size_t hits = 0;
    for (std::size_t start = 0, chunk = 0; start < samples; start += kChunk, ++chunk) {
        auto rng = detail::chunk_rng(seed, chunk);
        const std::size_t n = std::min(kChunk, samples - start);
        for (std::size_t i = 0; i < n; ++i) {
            hits += grid.any_within(detail::uniform_point(rng, box), epsilon) ? 1 : 0;
        }
    }
    const double n = static_cast<double>(samples);
    const double p = static_cast<double>(hits) / n;
    const double variance = samples > 1 ? p * (1.0 - p) * n / (n - 1.0) : 0.0;
    McEstimate out;
    out.mean = box.area() * p;
    out.std_error = box.area() * std::sqrt(variance / n);
    out.samples = samples;
    out.seed = seed;
    return out;
}

McEstimate mc_neighborhood_volume(const IfsSystem& system, int depth, double epsilon, std::size_t samples,
                                  std::uint64_t seed)
{
    const std::vector<Vec2> cloud = attractor_points(system, depth);
    const double diam = diameter(convex_hull(cloud));
    const double error = std::pow(system.ratios().front(), depth) * diam;
    if (!(epsilon > 2.0 * error)) {
        std::ostringstream os;
        os << "eps = " << epsilon << " must exceed twice the cloud error " << error << "; raise the depth";
        throw Error(ErrorCode::EpsilonTooSmall, os.str());
    }
    return mc_point_set_volume(cloud, epsilon, samples, seed);
}

double average_content_numeric(const IfsSystem& system, std::span<const GeneratorProfile> profiles, double t_max,
                               int grid, std::size_t node_budget)
{
    if (!(t_max > 1.0) || grid < 2) {
        throw Error(ErrorCode::InvalidArgument, "need T > 1 and at least two nodes");
    }
    const double dim = moran_dimension(system);
    const int d = system.ambient_dim();
    const double length = std::log(t_max);
    const double h = length / (grid - 1);
    detail::CompensatedSum sum;
    for (int i = 0; i < grid; ++i) {
        const double x = h * i;
        const double value = std::exp(-x * (dim - d)) * tiling_volume_direct(system, profiles, std::exp(-x), node_budget);
        sum.add((i == 0 || i == grid - 1) ? 0.5 * value : value);
    }
    return sum.value() * h / length;
}

PearseWinterCheck pearse_winter_residual(const IfsSystem& system, std::span<const GeneratorProfile> profiles,
                                         const HullSteiner& hull, double epsilon, const McParams& params)
{
    PearseWinterCheck out;
    out.mc = mc_neighborhood_volume(system, params.depth, epsilon, params.samples, params.seed);
    out.predicted = tiling_volume_direct(system, profiles, epsilon) + hull.excess(epsilon);
    out.residual = std::abs(out.mc.mean - out.predicted) / out.mc.std_error;
    return out;
}

double mellin_quadrature(const GeneratorProfile& profile, double s)
{
    const int d = profile.dim;
    if (!(s > d - 1 && s < d)) {
        throw Error(ErrorCode::DimensionOutOfRange, "quadrature needs d-1 < s < d");
    }
    const double g = profile.inradius;
    // eps = g u^beta removes the u^(s-d) endpoint singularity
    const double beta = 1.0 / (s - d + 1.0);
    const auto integrand = [&](double u) {
        double v = 0.0;
        for (int m = 0; m < d; ++m) {
            v += profile.kappa[m] * std::pow(g, s - m) * beta * std::pow(u, beta * (s - m) - 1.0);
        }
        return v;
    };
    const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-14);
    const double outer = -profile.kappa[d] * std::pow(g, s - d) / (d - s);
    return inner + outer;
}

}  // namespace fractal_tube
