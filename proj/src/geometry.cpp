#include "fractal_tube/geometry.hpp"

#include "fractal_tube/error.hpp"

#include <algorithm>
#include <limits>

namespace fractal_tube {

Box2 bounding_box(std::span<const Vec2> points)
{
    if (points.empty()) {
        throw Error(ErrorCode::InvalidArgument, "bounding box of an empty point set");
    }
    Box2 box{points.front(), points.front()};
    for (const Vec2& p : points) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    return box;
}

namespace {

// Non-left turn, treating rounding-level collinearity as collinear.
bool not_left(Vec2 o, Vec2 a, Vec2 b)
{
    return cross(a - o, b - o) <= 1e-12 * norm(a - o) * norm(b - o);
}

}  // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> points)
{
    std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) {
        return points;
    }

    std::vector<Vec2> hull(2 * points.size());
    std::size_t k = 0;
    for (const Vec2& p : points) {
        while (k >= 2 && not_left(hull[k - 2], hull[k - 1], p)) {
            --k;
        }
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
        while (k >= lower && not_left(hull[k - 2], hull[k - 1], *it)) {
            --k;
        }
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

double signed_area(std::span<const Vec2> polygon)
{
    double twice = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(polygon[i], polygon[(i + 1) % n]);
    }
    return 0.5 * twice;
}

double perimeter(std::span<const Vec2> polygon)
{
    double total = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        total += distance(polygon[i], polygon[(i + 1) % n]);
    }
    return total;
}

double diameter(std::span<const Vec2> polygon)
{
    double best = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        for (std::size_t j = i + 1; j < polygon.size(); ++j) {
            best = std::max(best, distance(polygon[i], polygon[j]));
        }
    }
    return best;
}

bool is_convex(std::span<const Vec2> polygon, double tol)
{
    const std::size_t n = polygon.size();
    if (n < 3) {
        return false;
    }
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[(i + 1) % n];
        const Vec2 c = polygon[(i + 2) % n];
        const double turn = cross(b - a, c - b);
        const double scale = norm(b - a) * norm(c - b);
        if (std::abs(turn) <= tol * scale) {
            continue;
        }
        const int s = turn > 0.0 ? 1 : -1;
        if (sign == 0) {
            sign = s;
        } else if (s != sign) {
            return false;
        }
    }
    return sign != 0;
}

bool strictly_inside_convex(std::span<const Vec2> ccw_polygon, Vec2 p, double margin)
{
    const std::size_t n = ccw_polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = ccw_polygon[i];
        const Vec2 edge = ccw_polygon[(i + 1) % n] - a;
        // signed distance to the supporting line, positive inside
        if (cross(edge, p - a) <= margin * norm(edge)) {
            return false;
        }
    }
    return true;
}

std::vector<Vec2> sample_boundary(std::span<const Vec2> polygon, std::size_t count)
{
    std::vector<Vec2> out;
    const double total = perimeter(polygon);
    if (count == 0 || polygon.size() < 2 || total <= 0.0) {
        return out;
    }
    out.reserve(count);
    const double step = total / static_cast<double>(count);
    std::size_t edge = 0;
    double edge_start = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double s = step * static_cast<double>(i);
        double len = distance(polygon[edge], polygon[(edge + 1) % polygon.size()]);
        while (s > edge_start + len && edge + 1 < polygon.size()) {
            edge_start += len;
            ++edge;
            len = distance(polygon[edge], polygon[(edge + 1) % polygon.size()]);
        }
        const double t = len > 0.0 ? std::clamp((s - edge_start) / len, 0.0, 1.0) : 0.0;
        const Vec2 a = polygon[edge];
        const Vec2 b = polygon[(edge + 1) % polygon.size()];
        out.push_back(a + t * (b - a));
    }
    return out;
}

PointGrid::PointGrid(std::span<const Vec2> points, double cell) : cell_(cell)
{
    if (points.empty() || !(cell > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "point grid needs points and a positive cell size");
    }
    const Box2 box = bounding_box(points);
    origin_ = box.lo;
    nx_ = static_cast<long>(std::floor(box.width() / cell_)) + 1;
    ny_ = static_cast<long>(std::floor(box.height() / cell_)) + 1;
    constexpr long kMaxCells = 1L << 26;
    if (nx_ > kMaxCells / std::max(ny_, 1L)) {
        throw Error(ErrorCode::BudgetExceeded, "point grid too fine for the point extent");
    }

    // counting sort of points into cells
    const std::size_t ncells = static_cast<std::size_t>(nx_ * ny_);
    std::vector<std::size_t> cell_of(points.size());
    offsets_.assign(ncells + 1, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const long cx = std::clamp(cell_x(points[i].x), 0L, nx_ - 1);
        const long cy = std::clamp(cell_y(points[i].y), 0L, ny_ - 1);
        cell_of[i] = static_cast<std::size_t>(cy * nx_ + cx);
        ++offsets_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < ncells; ++c) {
        offsets_[c + 1] += offsets_[c];
    }
    sorted_.resize(points.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
        sorted_[fill[cell_of[i]]++] = points[i];
    }
}

std::span<const Vec2> PointGrid::bucket(long cx, long cy) const
{
    const auto c = static_cast<std::size_t>(cy * nx_ + cx);
    return std::span<const Vec2>(sorted_).subspan(offsets_[c], offsets_[c + 1] - offsets_[c]);
}

bool PointGrid::any_within(Vec2 q, double radius) const
{
    const double r2 = radius * radius;
    const long cx0 = cell_x(q.x - radius);
    const long cx1 = cell_x(q.x + radius);
    const long cy0 = cell_y(q.y - radius);
    const long cy1 = cell_y(q.y + radius);
    const long qx = cell_x(q.x);
    const long qy = cell_y(q.y);

    // a non-empty home cell whose diagonal fits in the radius settles it
    if (cell_valid(qx, qy) && cell_ * std::sqrt(2.0) <= radius && !bucket(qx, qy).empty()) {
        return true;
    }
    for (long cy = std::max(cy0, 0L); cy <= std::min(cy1, ny_ - 1); ++cy) {
        const double dy = cy > qy ? origin_.y + cy * cell_ - q.y
                        : cy < qy ? q.y - (origin_.y + (cy + 1) * cell_)
                                  : 0.0;
        for (long cx = std::max(cx0, 0L); cx <= std::min(cx1, nx_ - 1); ++cx) {
            const double dx = cx > qx ? origin_.x + cx * cell_ - q.x
                            : cx < qx ? q.x - (origin_.x + (cx + 1) * cell_)
                                      : 0.0;
            if (dx * dx + dy * dy > r2) {
                continue;
            }
            for (const Vec2& p : bucket(cx, cy)) {
                const double ex = p.x - q.x;
                const double ey = p.y - q.y;
                if (ex * ex + ey * ey <= r2) {
                    return true;
                }
            }
        }
    }
    return false;
}

double PointGrid::nearest_distance(Vec2 q) const
{
    const long qx = std::clamp(cell_x(q.x), 0L, nx_ - 1);
    const long qy = std::clamp(cell_y(q.y), 0L, ny_ - 1);
    double best2 = std::numeric_limits<double>::infinity();
    const long max_ring = std::max(nx_, ny_);
    for (long ring = 0; ring <= max_ring; ++ring) {
        for (long cy = qy - ring; cy <= qy + ring; ++cy) {
            for (long cx = qx - ring; cx <= qx + ring; ++cx) {
                if (std::max(std::abs(cx - qx), std::abs(cy - qy)) != ring || !cell_valid(cx, cy)) {
                    continue;
                }
                for (const Vec2& p : bucket(cx, cy)) {
                    const double ex = p.x - q.x;
                    const double ey = p.y - q.y;
                    best2 = std::min(best2, ex * ex + ey * ey);
                }
            }
        }
        // every unvisited cell is at least `ring` cells away from q's cell
        const double reach = static_cast<double>(ring) * cell_;
        if (best2 < reach * reach) {
            break;
        }
    }
    return std::sqrt(best2);
}

}  // namespace fractal_tube
