#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fractal_tube {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct Box2 {
    Vec2 lo;
    Vec2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return width() * height(); }
};

Box2 bounding_box(std::span<const Vec2> points);

/// Counter-clockwise convex hull (Andrew's monotone chain). Collinear points
/// on hull edges are dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Signed area, positive for counter-clockwise vertex order.
double signed_area(std::span<const Vec2> polygon);
double perimeter(std::span<const Vec2> polygon);
double diameter(std::span<const Vec2> polygon);

/// True when every turn of the closed polygon has the same orientation.
bool is_convex(std::span<const Vec2> polygon, double tol = 1e-12);

/// Strict interior test for a counter-clockwise convex polygon; points within
/// `margin` of an edge count as outside.
bool strictly_inside_convex(std::span<const Vec2> ccw_polygon, Vec2 p, double margin = 0.0);

/// Points spaced uniformly by arclength along the closed polygon boundary.
std::vector<Vec2> sample_boundary(std::span<const Vec2> polygon, std::size_t count);

/// Uniform bucket grid over a fixed point set. Cells are square with side
/// `cell`; queries are exact Euclidean distance checks over nearby cells.
class PointGrid {
public:
    PointGrid(std::span<const Vec2> points, double cell);

    /// True if some stored point lies within distance `radius` of q.
    bool any_within(Vec2 q, double radius) const;

    /// Distance from q to the closest stored point.
    double nearest_distance(Vec2 q) const;

    double cell() const { return cell_; }

private:
    long cell_x(double x) const { return static_cast<long>(std::floor((x - origin_.x) / cell_)); }
    long cell_y(double y) const { return static_cast<long>(std::floor((y - origin_.y) / cell_)); }
    bool cell_valid(long cx, long cy) const { return cx >= 0 && cy >= 0 && cx < nx_ && cy < ny_; }
    std::span<const Vec2> bucket(long cx, long cy) const;

    Vec2 origin_;
    double cell_;
    long nx_ = 0;
    long ny_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Vec2> sorted_;
};

}  // namespace fractal_tube
