#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "obbkit/error.hpp"

namespace obbkit::geom {

/// Absolute tolerance for geometric predicates, in coordinate units.
inline constexpr double kEps = 1e-9;

/// Tolerances for rectangle validation (OBB invariants).
inline constexpr double kRectAngleTol = 1e-6;   // radians off perpendicular
inline constexpr double kRectEdgeRelTol = 1e-6; // relative opposite-edge mismatch
inline constexpr double kCornerNoiseTol = 2e-6; // absolute per-corner noise, covers
                                                // 6-fractional-digit file quantization

inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& p) const { return {x + p.x, y + p.y}; }
    Point2 operator-(const Point2& p) const { return {x - p.x, y - p.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }

/// Cross product of (a - o) x (b - o): > 0 when o->a->b turns left.
inline double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double norm(const Point2& p) { return std::hypot(p.x, p.y); }
inline double dist(const Point2& a, const Point2& b) { return norm(b - a); }
inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Fixed-length representative point set for one object.
class RepPoints {
public:
    static constexpr std::size_t kDefaultK = 9;

    explicit RepPoints(std::vector<Point2> pts);

    std::span<const Point2> points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    const Point2& operator[](std::size_t i) const { return pts_[i]; }
    Point2& operator[](std::size_t i) { return pts_[i]; }

private:
    std::vector<Point2> pts_;
};

/// Convex polygon with counter-clockwise vertices. A collinear input set is
/// representable as a degenerate polygon (< 3 vertices, area 0).
struct ConvexPolygon {
    std::vector<Point2> vertices;
    bool degenerate = false;
};

/// Oriented bounding box stored as 4 counter-clockwise rectangle corners.
class OBB {
public:
    /// Validates rectangle-ness; normalizes winding to counter-clockwise.
    static OBB from_corners(const std::array<Point2, 4>& corners);

    const std::array<Point2, 4>& corners() const { return corners_; }
    std::span<const Point2> points() const { return corners_; }

    Point2 center() const;
    double area() const;

private:
    OBB() = default;
    std::array<Point2, 4> corners_{};
};

/// Five-parameter form: center, shorter edge w, longer edge h, and the angle
/// of the longer edge against +x, in [-pi/2, pi/2).
struct FiveParam {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
    double theta = 0.0;
};

/// Convex hull (Jarvis march), counter-clockwise, interior and collinear
/// points removed. Collinear input yields a degenerate polygon, not an error.
ConvexPolygon convex_hull(std::span<const Point2> points);

/// Hull as indices into the input, CCW from the bottom-most vertex.
/// Coincident inputs collapse to their first occurrence; fewer than 3
/// indices means the input was degenerate.
std::vector<std::size_t> convex_hull_indices(std::span<const Point2> points);

/// Nonnegative shoelace area; 0 for degenerate polygons.
double polygon_area(const ConvexPolygon& poly);

/// Signed-area containment test: p inside or on the boundary within eps.
bool polygon_contains(const ConvexPolygon& poly, const Point2& p, double eps = kEps);

/// Sutherland-Hodgman clip of a by b. nullopt when the overlap is empty or
/// has zero area.
std::optional<ConvexPolygon> convex_intersect(const ConvexPolygon& a, const ConvexPolygon& b);

/// Overlap area of two convex polygons (0 when disjoint).
double intersection_area(const ConvexPolygon& a, const ConvexPolygon& b);

/// Minimum-area enclosing rectangle via rotating calipers over hull edges.
/// Area ties are broken by the smallest nonnegative edge angle. Throws
/// DegenerateHull for collinear input.
OBB min_area_rect(std::span<const Point2> points);

/// Rotated-box IoU in [0, 1].
double obb_iou(const OBB& a, const OBB& b);

/// Canonical five-parameter encoding (w <= h, theta in [-pi/2, pi/2)); for
/// squares theta is taken in [-pi/4, pi/4).
FiveParam to_five_param(const OBB& obb);

/// Rebuilds the corner form; round trip reproduces the corner set up to
/// cyclic relabeling.
OBB to_obb(const FiveParam& fp);

ConvexPolygon to_polygon(const OBB& obb);

/// Wraps an angle into [-pi/2, pi/2) modulo pi.
double wrap_half_pi(double theta);

}  // namespace obbkit::geom
