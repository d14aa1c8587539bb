#include "obbkit/geom.hpp"

#include <algorithm>
#include <limits>

namespace obbkit::geom {

namespace {

void require_finite(std::span<const Point2> points, const char* op) {
    for (const auto& p : points) {
        if (!is_finite(p)) {
            throw Error(Errc::InvalidCoordinate, std::string(op) + ": non-finite coordinate");
        }
    }
}

// Drops consecutive near-duplicates and collapses collinear runs; the result
// is strictly convex or has fewer than 3 vertices.
std::vector<Point2> tidy_ring(std::vector<Point2> ring) {
    auto dedupe = [](std::vector<Point2>& v) {
        std::vector<Point2> out;
        for (const auto& p : v) {
            if (out.empty() || dist(out.back(), p) > kEps) out.push_back(p);
        }
        while (out.size() > 1 && dist(out.front(), out.back()) <= kEps) out.pop_back();
        v = std::move(out);
    };
    dedupe(ring);
    bool changed = true;
    while (changed && ring.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point2& a = ring[(i + ring.size() - 1) % ring.size()];
            const Point2& b = ring[i];
            const Point2& c = ring[(i + 1) % ring.size()];
            if (cross(a, b, c) <= kEps) {
                ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
        if (changed) dedupe(ring);
    }
    return ring;
}

// Gift wrapping over representative indices. Returns original input indices,
// CCW from the bottom-most (then left-most) vertex; < 3 means degenerate.
std::vector<std::size_t> hull_indices_impl(std::span<const Point2> points) {
    // Unique points only; coincident inputs collapse to the first occurrence.
    std::vector<std::size_t> rep;
    rep.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dup = false;
        for (std::size_t j : rep) {
            if (dist(points[i], points[j]) <= kEps) {
                dup = true;
                break;
            }
        }
        if (!dup) rep.push_back(i);
    }

    if (rep.size() == 1) return rep;
    auto pt = [&](std::size_t r) -> const Point2& { return points[rep[r]]; };

    std::size_t start = 0;
    for (std::size_t r = 1; r < rep.size(); ++r) {
        if (pt(r).y < pt(start).y || (pt(r).y == pt(start).y && pt(r).x < pt(start).x)) {
            start = r;
        }
    }

    // Advance to the candidate with no point on its right, preferring the
    // farthest among collinear candidates.
    std::vector<std::size_t> ring;
    std::size_t cur = start;
    do {
        ring.push_back(cur);
        std::size_t next = (cur + 1) % rep.size();
        for (std::size_t r = 0; r < rep.size(); ++r) {
            if (r == cur || r == next) continue;
            double c = cross(pt(cur), pt(next), pt(r));
            if (c < -kEps) {
                next = r;
            } else if (std::abs(c) <= kEps && dist(pt(cur), pt(r)) > dist(pt(cur), pt(next))) {
                next = r;
            }
        }
        cur = next;
        if (ring.size() > rep.size()) break;
    } while (cur != start);

    // Collapse collinear runs left by the tolerance; keeps strict convexity.
    bool changed = true;
    while (changed && ring.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point2& a = pt(ring[(i + ring.size() - 1) % ring.size()]);
            const Point2& b = pt(ring[i]);
            const Point2& c = pt(ring[(i + 1) % ring.size()]);
            if (cross(a, b, c) <= kEps) {
                ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }

    std::vector<std::size_t> out;
    out.reserve(ring.size());
    for (std::size_t r : ring) out.push_back(rep[r]);
    return out;
}

}  // namespace

RepPoints::RepPoints(std::vector<Point2> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 3) {
        throw Error(Errc::EmptyInput, "RepPoints: need at least 3 points");
    }
    require_finite(pts_, "RepPoints");
}

std::vector<std::size_t> convex_hull_indices(std::span<const Point2> points) {
    if (points.empty()) throw Error(Errc::EmptyInput, "convex_hull: empty point set");
    require_finite(points, "convex_hull");
    return hull_indices_impl(points);
}

ConvexPolygon convex_hull(std::span<const Point2> points) {
    auto idx = convex_hull_indices(points);
    std::vector<Point2> verts;
    verts.reserve(idx.size());
    for (std::size_t i : idx) verts.push_back(points[i]);
    bool degenerate = verts.size() < 3;
    return {std::move(verts), degenerate};
}

double polygon_area(const ConvexPolygon& poly) {
    if (poly.degenerate || poly.vertices.size() < 3) return 0.0;
    double s = 0.0;
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        s += cross(a, b);
    }
    return std::abs(s) * 0.5;
}

bool polygon_contains(const ConvexPolygon& poly, const Point2& p, double eps) {
    const auto& v = poly.vertices;
    if (v.empty()) return false;
    if (v.size() == 1) return dist(v[0], p) <= eps;
    if (v.size() == 2) {
        // Degenerate segment: distance to it.
        Point2 d = v[1] - v[0];
        double len2 = dot(d, d);
        double t = len2 > 0 ? std::clamp(dot(p - v[0], d) / len2, 0.0, 1.0) : 0.0;
        return dist(v[0] + d * t, p) <= eps;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        double len = dist(a, b);
        if (len <= kEps) continue;
        if (cross(a, b, p) < -eps * len) return false;
    }
    return true;
}

std::optional<ConvexPolygon> convex_intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (a.degenerate || b.degenerate) return std::nullopt;
    if (a.vertices.size() < 3 || b.vertices.size() < 3) return std::nullopt;

    std::vector<Point2> cur = a.vertices;
    const auto& clip = b.vertices;
    for (std::size_t e = 0; e < clip.size() && cur.size() >= 2; ++e) {
        const Point2& p = clip[e];
        const Point2& q = clip[(e + 1) % clip.size()];
        double len = dist(p, q);
        if (len <= kEps) continue;
        double tol = kEps * len;

        std::vector<Point2> next;
        next.reserve(cur.size() + 2);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const Point2& s = cur[i];
            const Point2& t = cur[(i + 1) % cur.size()];
            double ds = cross(p, q, s);
            double dt = cross(p, q, t);
            bool s_in = ds >= -tol;
            bool t_in = dt >= -tol;
            if (s_in) next.push_back(s);
            if (s_in != t_in) {
                double u = ds / (ds - dt);
                next.push_back(s + (t - s) * u);
            }
        }
        cur = std::move(next);
    }

    cur = tidy_ring(std::move(cur));
    if (cur.size() < 3) return std::nullopt;
    return ConvexPolygon{std::move(cur), false};
}

double intersection_area(const ConvexPolygon& a, const ConvexPolygon& b) {
    auto inter = convex_intersect(a, b);
    return inter ? polygon_area(*inter) : 0.0;
}

namespace {

// theta key used to order equal-area rectangle candidates: the canonical
// long-edge angle mapped into [0, pi); squares take the smaller of the two.
double candidate_theta_key(const Point2& u, const Point2& v, double len_u, double len_v) {
    auto nonneg = [](double th) {
        th = wrap_half_pi(th);
        return th < 0 ? th + kPi : th;
    };
    double th_u = nonneg(std::atan2(u.y, u.x));
    double th_v = nonneg(std::atan2(v.y, v.x));
    if (len_u > len_v * (1 + 1e-12)) return th_u;
    if (len_v > len_u * (1 + 1e-12)) return th_v;
    return std::min(th_u, th_v);
}

}  // namespace

OBB min_area_rect(std::span<const Point2> points) {
    ConvexPolygon hull = convex_hull(points);
    if (hull.degenerate || hull.vertices.size() < 3) {
        throw Error(Errc::DegenerateHull, "min_area_rect: points are collinear");
    }

    const auto& v = hull.vertices;
    double best_area = std::numeric_limits<double>::infinity();
    double best_key = std::numeric_limits<double>::infinity();
    std::array<Point2, 4> best_corners{};

    for (std::size_t i = 0; i < v.size(); ++i) {
        Point2 d = v[(i + 1) % v.size()] - v[i];
        double len = norm(d);
        if (len <= kEps) continue;
        Point2 u{d.x / len, d.y / len};
        Point2 w{-u.y, u.x};

        double smin = std::numeric_limits<double>::infinity(), smax = -smin;
        double tmin = smin, tmax = -smin;
        for (const auto& p : v) {
            double s = dot(p, u);
            double t = dot(p, w);
            smin = std::min(smin, s);
            smax = std::max(smax, s);
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
        }
        double area = (smax - smin) * (tmax - tmin);
        double key = candidate_theta_key(u, w, smax - smin, tmax - tmin);

        bool take = false;
        if (area < best_area * (1 - 1e-12)) {
            take = true;
        } else if (area <= best_area * (1 + 1e-12) && key < best_key) {
            take = true;
        }
        if (take) {
            best_area = area;
            best_key = key;
            best_corners = {u * smin + w * tmin, u * smax + w * tmin,
                            u * smax + w * tmax, u * smin + w * tmax};
        }
    }
    return OBB::from_corners(best_corners);
}

OBB OBB::from_corners(const std::array<Point2, 4>& corners) {
    require_finite(corners, "OBB");

    std::array<Point2, 4> c = corners;
    double signed_area = 0.0;
    for (int i = 0; i < 4; ++i) signed_area += cross(c[i], c[(i + 1) % 4]);
    signed_area *= 0.5;
    if (std::abs(signed_area) <= kEps) {
        throw Error(Errc::DegenerateBox, "OBB: zero-area corner set");
    }
    if (signed_area < 0) c = {c[0], c[3], c[2], c[1]};

    std::array<Point2, 4> e;
    std::array<double, 4> len;
    for (int i = 0; i < 4; ++i) {
        e[i] = c[(i + 1) % 4] - c[i];
        len[i] = norm(e[i]);
        if (len[i] <= kEps) throw Error(Errc::DegenerateBox, "OBB: zero-length edge");
    }
    if (std::abs(len[0] - len[2]) >
            kRectEdgeRelTol * std::max(len[0], len[2]) + 2 * kCornerNoiseTol ||
        std::abs(len[1] - len[3]) >
            kRectEdgeRelTol * std::max(len[1], len[3]) + 2 * kCornerNoiseTol) {
        throw Error(Errc::DegenerateBox, "OBB: opposite edges differ in length");
    }
    for (int i = 0; i < 4; ++i) {
        double la = len[i], lb = len[(i + 1) % 4];
        double lim = kRectAngleTol * la * lb + 2 * kCornerNoiseTol * (la + lb);
        if (std::abs(dot(e[i], e[(i + 1) % 4])) > lim) {
            throw Error(Errc::DegenerateBox, "OBB: edges are not perpendicular");
        }
    }

    OBB obb;
    obb.corners_ = c;
    return obb;
}

Point2 OBB::center() const {
    Point2 c{0, 0};
    for (const auto& p : corners_) c = c + p;
    return c * 0.25;
}

double OBB::area() const {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += cross(corners_[i], corners_[(i + 1) % 4]);
    return std::abs(s) * 0.5;
}

double obb_iou(const OBB& a, const OBB& b) {
    double inter = intersection_area(to_polygon(a), to_polygon(b));
    double uni = a.area() + b.area() - inter;
    if (uni <= 0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double wrap_half_pi(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < -kPi / 2) t += kPi;
    if (t >= kPi / 2) t -= kPi;
    return t;
}

FiveParam to_five_param(const OBB& obb) {
    const auto& c = obb.corners();
    if (obb.area() <= kEps) throw Error(Errc::DegenerateBox, "to_five_param: zero-area box");

    Point2 e1 = c[1] - c[0];
    Point2 e2 = c[2] - c[1];
    double l1 = norm(e1);
    double l2 = norm(e2);
    Point2 center = obb.center();

    double theta;
    if (std::abs(l1 - l2) <= 1e-12 * std::max(l1, l2)) {
        // Square: the two edge directions are equally valid, take the one
        // with the smaller |theta|; the exact tie at |pi/4| goes negative.
        double t1 = wrap_half_pi(std::atan2(e1.y, e1.x));
        double t2 = wrap_half_pi(std::atan2(e2.y, e2.x));
        if (std::abs(t1) < std::abs(t2) - 1e-15) {
            theta = t1;
        } else if (std::abs(t2) < std::abs(t1) - 1e-15) {
            theta = t2;
        } else {
            theta = std::min(t1, t2);
        }
    } else {
        Point2 long_edge = l1 > l2 ? e1 : e2;
        theta = wrap_half_pi(std::atan2(long_edge.y, long_edge.x));
    }

    return {center.x, center.y, std::min(l1, l2), std::max(l1, l2), theta};
}

OBB to_obb(const FiveParam& fp) {
    if (!std::isfinite(fp.cx) || !std::isfinite(fp.cy) || !std::isfinite(fp.w) ||
        !std::isfinite(fp.h) || !std::isfinite(fp.theta)) {
        throw Error(Errc::InvalidCoordinate, "to_obb: non-finite five-param field");
    }
    if (fp.w <= kEps || fp.h <= kEps) throw Error(Errc::DegenerateBox, "to_obb: zero-area box");
    if (fp.w > fp.h * (1 + 1e-12)) {
        throw Error(Errc::DegenerateBox, "to_obb: w exceeds h");
    }
    if (fp.theta < -kPi / 2 - 1e-12 || fp.theta >= kPi / 2 + 1e-12) {
        throw Error(Errc::InvalidCoordinate, "to_obb: theta outside [-pi/2, pi/2)");
    }

    Point2 c{fp.cx, fp.cy};
    Point2 dir{std::cos(fp.theta), std::sin(fp.theta)};   // long edge
    Point2 nrm{-dir.y, dir.x};
    Point2 dh = dir * (fp.h * 0.5);
    Point2 dw = nrm * (fp.w * 0.5);
    return OBB::from_corners({c - dh - dw, c + dh - dw, c + dh + dw, c - dh + dw});
}

ConvexPolygon to_polygon(const OBB& obb) {
    return {{obb.corners()[0], obb.corners()[1], obb.corners()[2], obb.corners()[3]}, false};
}

}  // namespace obbkit::geom
