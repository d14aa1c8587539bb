// Independent reference implementations used only by tests. Deliberately
// naive: correctness over speed, and no shared code with the library under
// test beyond primitive types.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "obbkit/geom.hpp"
#include "obbkit/rng.hpp"

namespace oracles {

using obbkit::geom::Point2;

// O(n^3) hull: (i, j) is a hull edge iff every other point lies strictly to
// its left. Assumes general position (no 3 collinear, no duplicates), which
// holds for random doubles. Returns the CCW cycle starting from the
// bottom-most, then left-most vertex.
inline std::vector<Point2> brute_hull(const std::vector<Point2>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> next(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            bool edge = true;
            for (std::size_t k = 0; k < n && edge; ++k) {
                if (k == i || k == j) continue;
                if (cross(pts[i], pts[j], pts[k]) <= 0.0) edge = false;
            }
            if (edge) next[i] = j;
        }
    }
    std::size_t start = 0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (next[i] == n) continue;
        if (!found || pts[i].y < pts[start].y ||
            (pts[i].y == pts[start].y && pts[i].x < pts[start].x)) {
            start = i;
            found = true;
        }
    }
    std::vector<Point2> ring;
    if (!found) return ring;
    std::size_t cur = start;
    do {
        ring.push_back(pts[cur]);
        cur = next[cur];
        if (ring.size() > n) break;
    } while (cur != start);
    return ring;
}

inline double ring_area(const std::vector<Point2>& ring) {
    double s = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        s += cross(ring[i], ring[(i + 1) % ring.size()]);
    }
    return std::abs(s) * 0.5;
}

// Minimum axis-aligned bounding area over a dense angle sweep. The true
// minimum rectangle area lies within the sweep's discretization error.
inline double sweep_min_rect_area(const std::vector<Point2>& pts, double step_deg = 0.1) {
    double best = std::numeric_limits<double>::infinity();
    for (double deg = 0.0; deg < 90.0; deg += step_deg) {
        double t = deg * obbkit::geom::kPi / 180.0;
        double c = std::cos(t), s = std::sin(t);
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto& p : pts) {
            double x = c * p.x + s * p.y;
            double y = -s * p.x + c * p.y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
        best = std::min(best, (xmax - xmin) * (ymax - ymin));
    }
    return best;
}

// Point-in-convex-CCW-ring test for the Monte Carlo estimators.
inline bool ring_contains(const std::vector<Point2>& ring, const Point2& p) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (cross(ring[i], ring[(i + 1) % ring.size()], p) < 0.0) return false;
    }
    return true;
}

// Monte Carlo IoU of two convex CCW rings over their joint bounding box.
inline double mc_iou(const std::vector<Point2>& a, const std::vector<Point2>& b,
                     obbkit::Rng& rng, std::size_t samples) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto* ring : {&a, &b}) {
        for (const auto& p : *ring) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    std::size_t in_both = 0, in_either = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        Point2 p{rng.uniform(xmin, xmax), rng.uniform(ymin, ymax)};
        bool ia = ring_contains(a, p);
        bool ib = ring_contains(b, p);
        in_both += ia && ib;
        in_either += ia || ib;
    }
    if (in_either == 0) return 0.0;
    return static_cast<double>(in_both) / static_cast<double>(in_either);
}

// Central finite differences of f around x.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double keep = x[i];
        x[i] = keep + h;
        double hi = f(x);
        x[i] = keep - h;
        double lo = f(x);
        x[i] = keep;
        g[i] = (hi - lo) / (2.0 * h);
    }
    return g;
}

}  // namespace oracles
