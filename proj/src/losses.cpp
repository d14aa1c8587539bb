#include "obbkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "obbkit/error.hpp"

namespace obbkit::losses {

using geom::ConvexPolygon;
using geom::OBB;
using geom::Point2;

namespace {

constexpr double kProbFloor = 1e-12;

double segment_distance(const Point2& a, const Point2& b, const Point2& p) {
    Point2 d = b - a;
    double len2 = dot(d, d);
    if (len2 <= 0.0) return dist(a, p);
    double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return dist(a + d * t, p);
}

double line_distance(const Point2& a, const Point2& b, const Point2& p) {
    double len = dist(a, b);
    if (len <= geom::kEps) return dist(a, p);
    return std::abs(cross(a, b, p)) / len;
}

double boundary_distance(std::span<const Point2> ring, const Point2& p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ring.size(); ++i) {
        best = std::min(best, segment_distance(ring[i], ring[(i + 1) % ring.size()], p));
    }
    return best;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

CornerSet::CornerSet(const std::array<geom::Point2, 4>& corners) : corners_(corners) {
    for (const auto& p : corners_) {
        if (!geom::is_finite(p)) {
            throw Error(Errc::InvalidCoordinate, "CornerSet: non-finite corner");
        }
    }
}

double hull_iou(std::span<const Point2> pred, const OBB& target) {
    ConvexPolygon hp = geom::convex_hull(pred);
    if (hp.degenerate) return 0.0;
    double inter = geom::intersection_area(hp, geom::to_polygon(target));
    double uni = geom::polygon_area(hp) + target.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double ciou(std::span<const Point2> pred, const OBB& target) {
    ConvexPolygon hp = geom::convex_hull(pred);
    ConvexPolygon ht = geom::to_polygon(target);
    double at = target.area();
    double ap = hp.degenerate ? kAreaFloor : geom::polygon_area(hp);
    double inter = hp.degenerate ? 0.0 : geom::intersection_area(hp, ht);
    double uni = ap + at - inter;

    std::vector<Point2> all = hp.vertices;
    all.insert(all.end(), ht.vertices.begin(), ht.vertices.end());
    double enclosing = geom::polygon_area(geom::convex_hull(all));
    // The enclosing hull contains the union; anything smaller is fp noise.
    enclosing = std::max(enclosing, uni);

    double penalty = enclosing > 0.0 ? (enclosing - uni) / enclosing : 0.0;
    return inter / uni - penalty;
}

double ciou(const geom::RepPoints& pred, const OBB& target) { return ciou(pred.points(), target); }

double ciou(const CornerSet& pred, const OBB& target) { return ciou(pred.points(), target); }

double ciou(const OBB& pred, const OBB& target) {
    return ciou(std::span<const Point2>(pred.corners()), target);
}

double ciou_loc_loss(std::span<const geom::RepPoints> preds, std::span<const OBB> targets) {
    if (preds.size() != targets.size()) {
        throw Error(Errc::InvalidArgument, "ciou_loc_loss: preds/targets size mismatch");
    }
    if (preds.empty()) return 0.0;
    std::vector<double> vals(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        vals[i] = 1.0 - ciou(preds[i], targets[i]);
    }
    return pairwise_sum(vals) / static_cast<double>(vals.size());
}

double focal_loss(std::span<const double> probs, std::span<const int> labels,
                  const FocalConfig& cfg, std::size_t n_pos) {
    if (probs.size() != labels.size()) {
        throw Error(Errc::InvalidArgument, "focal_loss: probs/labels size mismatch");
    }
    if (n_pos == 0) throw Error(Errc::EmptyInput, "focal_loss: n_pos must be at least 1");

    std::vector<double> vals(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!std::isfinite(probs[i])) {
            throw Error(Errc::InvalidArgument, "focal_loss: non-finite probability");
        }
        if (labels[i] < 0) throw Error(Errc::InvalidArgument, "focal_loss: negative label");
        double p = std::clamp(probs[i], kProbFloor, 1.0 - kProbFloor);
        if (labels[i] > 0) {
            vals[i] = -cfg.alpha * std::pow(1.0 - p, cfg.gamma) * std::log(p);
        } else {
            vals[i] = -(1.0 - cfg.alpha) * std::pow(p, cfg.gamma) * std::log(1.0 - p);
        }
    }
    return pairwise_sum(vals) / static_cast<double>(n_pos);
}

double corner_loss(std::span<const CornerSet> preds, std::span<const OBB> targets,
                   CornerPermutations perms) {
    if (preds.size() != targets.size()) {
        throw Error(Errc::InvalidArgument, "corner_loss: preds/targets size mismatch");
    }
    if (preds.empty()) return 0.0;

    int n_perm = perms == CornerPermutations::Cyclic4 ? 4 : 8;
    std::vector<double> vals(preds.size());
    for (std::size_t s = 0; s < preds.size(); ++s) {
        const auto& c = preds[s];
        const auto& t = targets[s].corners();
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n_perm; ++k) {
            double sum = 0.0;
            for (int i = 0; i < 4; ++i) {
                // k < 4: cyclic shift; k >= 4: reflected (reversed winding).
                int j = k < 4 ? (i + k) % 4 : ((k - 4) - i + 8) % 4;
                sum += std::abs(c[static_cast<std::size_t>(i)].x - t[static_cast<std::size_t>(j)].x) +
                       std::abs(c[static_cast<std::size_t>(i)].y - t[static_cast<std::size_t>(j)].y);
            }
            best = std::min(best, sum);
        }
        vals[s] = best;
    }
    return pairwise_sum(vals) / static_cast<double>(vals.size());
}

double ce_loss(std::span<const std::vector<double>> probs, std::span<const int> labels) {
    if (probs.size() != labels.size()) {
        throw Error(Errc::InvalidArgument, "ce_loss: probs/labels size mismatch");
    }
    if (probs.empty()) return 0.0;

    std::vector<double> vals(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const auto& p = probs[i];
        int label = labels[i];
        if (label < 0 || static_cast<std::size_t>(label) >= p.size()) {
            throw Error(Errc::InvalidArgument, "ce_loss: label out of range");
        }
        double sum = 0.0;
        for (double v : p) {
            if (!std::isfinite(v) || v < 0.0) {
                throw Error(Errc::InvalidArgument, "ce_loss: invalid probability");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw Error(Errc::InvalidArgument, "ce_loss: probabilities do not sum to 1");
        }
        vals[i] = -std::log(std::clamp(p[static_cast<std::size_t>(label)], kProbFloor, 1.0));
    }
    return pairwise_sum(vals) / static_cast<double>(vals.size());
}

LossTotals composite_losses(const LossParts& parts, const LossWeights& w) {
    for (double v : {parts.loc_init, parts.cls_refine, parts.loc_refine, parts.reg_cls,
                     parts.reg_loc, w.lambda1, w.lambda2, w.lambda3, w.mu1, w.mu2}) {
        if (!std::isfinite(v)) {
            throw Error(Errc::InvalidArgument, "composite_losses: non-finite term");
        }
    }
    LossTotals t;
    t.rpn_total = w.lambda1 * parts.loc_init + w.lambda2 * parts.cls_refine +
                  w.lambda3 * parts.loc_refine;
    t.reg_total = w.mu1 * parts.reg_cls + w.mu2 * parts.reg_loc;
    t.grand_total = t.rpn_total + t.reg_total;
    return t;
}

namespace {

// d(vertex)/d(pred point idx) as a dense 2x2 block; vertices depend on at
// most a handful of pred points so a flat list beats a map.
struct JacBlock {
    std::size_t idx;
    double a, b, c, d;  // [dX/dqx dX/dqy; dY/dqx dY/dqy]
};

struct TracedVertex {
    Point2 p;
    std::vector<JacBlock> jac;
};

const JacBlock* find_block(const TracedVertex& v, std::size_t idx) {
    for (const auto& b : v.jac) {
        if (b.idx == idx) return &b;
    }
    return nullptr;
}

// Signed shoelace area (CCW positive). Accumulates d(area)/d(pred) into grad
// through each vertex jacobian.
double traced_area(const std::vector<TracedVertex>& v, std::vector<double>& grad) {
    if (v.size() < 3) return 0.0;
    const std::size_t n = v.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cross(v[i].p, v[(i + 1) % n].p);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& prev = v[(i + n - 1) % n].p;
        const Point2& next = v[(i + 1) % n].p;
        double gx = 0.5 * (next.y - prev.y);
        double gy = 0.5 * (prev.x - next.x);
        for (const auto& b : v[i].jac) {
            grad[2 * b.idx] += gx * b.a + gy * b.c;
            grad[2 * b.idx + 1] += gx * b.b + gy * b.d;
        }
    }
    return 0.5 * s;
}

// Intersection of segment (s, t) with the line through (p, q), with the
// chain rule through u = ds / (ds - dt).
TracedVertex traced_isect(const TracedVertex& s, const TracedVertex& t, const Point2& p,
                          const Point2& q, double ds, double dt) {
    double denom = ds - dt;
    double u = ds / denom;
    TracedVertex out;
    out.p = s.p + (t.p - s.p) * u;

    // d(signed dist numerator)/d(vertex) for cross(p, q, vertex).
    double nx = p.y - q.y;
    double ny = q.x - p.x;
    Point2 e = t.p - s.p;

    std::vector<std::size_t> keys;
    for (const auto& b : s.jac) keys.push_back(b.idx);
    for (const auto& b : t.jac) {
        if (!find_block(s, b.idx)) keys.push_back(b.idx);
    }

    for (std::size_t k : keys) {
        const JacBlock* S = find_block(s, k);
        const JacBlock* T = find_block(t, k);
        double sa = S ? S->a : 0.0, sb = S ? S->b : 0.0, sc = S ? S->c : 0.0, sd = S ? S->d : 0.0;
        double ta = T ? T->a : 0.0, tb = T ? T->b : 0.0, tc = T ? T->c : 0.0, td = T ? T->d : 0.0;
        // Rows d(ds)/dq_k and d(dt)/dq_k.
        double dsx = nx * sa + ny * sc, dsy = nx * sb + ny * sd;
        double dtx = nx * ta + ny * tc, dty = nx * tb + ny * td;
        double dux = (-dt * dsx + ds * dtx) / (denom * denom);
        double duy = (-dt * dsy + ds * dty) / (denom * denom);
        JacBlock blk;
        blk.idx = k;
        blk.a = (1.0 - u) * sa + u * ta + e.x * dux;
        blk.b = (1.0 - u) * sb + u * tb + e.x * duy;
        blk.c = (1.0 - u) * sc + u * tc + e.y * dux;
        blk.d = (1.0 - u) * sd + u * td + e.y * duy;
        out.jac.push_back(blk);
    }
    return out;
}

// Sutherland-Hodgman against a CCW rectangle, propagating jacobians. No
// vertex tidying: duplicates contribute zero area and exact gradients.
std::vector<TracedVertex> clip_traced(std::vector<TracedVertex> cur, const ConvexPolygon& clip,
                                      bool& near) {
    for (std::size_t e = 0; e < clip.vertices.size(); ++e) {
        if (cur.size() < 3) return {};
        const Point2& p = clip.vertices[e];
        const Point2& q = clip.vertices[(e + 1) % clip.vertices.size()];
        double len = dist(p, q);
        if (len <= geom::kEps) continue;
        double tol = geom::kEps * len;

        std::vector<TracedVertex> next;
        next.reserve(cur.size() + 2);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const TracedVertex& s = cur[i];
            const TracedVertex& t = cur[(i + 1) % cur.size()];
            double ds = cross(p, q, s.p);
            double dt = cross(p, q, t.p);
            if (std::abs(ds) <= kNonSmoothTol * len) near = true;
            bool s_in = ds >= -tol;
            bool t_in = dt >= -tol;
            if (s_in) next.push_back(s);
            if (s_in != t_in) next.push_back(traced_isect(s, t, p, q, ds, dt));
        }
        cur = std::move(next);
    }
    if (cur.size() < 3) return {};
    return cur;
}

// Hull membership margins: a non-vertex within tol of the boundary, or a
// vertex within tol of its neighbor chord, is about to change the structure.
bool hull_margins_tight(std::span<const Point2> all, std::span<const std::size_t> hull_idx,
                        std::span<const Point2> ring) {
    std::vector<char> on_hull(all.size(), 0);
    for (std::size_t i : hull_idx) on_hull[i] = 1;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (!on_hull[k] && boundary_distance(ring, all[k]) <= kNonSmoothTol) return true;
    }
    const std::size_t n = ring.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (line_distance(ring[(j + n - 1) % n], ring[(j + 1) % n], ring[j]) <= kNonSmoothTol) {
            return true;
        }
    }
    return false;
}

}  // namespace

CiouGrad grad_ciou(const geom::RepPoints& pred, const OBB& target) {
    const auto pts = pred.points();
    const std::size_t k = pts.size();

    auto idx = geom::convex_hull_indices(pts);
    if (idx.size() < 3) {
        throw Error(Errc::DegenerateHull, "grad_ciou: degenerate prediction hull");
    }

    CiouGrad out;
    out.grad.assign(2 * k, 0.0);

    std::vector<TracedVertex> hull;
    std::vector<Point2> ring;
    hull.reserve(idx.size());
    ring.reserve(idx.size());
    for (std::size_t i : idx) {
        hull.push_back({pts[i], {JacBlock{i, 1.0, 0.0, 0.0, 1.0}}});
        ring.push_back(pts[i]);
    }

    bool near = hull_margins_tight(pts, idx, ring);

    std::vector<double> d_ap(2 * k, 0.0), d_i(2 * k, 0.0), d_p(2 * k, 0.0);
    double ap = traced_area(hull, d_ap);

    ConvexPolygon tpoly = geom::to_polygon(target);
    double at = target.area();

    auto inter = clip_traced(hull, tpoly, near);
    double iarea = traced_area(inter, d_i);

    // Enclosing hull over pred hull vertices plus target corners; target
    // corners are constants with empty jacobians.
    std::vector<Point2> all = ring;
    all.insert(all.end(), tpoly.vertices.begin(), tpoly.vertices.end());
    auto uidx = geom::convex_hull_indices(all);
    std::vector<TracedVertex> uhull;
    std::vector<Point2> uring;
    for (std::size_t i : uidx) {
        if (i < ring.size()) {
            uhull.push_back({all[i], {JacBlock{idx[i], 1.0, 0.0, 0.0, 1.0}}});
        } else {
            uhull.push_back({all[i], {}});
        }
        uring.push_back(all[i]);
    }
    double pa = traced_area(uhull, d_p);
    near = near || hull_margins_tight(all, uidx, uring);

    double uni = ap + at - iarea;
    double pa_clamped = std::max(pa, uni);
    out.value = iarea / uni - (pa_clamped - uni) / pa_clamped;
    for (std::size_t j = 0; j < 2 * k; ++j) {
        double du = d_ap[j] - d_i[j];
        out.grad[j] = (d_i[j] * uni - iarea * du) / (uni * uni) +
                      (du * pa - uni * d_p[j]) / (pa * pa);
    }
    out.near_non_smooth = near;
    return out;
}

}  // namespace obbkit::losses
