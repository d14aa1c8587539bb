#include "obbkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "obbkit/error.hpp"
#include "obbkit/losses.hpp"

namespace obbkit::pipeline {

using geom::OBB;
using geom::Point2;

geom::OBB points_to_pseudo_obb(const geom::RepPoints& r) {
    return geom::min_area_rect(r.points());
}

namespace {

double ciou_of(const std::vector<Point2>& pts, const OBB& target) {
    return losses::ciou(std::span<const Point2>(pts), target);
}

std::vector<double> fd_grad(const std::vector<Point2>& pts, const OBB& target) {
    constexpr double h = 1e-5;
    std::vector<Point2> work = pts;
    std::vector<double> g(2 * pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double* coord[2] = {&work[i].x, &work[i].y};
        for (int axis = 0; axis < 2; ++axis) {
            double keep = *coord[axis];
            *coord[axis] = keep + h;
            double hi = ciou_of(work, target);
            *coord[axis] = keep - h;
            double lo = ciou_of(work, target);
            *coord[axis] = keep;
            g[2 * i + static_cast<std::size_t>(axis)] = (hi - lo) / (2.0 * h);
        }
    }
    return g;
}

std::vector<double> ascent_grad(const std::vector<Point2>& pts, const OBB& target, GradMode mode) {
    if (mode == GradMode::Analytic) {
        try {
            auto g = losses::grad_ciou(geom::RepPoints(pts), target);
            if (!g.near_non_smooth) return std::move(g.grad);
        } catch (const Error&) {
            // Degenerate hull: finite differences still give a usable ascent
            // direction through the epsilon-area floor.
        }
    }
    return fd_grad(pts, target);
}

}  // namespace

FitResult fit_points(const OBB& target, const geom::RepPoints& init, const FitConfig& cfg) {
    if (cfg.steps < 1) throw Error(Errc::InvalidArgument, "fit_points: steps must be >= 1");
    if (cfg.lr <= 0.0) throw Error(Errc::InvalidArgument, "fit_points: lr must be positive");

    std::vector<Point2> pts(init.points().begin(), init.points().end());
    double value = ciou_of(pts, target);

    FitResult res;
    res.trajectory.push_back({0, pts, value});
    if (value >= cfg.stop_ciou) {
        res.converged = true;
        return res;
    }

    const double step_max = cfg.lr * 100.0;
    double step = cfg.lr;
    const std::size_t k = pts.size();

    // Backtracking trial of one direction (2k coordinates, inf-norm scaled so
    // the largest coordinate move equals the step): accept the first strict
    // improvement within 10 halvings.
    auto try_direction = [&](const std::vector<double>& d, double start) {
        double dmax = 0.0;
        for (double v : d) dmax = std::max(dmax, std::abs(v));
        if (dmax <= 1e-14) return false;
        double s = start;
        for (int halving = 0; halving <= 10; ++halving) {
            std::vector<Point2> trial = pts;
            double scale = s / dmax;
            for (std::size_t i = 0; i < k; ++i) {
                trial[i].x += scale * d[2 * i];
                trial[i].y += scale * d[2 * i + 1];
            }
            double trial_value = ciou_of(trial, target);
            if (trial_value > value) {
                pts = std::move(trial);
                value = trial_value;
                step = std::min(s * 2.0, step_max);
                return true;
            }
            s *= 0.5;
        }
        return false;
    };

    for (int it = 1; it <= cfg.steps; ++it) {
        std::vector<double> g = ascent_grad(pts, target, cfg.grad_mode);
        bool accepted = try_direction(g, std::max(step, cfg.lr));

        if (!accepted) {
            // The full gradient direction crosses a hull-membership kink for
            // any step size once points sit on the target boundary, where the
            // one-sided derivative disagrees with the smooth-piece gradient.
            // Interior points have exactly zero gradient, so escapes must
            // start at the coarse end of the scale range to pop them past the
            // current hull. Sweep deterministic escapes and apply every
            // strict improvement: rigid and affine moves toward the target
            // center, then per point its gradient block, moves toward each
            // target corner, and axis moves. One sweep counts as one step.
            Point2 c = target.center();
            Point2 mean{0.0, 0.0};
            for (const Point2& p : pts) {
                mean.x += p.x / static_cast<double>(k);
                mean.y += p.y / static_cast<double>(k);
            }
            std::vector<double> translate(2 * k, 0.0);
            std::vector<double> contract(2 * k, 0.0);
            std::vector<double> expand(2 * k, 0.0);
            for (std::size_t j = 0; j < k; ++j) {
                translate[2 * j] = c.x - mean.x;
                translate[2 * j + 1] = c.y - mean.y;
                contract[2 * j] = c.x - pts[j].x;
                contract[2 * j + 1] = c.y - pts[j].y;
                expand[2 * j] = pts[j].x - c.x;
                expand[2 * j + 1] = pts[j].y - c.y;
            }
            accepted |= try_direction(translate, step_max);
            accepted |= try_direction(contract, step_max);
            accepted |= try_direction(expand, step_max);

            std::vector<std::size_t> order(k);
            for (std::size_t j = 0; j < k; ++j) order[j] = j;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                double na = std::abs(g[2 * a]) + std::abs(g[2 * a + 1]);
                double nb = std::abs(g[2 * b]) + std::abs(g[2 * b + 1]);
                if (na != nb) return na > nb;
                return a < b;
            });
            auto corners = target.corners();
            for (std::size_t j : order) {
                std::vector<double> d(2 * k, 0.0);
                d[2 * j] = g[2 * j];
                d[2 * j + 1] = g[2 * j + 1];
                accepted |= try_direction(d, step_max);
                for (const Point2& q : corners) {
                    d[2 * j] = q.x - pts[j].x;
                    d[2 * j + 1] = q.y - pts[j].y;
                    accepted |= try_direction(d, step_max);
                }
                for (auto [dx, dy] : {std::pair{1.0, 0.0},
                                      std::pair{-1.0, 0.0},
                                      std::pair{0.0, 1.0},
                                      std::pair{0.0, -1.0}}) {
                    d[2 * j] = dx;
                    d[2 * j + 1] = dy;
                    accepted |= try_direction(d, step_max);
                }
            }
        }

        if (!accepted) break;  // no probed direction improves: stalled at a kink
        res.trajectory.push_back({it, pts, value});
        if (value >= cfg.stop_ciou) {
            res.converged = true;
            return res;
        }
    }
    res.converged = value >= cfg.stop_ciou;
    return res;
}

std::vector<Detection> rotated_nms(const std::vector<Detection>& dets, double iou_thr,
                                   double score_thr) {
    if (iou_thr < 0.0 || iou_thr > 1.0) {
        throw Error(Errc::InvalidArgument, "rotated_nms: iou_thr outside [0,1]");
    }
    for (const auto& d : dets) {
        if (!std::isfinite(d.score) || d.score < 0.0 || d.score > 1.0) {
            throw Error(Errc::InvalidArgument, "rotated_nms: score outside [0,1]");
        }
    }

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (dets[i].score >= score_thr) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
        return a < b;
    });

    std::vector<Detection> kept;
    for (std::size_t i : order) {
        bool suppressed = false;
        for (const auto& k : kept) {
            if (k.category != dets[i].category) continue;
            if (geom::obb_iou(k.obb, dets[i].obb) >= iou_thr) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(dets[i]);
    }
    return kept;
}

std::vector<BoundaryRow> boundary_demo(double aspect, int rotation_steps) {
    if (!(aspect > 1.0)) throw Error(Errc::InvalidArgument, "boundary_demo: aspect must be > 1");
    if (rotation_steps < 8) throw Error(Errc::InvalidArgument, "boundary_demo: need >= 8 steps");

    // Unit-width box, long edge h = aspect along x at phi = 0.
    const double w = 1.0;
    const double h = aspect * w;
    std::array<Point2, 4> base = geom::to_obb({0.0, 0.0, w, h, 0.0}).corners();

    std::vector<BoundaryRow> rows;
    rows.reserve(static_cast<std::size_t>(rotation_steps));
    std::array<Point2, 4> prev{};
    for (int k = 0; k < rotation_steps; ++k) {
        double phi = geom::kPi * static_cast<double>(k) / static_cast<double>(rotation_steps);
        double c = std::cos(phi), s = std::sin(phi);
        std::array<Point2, 4> corners;
        for (int i = 0; i < 4; ++i) {
            corners[static_cast<std::size_t>(i)] = {
                c * base[static_cast<std::size_t>(i)].x - s * base[static_cast<std::size_t>(i)].y,
                s * base[static_cast<std::size_t>(i)].x + c * base[static_cast<std::size_t>(i)].y};
        }

        BoundaryRow row;
        row.step = k;
        row.phi = phi;
        row.theta = geom::to_five_param(OBB::from_corners(corners)).theta;
        if (k > 0) {
            // Aligned corner distance: best cyclic relabeling of the corners.
            double best = std::numeric_limits<double>::infinity();
            for (int shift = 0; shift < 4; ++shift) {
                double worst = 0.0;
                for (int i = 0; i < 4; ++i) {
                    worst = std::max(worst, dist(corners[static_cast<std::size_t>((i + shift) % 4)],
                                                 prev[static_cast<std::size_t>(i)]));
                }
                best = std::min(best, worst);
            }
            row.corner_step = best;
        }
        rows.push_back(row);
        prev = corners;
    }
    return rows;
}

}  // namespace obbkit::pipeline
