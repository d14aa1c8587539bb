#include "obbkit/assign.hpp"

#include <algorithm>
#include <cmath>

#include "obbkit/error.hpp"
#include "obbkit/losses.hpp"

namespace obbkit::assign {

FeatureGrid FeatureGrid::for_level(int level, double width, double height) {
    if (width <= 0.0 || height <= 0.0) {
        throw Error(Errc::InvalidArgument, "FeatureGrid: extent must be positive");
    }
    FeatureGrid g;
    g.level = level;
    g.stride = std::ldexp(1.0, level);
    g.width = width;
    g.height = height;
    return g;
}

std::size_t FeatureGrid::cols() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(width / stride)));
}

std::size_t FeatureGrid::rows() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(height / stride)));
}

geom::Point2 FeatureGrid::point_at(std::size_t col, std::size_t row) const {
    return {(static_cast<double>(col) + 0.5) * stride, (static_cast<double>(row) + 0.5) * stride};
}

int level_of(const geom::OBB& gt, const LevelConfig& cfg) {
    if (cfg.s <= 0.0) throw Error(Errc::InvalidArgument, "level_of: scale must be positive");
    geom::FiveParam fp = geom::to_five_param(gt);
    double raw = std::log2(std::sqrt(fp.w * fp.h / cfg.s));
    // round-half-up; std::round would send -2.5 to -3.
    int l = static_cast<int>(std::floor(raw + 0.5));
    return std::clamp(l, cfg.l_min, cfg.l_max);
}

namespace {

// Index of the lattice center nearest coordinate v, exact .5 ties toward the
// smaller index, clamped to [0, n).
std::size_t nearest_index(double v, double stride, std::size_t n, bool& clamped) {
    double f = v / stride - 0.5;
    double fl = std::floor(f);
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(fl);
    if (f - fl > 0.5) ++i;
    if (i < 0) {
        clamped = true;
        return 0;
    }
    if (i >= static_cast<std::ptrdiff_t>(n)) {
        clamped = true;
        return n - 1;
    }
    return static_cast<std::size_t>(i);
}

}  // namespace

std::vector<InitAssignment> assign_init(std::span<const geom::OBB> gts,
                                        std::span<const FeatureGrid> grids,
                                        const LevelConfig& cfg) {
    if (gts.empty()) throw Error(Errc::EmptyInput, "assign_init: no ground truths");
    if (grids.empty()) throw Error(Errc::EmptyInput, "assign_init: no feature grids");

    std::vector<InitAssignment> out;
    out.reserve(gts.size());
    for (std::size_t g = 0; g < gts.size(); ++g) {
        int level = level_of(gts[g], cfg);
        // Nearest grid by level; levels outside the provided pyramid clamp to
        // the closest available one.
        const FeatureGrid* grid = &grids[0];
        for (const auto& cand : grids) {
            if (std::abs(cand.level - level) < std::abs(grid->level - level)) grid = &cand;
        }

        geom::Point2 center = gts[g].center();
        InitAssignment a;
        a.gt_index = g;
        a.level = grid->level;
        bool clamped = false;
        a.col = nearest_index(center.x, grid->stride, grid->cols(), clamped);
        a.row = nearest_index(center.y, grid->stride, grid->rows(), clamped);
        a.out_of_extent = clamped || center.x < 0.0 || center.x > grid->width ||
                          center.y < 0.0 || center.y > grid->height;
        a.point = grid->point_at(a.col, a.row);
        out.push_back(a);
    }
    return out;
}

std::vector<std::ptrdiff_t> assign_refine(std::span<const RefinePred> preds,
                                          std::span<const geom::OBB> gts,
                                          const AssignConfig& cfg) {
    if (cfg.tau < 0.0 || cfg.tau > 1.0) {
        throw Error(Errc::InvalidArgument, "assign_refine: tau outside [0,1]");
    }
    std::vector<std::ptrdiff_t> labels(preds.size(), kBackground);
    for (std::size_t p = 0; p < preds.size(); ++p) {
        double best = -1.0;
        std::ptrdiff_t best_gt = kBackground;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            double iou = losses::hull_iou(preds[p].points.points(), gts[g]);
            if (iou > best) {
                best = iou;
                best_gt = static_cast<std::ptrdiff_t>(g);
            }
        }
        // Positive only when the best IoU strictly exceeds tau.
        if (best > cfg.tau) labels[p] = best_gt;
    }
    return labels;
}

std::vector<std::ptrdiff_t> assign_rcnn(std::span<const geom::OBB> proposals,
                                        std::span<const geom::OBB> gts, const AssignConfig& cfg) {
    std::vector<std::ptrdiff_t> labels(proposals.size(), kBackground);
    for (std::size_t p = 0; p < proposals.size(); ++p) {
        double best = -1.0;
        std::ptrdiff_t best_gt = kBackground;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            double iou = geom::obb_iou(proposals[p], gts[g]);
            if (iou > best) {
                best = iou;
                best_gt = static_cast<std::ptrdiff_t>(g);
            }
        }
        if (best >= cfg.rcnn_iou) labels[p] = best_gt;
    }
    return labels;
}

}  // namespace obbkit::assign
