#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "obbkit/geom.hpp"

namespace obbkit::assign {

/// Scale rule mapping a box area to a pyramid level.
struct LevelConfig {
    double s = 16.0;
    int l_min = 2;
    int l_max = 6;
};

/// Lattice of feature-point centers ((i+0.5)*stride, (j+0.5)*stride) covering
/// a width x height extent. i indexes columns (x), j rows (y).
struct FeatureGrid {
    int level = 0;
    double stride = 1.0;
    double width = 0.0;
    double height = 0.0;

    static FeatureGrid for_level(int level, double width, double height);

    std::size_t cols() const;
    std::size_t rows() const;
    geom::Point2 point_at(std::size_t col, std::size_t row) const;
};

struct AssignConfig {
    double tau = 0.1;
    double rcnn_iou = 0.5;
};

/// One initial-stage assignment: the gt's pyramid level and nearest lattice
/// point. out_of_extent marks centers clamped back onto the grid.
struct InitAssignment {
    std::size_t gt_index = 0;
    int level = 0;
    std::size_t col = 0;
    std::size_t row = 0;
    geom::Point2 point;
    bool out_of_extent = false;
};

/// Refine-stage prediction: a feature point with its representative points.
struct RefinePred {
    geom::Point2 feature_point;
    geom::RepPoints points;
};

/// Background marker for per-prediction labels.
inline constexpr std::ptrdiff_t kBackground = -1;

/// l = round(log2(sqrt(w*h / s))) clamped to [l_min, l_max]; .5 rounds up.
int level_of(const geom::OBB& gt, const LevelConfig& cfg);

/// Each gt claims the lattice point nearest its center on its projected
/// level; coordinate ties take the smaller index, so the smallest (row, col).
std::vector<InitAssignment> assign_init(std::span<const geom::OBB> gts,
                                        std::span<const FeatureGrid> grids,
                                        const LevelConfig& cfg);

/// Positive iff the best hull-IoU strictly exceeds tau; returns the matched
/// gt index per prediction, kBackground otherwise. IoU ties take the lowest
/// gt index.
std::vector<std::ptrdiff_t> assign_refine(std::span<const RefinePred> preds,
                                          std::span<const geom::OBB> gts,
                                          const AssignConfig& cfg);

/// Positive iff the best rotated IoU reaches rcnn_iou.
std::vector<std::ptrdiff_t> assign_rcnn(std::span<const geom::OBB> proposals,
                                        std::span<const geom::OBB> gts, const AssignConfig& cfg);

}  // namespace obbkit::assign
