#pragma once

#include <string>
#include <vector>

#include "obbkit/geom.hpp"

namespace obbkit::pipeline {

enum class GradMode { Analytic, FiniteDifference };

struct FitConfig {
    int steps = 500;
    double lr = 0.1;  // step size in pixels
    GradMode grad_mode = GradMode::Analytic;
    double stop_ciou = 0.995;
};

struct Detection {
    geom::OBB obb;
    std::string category;
    double score = 0.0;
};

struct FitStep {
    int step = 0;
    std::vector<geom::Point2> points;
    double ciou = 0.0;
};

struct FitResult {
    std::vector<FitStep> trajectory;
    bool converged = false;
};

/// Minimum-area rectangle of the representative points.
geom::OBB points_to_pseudo_obb(const geom::RepPoints& r);

/// Gradient ascent on CIoU with backtracking (at most 10 halvings per step)
/// and step growth after accepted moves. The recorded ciou sequence is
/// nondecreasing. Analytic mode falls back to finite differences near
/// non-smooth configurations.
FitResult fit_points(const geom::OBB& target, const geom::RepPoints& init, const FitConfig& cfg);

/// Greedy per-category suppression by descending score; input order breaks
/// score ties. Detections below score_thr are dropped first; kept pairs of
/// one category always have IoU < iou_thr.
std::vector<Detection> rotated_nms(const std::vector<Detection>& dets, double iou_thr,
                                   double score_thr = 0.0);

struct BoundaryRow {
    int step = 0;
    double phi = 0.0;          // true rotation applied to the box
    double theta = 0.0;        // five-parameter encoding of the rotated box
    double corner_step = 0.0;  // aligned max-corner displacement from the previous row
};

/// Rigidly rotates a unit-width box of the given aspect through [0, pi).
/// The corner path moves smoothly while the encoded theta wraps once,
/// which is the boundary-discontinuity demonstration.
std::vector<BoundaryRow> boundary_demo(double aspect, int rotation_steps);

}  // namespace obbkit::pipeline
