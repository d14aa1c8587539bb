#pragma once

#include <array>
#include <span>
#include <vector>

#include "obbkit/geom.hpp"

namespace obbkit::losses {

/// Area floor applied to degenerate prediction hulls so 1 - CIoU stays finite.
inline constexpr double kAreaFloor = 1e-9;

/// Distance to a combinatorial boundary (hull membership change, clip-vertex
/// birth/death) below which the analytic gradient is flagged unreliable.
inline constexpr double kNonSmoothTol = 1e-7;

/// Trade-off weights of the RPN stage (lambda) and the RCNN stage (mu).
struct LossWeights {
    double lambda1 = 0.5;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;
};

struct FocalConfig {
    double alpha = 0.25;
    double gamma = 2.0;
};

/// Four refined corner predictions; free points, not required to form a
/// rectangle.
class CornerSet {
public:
    explicit CornerSet(const std::array<geom::Point2, 4>& corners);

    std::span<const geom::Point2> points() const { return corners_; }
    const geom::Point2& operator[](std::size_t i) const { return corners_[i]; }

private:
    std::array<geom::Point2, 4> corners_;
};

/// Permutations the corner loss may use to relabel target corners.
enum class CornerPermutations {
    Cyclic4,    // the 4 cyclic shifts (preserves winding)
    Dihedral8,  // cyclic shifts plus their reflections
};

/// Deterministic pairwise summation; bit-stable for a fixed input order.
double pairwise_sum(std::span<const double> values);

/// Convex-hull IoU between the hull of pred and the target box.
double hull_iou(std::span<const geom::Point2> pred, const geom::OBB& target);

/// Convex-hull GIoU in (-1, 1]: hull IoU minus the fraction of the smallest
/// enclosing convex hull not covered by either hull.
double ciou(std::span<const geom::Point2> pred, const geom::OBB& target);
double ciou(const geom::RepPoints& pred, const geom::OBB& target);
double ciou(const CornerSet& pred, const geom::OBB& target);
double ciou(const geom::OBB& pred, const geom::OBB& target);

/// Mean of (1 - CIoU) over matched pairs; 0 for an empty positive set.
double ciou_loc_loss(std::span<const geom::RepPoints> preds, std::span<const geom::OBB> targets);

/// Focal loss averaged by the positive count. labels: 0 = background,
/// > 0 = assigned category. probs holds the per-sample classification output.
double focal_loss(std::span<const double> probs, std::span<const int> labels,
                  const FocalConfig& cfg, std::size_t n_pos);

/// Mean over samples of the permutation-minimal corner L1 distance.
double corner_loss(std::span<const CornerSet> preds, std::span<const geom::OBB> targets,
                   CornerPermutations perms = CornerPermutations::Cyclic4);

/// Cross-entropy over per-class probability vectors (label 0 = background).
double ce_loss(std::span<const std::vector<double>> probs, std::span<const int> labels);

struct LossParts {
    double loc_init = 0.0;
    double cls_refine = 0.0;
    double loc_refine = 0.0;
    double reg_cls = 0.0;
    double reg_loc = 0.0;
};

struct LossTotals {
    double rpn_total = 0.0;
    double reg_total = 0.0;
    double grand_total = 0.0;
};

LossTotals composite_losses(const LossParts& parts, const LossWeights& w);

struct CiouGrad {
    double value = 0.0;
    std::vector<double> grad;  // d CIoU / d (x0, y0, x1, y1, ...), length 2K
    bool near_non_smooth = false;
};

/// Analytic gradient of ciou(pred, target) with respect to every pred point.
/// Interior points receive zero gradient. Throws DegenerateHull when the pred
/// hull is degenerate; flags near_non_smooth within kNonSmoothTol of a
/// combinatorial boundary (callers may fall back to finite differences).
CiouGrad grad_ciou(const geom::RepPoints& pred, const geom::OBB& target);

}  // namespace obbkit::losses
