#pragma once

#include <map>
#include <string>
#include <vector>

#include "obbkit/geom.hpp"

namespace obbkit::eval {

/// Ground-truth record; difficult objects are matchable but never counted.
struct GtRecord {
    std::string image_id;
    std::string category;
    geom::OBB obb;
    bool difficult = false;
};

struct DetRecord {
    std::string image_id;
    std::string category;
    double score = 0.0;
    geom::OBB obb;
};

/// Cumulative precision/recall over the score-ranked detections.
struct PRCurve {
    std::vector<std::pair<double, double>> points;  // (recall, precision)
    std::size_t n_gt = 0;
};

enum class ApMetric { Voc07, Voc12 };

/// Greedy matching by descending score (input order breaks ties) within each
/// (image, category) group; a detection is a true positive iff its best
/// unmatched same-category gt reaches iou_thr. Difficult gts absorb matches
/// without contributing to n_gt or the TP count.
PRCurve match_and_pr(const std::vector<DetRecord>& dets, const std::vector<GtRecord>& gts,
                     double iou_thr);

/// voc07: mean max-precision at recalls {0, 0.1, ..., 1.0}; voc12: area under
/// the monotonized envelope. Empty curve gives 0.
double average_precision(const PRCurve& pr, ApMetric metric);

/// Per-category AP and the mean over categories present in the ground truth.
struct EvalResult {
    std::map<std::string, double> ap;
    double map = 0.0;
};
EvalResult evaluate(const std::vector<DetRecord>& dets, const std::vector<GtRecord>& gts,
                    double iou_thr, ApMetric metric);

/// Category-agnostic proposal recall: per image keep top-k by score, count
/// gts matched at iou_thr. Difficult gts are excluded entirely.
double recall_at_k(const std::vector<DetRecord>& proposals, const std::vector<GtRecord>& gts,
                   std::size_t k, double iou_thr);

}  // namespace obbkit::eval
