#include "obbkit/eval.hpp"

#include <algorithm>
#include <cmath>

#include "obbkit/error.hpp"

namespace obbkit::eval {

namespace {

std::vector<std::size_t> rank_by_score(const std::vector<DetRecord>& dets) {
    std::vector<std::size_t> order(dets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
        return a < b;
    });
    return order;
}

}  // namespace

PRCurve match_and_pr(const std::vector<DetRecord>& dets, const std::vector<GtRecord>& gts,
                     double iou_thr) {
    if (iou_thr <= 0.0 || iou_thr >= 1.0) {
        throw Error(Errc::InvalidArgument, "match_and_pr: iou_thr outside (0,1)");
    }

    PRCurve curve;
    for (const auto& g : gts) {
        if (!g.difficult) ++curve.n_gt;
    }

    std::vector<char> matched(gts.size(), 0);
    std::size_t tp = 0, fp = 0;
    for (std::size_t i : rank_by_score(dets)) {
        const auto& d = dets[i];
        // Best unmatched gt of the same image and category; index order
        // breaks exact IoU ties.
        double best_iou = 0.0;
        std::size_t best_g = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (matched[g] || gts[g].image_id != d.image_id || gts[g].category != d.category) {
                continue;
            }
            double iou = geom::obb_iou(d.obb, gts[g].obb);
            if (iou >= iou_thr && iou > best_iou) {
                best_iou = iou;
                best_g = g;
            }
        }
        if (best_g < gts.size()) {
            matched[best_g] = 1;
            // A difficult match absorbs the detection: neither TP nor FP.
            if (gts[best_g].difficult) continue;
            ++tp;
        } else {
            ++fp;
        }
        double recall = curve.n_gt > 0
                            ? static_cast<double>(tp) / static_cast<double>(curve.n_gt)
                            : 0.0;
        double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        curve.points.emplace_back(recall, precision);
    }
    return curve;
}

double average_precision(const PRCurve& pr, ApMetric metric) {
    if (pr.points.empty()) return 0.0;

    if (metric == ApMetric::Voc07) {
        double sum = 0.0;
        for (int i = 0; i <= 10; ++i) {
            double t = static_cast<double>(i) / 10.0;
            double best = 0.0;
            for (const auto& [r, p] : pr.points) {
                if (r >= t - 1e-12) best = std::max(best, p);
            }
            sum += best;
        }
        return sum / 11.0;
    }

    // voc12: area under the monotonized envelope.
    std::vector<double> mrec{0.0};
    std::vector<double> mpre{0.0};
    for (const auto& [r, p] : pr.points) {
        mrec.push_back(r);
        mpre.push_back(p);
    }
    mrec.push_back(1.0);
    mpre.push_back(0.0);
    for (std::size_t i = mpre.size() - 1; i-- > 0;) {
        mpre[i] = std::max(mpre[i], mpre[i + 1]);
    }
    double ap = 0.0;
    for (std::size_t i = 0; i + 1 < mrec.size(); ++i) {
        ap += (mrec[i + 1] - mrec[i]) * mpre[i + 1];
    }
    return ap;
}

EvalResult evaluate(const std::vector<DetRecord>& dets, const std::vector<GtRecord>& gts,
                    double iou_thr, ApMetric metric) {
    EvalResult res;
    // Categories with at least one countable gt define the mean.
    std::map<std::string, std::size_t> countable;
    for (const auto& g : gts) {
        if (!g.difficult) ++countable[g.category];
    }
    if (countable.empty()) return res;

    double sum = 0.0;
    for (const auto& [cat, n] : countable) {
        (void)n;
        std::vector<DetRecord> cat_dets;
        std::vector<GtRecord> cat_gts;
        for (const auto& d : dets) {
            if (d.category == cat) cat_dets.push_back(d);
        }
        for (const auto& g : gts) {
            if (g.category == cat) cat_gts.push_back(g);
        }
        double ap = average_precision(match_and_pr(cat_dets, cat_gts, iou_thr), metric);
        res.ap[cat] = ap;
        sum += ap;
    }
    res.map = sum / static_cast<double>(countable.size());
    return res;
}

double recall_at_k(const std::vector<DetRecord>& proposals, const std::vector<GtRecord>& gts,
                   std::size_t k, double iou_thr) {
    if (k < 1) throw Error(Errc::InvalidArgument, "recall_at_k: k must be >= 1");

    std::size_t n_gt = 0, n_matched = 0;
    std::map<std::string, std::vector<std::size_t>> props_by_image;
    for (std::size_t i = 0; i < proposals.size(); ++i) {
        props_by_image[proposals[i].image_id].push_back(i);
    }

    std::map<std::string, std::vector<std::size_t>> gts_by_image;
    for (std::size_t g = 0; g < gts.size(); ++g) {
        if (gts[g].difficult) continue;
        gts_by_image[gts[g].image_id].push_back(g);
        ++n_gt;
    }
    if (n_gt == 0) return 1.0;

    for (const auto& [image, gt_idx] : gts_by_image) {
        auto it = props_by_image.find(image);
        if (it == props_by_image.end()) continue;

        std::vector<std::size_t> order = it->second;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (proposals[a].score != proposals[b].score) {
                return proposals[a].score > proposals[b].score;
            }
            return a < b;
        });
        if (order.size() > k) order.resize(k);

        std::vector<char> taken(gt_idx.size(), 0);
        for (std::size_t p : order) {
            double best_iou = 0.0;
            std::size_t best = gt_idx.size();
            for (std::size_t j = 0; j < gt_idx.size(); ++j) {
                if (taken[j]) continue;
                double iou = geom::obb_iou(proposals[p].obb, gts[gt_idx[j]].obb);
                if (iou >= iou_thr && iou > best_iou) {
                    best_iou = iou;
                    best = j;
                }
            }
            if (best < gt_idx.size()) {
                taken[best] = 1;
                ++n_matched;
            }
        }
    }
    return static_cast<double>(n_matched) / static_cast<double>(n_gt);
}

}  // namespace obbkit::eval
