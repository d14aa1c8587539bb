#include "obbkit/synth.hpp"

#include <cmath>
#include <cstdio>

#include "obbkit/error.hpp"
#include "obbkit/rng.hpp"

namespace obbkit::synth {

using geom::OBB;
using geom::Point2;

std::string category_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%02zu", index);
    return buf;
}

namespace {

void validate(const SceneConfig& cfg) {
    if (cfg.canvas <= 0.0) throw Error(Errc::InvalidArgument, "synth: canvas must be positive");
    if (cfg.images == 0 || cfg.objects_per_image == 0) {
        throw Error(Errc::InvalidArgument, "synth: need at least one image and object");
    }
    if (cfg.frequencies.empty()) {
        throw Error(Errc::InvalidArgument, "synth: empty category frequency vector");
    }
    for (double f : cfg.frequencies) {
        if (!(f >= 0.0) || !std::isfinite(f)) {
            throw Error(Errc::InvalidArgument, "synth: frequencies must be nonnegative");
        }
    }
    if (!(cfg.size_min > 0.0) || cfg.size_max < cfg.size_min) {
        throw Error(Errc::InvalidArgument, "synth: bad size range");
    }
    if (!(cfg.aspect_min >= 1.0) || cfg.aspect_max < cfg.aspect_min) {
        throw Error(Errc::InvalidArgument, "synth: aspect range must sit in [1, inf)");
    }
    if (cfg.rot_max < cfg.rot_min) throw Error(Errc::InvalidArgument, "synth: bad rotation range");
    if (cfg.jitter < 0.0) throw Error(Errc::InvalidArgument, "synth: jitter must be nonnegative");
}

OBB jittered_box(const OBB& src, double jitter, Rng& rng) {
    // Jitter every corner, then restore rectangularity with the minimum-area
    // enclosing rectangle, mirroring the pseudo-OBB conversion.
    std::array<Point2, 4> c = src.corners();
    for (auto& p : c) {
        p.x += rng.uniform(-jitter, jitter);
        p.y += rng.uniform(-jitter, jitter);
    }
    return geom::min_area_rect(c);
}

}  // namespace

SynthDataset generate(const SceneConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);
    SynthDataset ds;
    ds.images.reserve(cfg.images);

    for (std::size_t im = 0; im < cfg.images; ++im) {
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "img%05zu", im);
        SynthImage image;
        image.id = idbuf;

        for (std::size_t ob = 0; ob < cfg.objects_per_image; ++ob) {
            std::size_t cat = rng.weighted_index(cfg.frequencies);
            double h = rng.uniform(cfg.size_min, cfg.size_max);
            double aspect = rng.uniform(cfg.aspect_min, cfg.aspect_max);
            double w = h / aspect;
            double theta = geom::wrap_half_pi(rng.uniform(cfg.rot_min, cfg.rot_max));

            // Axis-aligned half extents of the rotated box decide placement.
            double hx = (h * std::abs(std::cos(theta)) + w * std::abs(std::sin(theta))) * 0.5;
            double hy = (h * std::abs(std::sin(theta)) + w * std::abs(std::cos(theta))) * 0.5;
            if (2.0 * hx > cfg.canvas || 2.0 * hy > cfg.canvas) {
                throw Error(Errc::InfeasibleConfig,
                            "synth: sampled object does not fit the canvas");
            }
            double cx = rng.uniform(hx, cfg.canvas - hx);
            double cy = rng.uniform(hy, cfg.canvas - hy);

            io::Annotation ann{geom::to_obb({cx, cy, std::min(w, h), std::max(w, h), theta}),
                               category_name(cat), rng.uniform() < cfg.difficult_frac};
            image.annotations.push_back(ann);

            double det_score = rng.uniform(0.5, 1.0);
            ds.detections.push_back({image.id, ann.category, det_score, ann.obb});
            for (std::size_t p = 0; p < cfg.proposals_per_gt; ++p) {
                OBB prop = cfg.jitter > 0.0 ? jittered_box(ann.obb, cfg.jitter, rng) : ann.obb;
                double score = rng.uniform(0.0, 1.0);
                ds.proposals.push_back({image.id, ann.category, score, prop});
            }
        }
        ds.images.push_back(std::move(image));
    }
    return ds;
}

}  // namespace obbkit::synth
