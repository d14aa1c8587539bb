#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "obbkit/eval.hpp"
#include "obbkit/io.hpp"

namespace obbkit::synth {

/// Long-tailed synthetic scene recipe. Sizes are the long edge h; aspect is
/// h/w >= 1; rotations are radians. Frequencies need not be normalized.
struct SceneConfig {
    double canvas = 128.0;
    std::size_t images = 10;
    std::size_t objects_per_image = 5;
    std::vector<double> frequencies = {0.9, 0.1};
    double size_min = 16.0;
    double size_max = 48.0;
    double aspect_min = 1.0;
    double aspect_max = 3.0;
    double rot_min = -geom::kPi / 2;
    double rot_max = geom::kPi / 2;
    double difficult_frac = 0.0;
    std::size_t proposals_per_gt = 3;
    double jitter = 2.0;
    std::uint64_t seed = 0;
};

struct SynthImage {
    std::string id;
    std::vector<io::Annotation> annotations;
};

struct SynthDataset {
    std::vector<SynthImage> images;
    std::vector<eval::DetRecord> proposals;   // jittered copies of every gt
    std::vector<eval::DetRecord> detections;  // exact copies, perfect detector
};

/// Deterministic per seed. Objects that cannot fit the canvas under their
/// sampled rotation raise InfeasibleConfig.
SynthDataset generate(const SceneConfig& cfg);

std::string category_name(std::size_t index);

}  // namespace obbkit::synth
