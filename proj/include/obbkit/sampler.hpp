#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace obbkit::sampler {

/// Image ids with the category ids present in each image. Order is the
/// dataset order and is part of the epoch-determinism contract.
struct DatasetIndex {
    std::vector<std::pair<std::string, std::set<std::string>>> images;
};

struct RepeatFactorTable {
    double beta_thr = 0.3;
    std::map<std::string, double> category_fraction;  // F_c
    std::map<std::string, double> category_repeat;    // r_c = max(1, sqrt(beta/F_c))
    std::vector<std::pair<std::string, double>> image_repeat;  // r_I, dataset order
};

/// Category and image repeat factors; images without categories get r_I = 1.
RepeatFactorTable repeat_factors(const DatasetIndex& ds, double beta_thr);

/// One epoch: floor(r_I) copies per image plus a Bernoulli(frac(r_I)) extra,
/// then a shuffle. Both stages draw from generators seeded with `seed`, so
/// the result is a pure function of (table, seed).
std::vector<std::string> build_epoch(const RepeatFactorTable& table, std::uint64_t seed);

}  // namespace obbkit::sampler
