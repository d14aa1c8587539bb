#include "obbkit/sampler.hpp"

#include <cmath>

#include "obbkit/error.hpp"
#include "obbkit/rng.hpp"

namespace obbkit::sampler {

RepeatFactorTable repeat_factors(const DatasetIndex& ds, double beta_thr) {
    if (ds.images.empty()) throw Error(Errc::EmptyInput, "repeat_factors: empty dataset");
    if (beta_thr < 0.0 || beta_thr > 1.0) {
        throw Error(Errc::InvalidArgument, "repeat_factors: beta_thr outside [0,1]");
    }

    RepeatFactorTable table;
    table.beta_thr = beta_thr;

    std::map<std::string, std::size_t> count;
    for (const auto& [id, cats] : ds.images) {
        (void)id;
        for (const auto& c : cats) ++count[c];
    }
    const double n = static_cast<double>(ds.images.size());
    for (const auto& [c, k] : count) {
        double f = static_cast<double>(k) / n;
        table.category_fraction[c] = f;
        table.category_repeat[c] = std::max(1.0, std::sqrt(beta_thr / f));
    }

    table.image_repeat.reserve(ds.images.size());
    for (const auto& [id, cats] : ds.images) {
        double r = 1.0;
        for (const auto& c : cats) r = std::max(r, table.category_repeat.at(c));
        table.image_repeat.emplace_back(id, r);
    }
    return table;
}

std::vector<std::string> build_epoch(const RepeatFactorTable& table, std::uint64_t seed) {
    Rng draw(seed);
    std::vector<std::string> epoch;
    epoch.reserve(table.image_repeat.size());
    for (const auto& [id, r] : table.image_repeat) {
        double whole = std::floor(r);
        double frac = r - whole;
        std::size_t copies = static_cast<std::size_t>(whole);
        // One draw per image regardless of frac keeps the stream aligned
        // across tables that differ only in repeat values.
        if (draw.uniform() < frac) ++copies;
        for (std::size_t k = 0; k < copies; ++k) epoch.push_back(id);
    }
    Rng shuf(seed);
    shuf.shuffle(epoch);
    return epoch;
}

}  // namespace obbkit::sampler
