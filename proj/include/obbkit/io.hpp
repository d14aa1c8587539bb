#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "obbkit/eval.hpp"
#include "obbkit/geom.hpp"

namespace obbkit::io {

/// One ground-truth object of an image file:
/// `x1 y1 x2 y2 x3 y3 x4 y4 category difficult`.
struct Annotation {
    geom::OBB obb;
    std::string category;
    bool difficult = false;
};

/// All coordinates and scores are written with exactly 6 fractional digits;
/// one write-read round trip quantizes, after which files are byte-stable.
std::string format_fixed(double v);

std::vector<Annotation> read_annotations(const std::string& path);
void write_annotations(const std::string& path, const std::vector<Annotation>& anns);

/// Detection lines: `image_id category score x1 y1 x2 y2 x3 y3 x4 y4`.
std::vector<eval::DetRecord> read_detections(const std::string& path);
void write_detections(const std::string& path, const std::vector<eval::DetRecord>& dets);

/// Point files: `x y` per line.
std::vector<geom::Point2> read_points(const std::string& path);
void write_points(const std::string& path, const std::vector<geom::Point2>& pts);

/// Annotation directory: one `<image id>.txt` per image, ids sorted.
std::vector<eval::GtRecord> read_annotation_dir(const std::string& dir);

/// Flat `key=value` config text; '#' starts a comment. Typed getters throw
/// ParseError on malformed values; missing keys yield the default.
class Config {
public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    std::int64_t get_int(const std::string& key, std::int64_t def) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> def) const;

private:
    std::map<std::string, std::string> kv_;
};

Config read_config(const std::string& path);

}  // namespace obbkit::io
