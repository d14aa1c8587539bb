#include "obbkit/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "obbkit/error.hpp"

namespace obbkit::io {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
    throw Error(Errc::ParseError, path + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        parse_fail(path, line_no, "expected a number, got '" + tok + "'");
    }
    if (used != tok.size()) parse_fail(path, line_no, "trailing junk in number '" + tok + "'");
    return v;
}

geom::OBB parse_corners(const std::vector<std::string>& toks, std::size_t offset,
                        const std::string& path, std::size_t line_no) {
    std::array<geom::Point2, 4> c;
    for (std::size_t i = 0; i < 4; ++i) {
        c[i].x = parse_double(toks[offset + 2 * i], path, line_no);
        c[i].y = parse_double(toks[offset + 2 * i + 1], path, line_no);
    }
    try {
        return geom::OBB::from_corners(c);
    } catch (const Error& e) {
        parse_fail(path, line_no, e.what());
    }
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, path + ": cannot open for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::ParseError, path + ": cannot open for writing");
    return out;
}

// Blank lines and lines whose first non-space character is '#'.
bool blank_or_comment(const std::string& line) {
    for (char ch : line) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        return ch == '#';
    }
    return true;
}

}  // namespace

std::string format_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<Annotation> read_annotations(const std::string& path) {
    auto in = open_in(path);
    std::vector<Annotation> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() != 10) {
            parse_fail(path, line_no, "expected 10 fields, got " + std::to_string(toks.size()));
        }
        bool difficult = false;
        if (toks[9] == "1") {
            difficult = true;
        } else if (toks[9] != "0") {
            parse_fail(path, line_no, "difficult flag must be 0 or 1, got '" + toks[9] + "'");
        }
        out.push_back({parse_corners(toks, 0, path, line_no), toks[8], difficult});
    }
    return out;
}

void write_annotations(const std::string& path, const std::vector<Annotation>& anns) {
    auto out = open_out(path);
    for (const auto& a : anns) {
        for (const auto& p : a.obb.corners()) {
            out << format_fixed(p.x) << ' ' << format_fixed(p.y) << ' ';
        }
        out << a.category << ' ' << (a.difficult ? 1 : 0) << '\n';
    }
}

std::vector<eval::DetRecord> read_detections(const std::string& path) {
    auto in = open_in(path);
    std::vector<eval::DetRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() != 11) {
            parse_fail(path, line_no, "expected 11 fields, got " + std::to_string(toks.size()));
        }
        double score = parse_double(toks[2], path, line_no);
        if (!(score >= 0.0 && score <= 1.0)) {
            parse_fail(path, line_no, "score outside [0,1]");
        }
        out.push_back({toks[0], toks[1], score, parse_corners(toks, 3, path, line_no)});
    }
    return out;
}

void write_detections(const std::string& path, const std::vector<eval::DetRecord>& dets) {
    auto out = open_out(path);
    for (const auto& d : dets) {
        out << d.image_id << ' ' << d.category << ' ' << format_fixed(d.score);
        for (const auto& p : d.obb.corners()) {
            out << ' ' << format_fixed(p.x) << ' ' << format_fixed(p.y);
        }
        out << '\n';
    }
}

std::vector<geom::Point2> read_points(const std::string& path) {
    auto in = open_in(path);
    std::vector<geom::Point2> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() != 2) {
            parse_fail(path, line_no, "expected `x y`, got " + std::to_string(toks.size()) +
                                          " fields");
        }
        out.push_back({parse_double(toks[0], path, line_no), parse_double(toks[1], path, line_no)});
    }
    return out;
}

void write_points(const std::string& path, const std::vector<geom::Point2>& pts) {
    auto out = open_out(path);
    for (const auto& p : pts) {
        out << format_fixed(p.x) << ' ' << format_fixed(p.y) << '\n';
    }
}

std::vector<eval::GtRecord> read_annotation_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw Error(Errc::ParseError, dir + ": not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<eval::GtRecord> out;
    for (const auto& f : files) {
        std::string image_id = f.stem().string();
        for (const auto& a : read_annotations(f.string())) {
            out.push_back({image_id, a.category, a.obb, a.difficult});
        }
    }
    return out;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
}

double Config::get_double(const std::string& key, double def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    return parse_double(it->second, "config key " + key, 0);
}

std::int64_t Config::get_int(const std::string& key, std::int64_t def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(it->second, &used);
    } catch (const std::exception&) {
        throw Error(Errc::ParseError, "config key " + key + ": expected an integer");
    }
    if (used != it->second.size()) {
        throw Error(Errc::ParseError, "config key " + key + ": trailing junk");
    }
    return v;
}

std::vector<double> Config::get_doubles(const std::string& key, std::vector<double> def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    std::vector<double> out;
    std::string tok;
    std::istringstream ss(it->second);
    while (std::getline(ss, tok, ',')) {
        out.push_back(parse_double(tok, "config key " + key, 0));
    }
    if (out.empty()) throw Error(Errc::ParseError, "config key " + key + ": empty list");
    return out;
}

Config read_config(const std::string& path) {
    auto in = open_in(path);
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(path, line_no, "expected key=value");
        auto trim = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
                s.erase(s.begin());
            }
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) parse_fail(path, line_no, "empty key");
        cfg.set(key, value);
    }
    return cfg;
}

}  // namespace obbkit::io
