#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "obbkit/error.hpp"
#include "obbkit/geom.hpp"
#include "obbkit/io.hpp"

using namespace obbkit;
using geom::OBB;
using geom::Point2;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        path = fs::temp_directory_path() /
               ("obbkit-io-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string caught_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("format_fixed always prints six fractional digits") {
    CHECK(io::format_fixed(1.0) == "1.000000");
    CHECK(io::format_fixed(-2.5) == "-2.500000");
    CHECK(io::format_fixed(0.12345649) == "0.123456");
    CHECK(io::format_fixed(0.12345651) == "0.123457");
    CHECK(io::format_fixed(128.0) == "128.000000");
}

TEST_CASE("annotations survive one quantizing round trip, then are byte-stable") {
    TempDir tmp;
    std::vector<io::Annotation> anns{
        {geom::to_obb({13.37, 7.91, 1.2, 3.0, 0.37}), "car", false},
        {geom::to_obb({64.0, 32.0, 1.0, 1.5, 0.2}), "ship", true},
        {geom::to_obb({100.3, 90.7, 24.0, 48.0, -1.2}), "plane", false},
    };
    auto p1 = tmp.file("a1.txt");
    auto p2 = tmp.file("a2.txt");
    io::write_annotations(p1, anns);

    auto round1 = io::read_annotations(p1);
    REQUIRE(round1.size() == anns.size());
    for (std::size_t i = 0; i < anns.size(); ++i) {
        CHECK(round1[i].category == anns[i].category);
        CHECK(round1[i].difficult == anns[i].difficult);
        for (int c = 0; c < 4; ++c) {
            CHECK(std::abs(round1[i].obb.corners()[static_cast<std::size_t>(c)].x -
                           anns[i].obb.corners()[static_cast<std::size_t>(c)].x) <= 5e-7);
        }
    }

    io::write_annotations(p2, round1);
    CHECK(slurp(p1) == slurp(p2));
    auto round2 = io::read_annotations(p2);
    auto p3 = tmp.file("a3.txt");
    io::write_annotations(p3, round2);
    CHECK(slurp(p2) == slurp(p3));
}

TEST_CASE("detection files round trip with scores and image ids") {
    TempDir tmp;
    std::vector<eval::DetRecord> dets{
        {"img00001", "car", 0.875, geom::to_obb({20.0, 30.0, 4.0, 9.0, 0.8})},
        {"img00002", "ship", 0.25, geom::to_obb({50.0, 50.0, 10.0, 10.0, 0.0})},
    };
    auto p1 = tmp.file("d1.txt");
    auto p2 = tmp.file("d2.txt");
    io::write_detections(p1, dets);
    auto back = io::read_detections(p1);
    REQUIRE(back.size() == 2);
    CHECK(back[0].image_id == "img00001");
    CHECK(back[0].category == "car");
    CHECK(back[0].score == doctest::Approx(0.875));
    io::write_detections(p2, back);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("point files round trip and skip comments") {
    TempDir tmp;
    auto p = tmp.file("pts.txt");
    spit(p, "# header comment\n1.5 2.5\n\n  3.0 -4.0\n");
    auto pts = io::read_points(p);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == 1.5);
    CHECK(pts[1].y == -4.0);
    auto p2 = tmp.file("pts2.txt");
    io::write_points(p2, pts);
    auto again = io::read_points(p2);
    CHECK(again.size() == 2);
    CHECK(again[1].x == 3.0);
}

TEST_CASE("parse failures report the file and line number") {
    TempDir tmp;
    auto p = tmp.file("bad.txt");
    spit(p, "0 0 1 0 1 1 0 1 car 0\n0 0 1 0 1 1 0 1 car\n");
    auto msg = caught_message([&] { io::read_annotations(p); });
    CHECK(msg.find(p + ":2:") != std::string::npos);
    CHECK(msg.find("10 fields") != std::string::npos);

    spit(p, "0 0 1 0 1 1 0 1 car 2\n");
    msg = caught_message([&] { io::read_annotations(p); });
    CHECK(msg.find(":1:") != std::string::npos);
    CHECK(msg.find("difficult") != std::string::npos);

    spit(p, "0 0 1 0 1 1 0 oops car 0\n");
    msg = caught_message([&] { io::read_annotations(p); });
    CHECK(msg.find("expected a number") != std::string::npos);

    spit(p, "imgX car 1.5 0 0 1 0 1 1 0 1\n");
    msg = caught_message([&] { io::read_detections(p); });
    CHECK(msg.find("score outside [0,1]") != std::string::npos);

    CHECK_THROWS_AS(io::read_annotations(tmp.file("missing.txt")), Error);
}

TEST_CASE("degenerate corner sets are rejected with location info") {
    TempDir tmp;
    auto p = tmp.file("degen.txt");
    spit(p, "0 0 1 1 2 2 3 3 car 0\n");
    auto msg = caught_message([&] { io::read_annotations(p); });
    CHECK(msg.find(":1:") != std::string::npos);
}

TEST_CASE("annotation directories are read in sorted image-id order") {
    TempDir tmp;
    spit(tmp.file("b.txt"), "0 0 4 0 4 4 0 4 car 0\n");
    spit(tmp.file("a.txt"), "0 0 2 0 2 2 0 2 ship 1\n");
    spit(tmp.file("notes.md"), "ignored\n");
    auto gts = io::read_annotation_dir(tmp.path.string());
    REQUIRE(gts.size() == 2);
    CHECK(gts[0].image_id == "a");
    CHECK(gts[0].category == "ship");
    CHECK(gts[0].difficult);
    CHECK(gts[1].image_id == "b");
    CHECK_THROWS_AS(io::read_annotation_dir(tmp.file("nope")), Error);
}

TEST_CASE("config files parse key=value with comments and whitespace") {
    TempDir tmp;
    auto p = tmp.file("cfg.txt");
    spit(p, "# comment\n  lr = 0.25 \nsteps=10\nname = fit-demo\nweights = 0.5,1.0,1.0\n");
    auto cfg = io::read_config(p);
    CHECK(cfg.get_double("lr", 0.0) == 0.25);
    CHECK(cfg.get_int("steps", 0) == 10);
    CHECK(cfg.get_string("name", "") == "fit-demo");
    auto w = cfg.get_doubles("weights", {});
    REQUIRE(w.size() == 3);
    CHECK(w[0] == 0.5);
    CHECK(cfg.get_double("missing", 7.5) == 7.5);
    CHECK(cfg.get_int("missing", -2) == -2);
    CHECK_FALSE(cfg.has("missing"));
}

TEST_CASE("config typed getters reject malformed values") {
    TempDir tmp;
    auto p = tmp.file("cfg.txt");
    spit(p, "lr = fast\nsteps = 10x\njust-a-key\n");
    CHECK_THROWS_AS(io::read_config(p), Error);

    spit(p, "lr = fast\nsteps = 10x\n");
    auto cfg = io::read_config(p);
    CHECK_THROWS_AS(cfg.get_double("lr", 0.0), Error);
    CHECK_THROWS_AS(cfg.get_int("steps", 0), Error);
    CHECK(cfg.get_string("lr", "") == "fast");
}
