#include <doctest.h>

#include <vector>

#include "obbkit/assign.hpp"
#include "obbkit/error.hpp"
#include "obbkit/geom.hpp"
#include "obbkit/rng.hpp"
#include "test_util.hpp"

using namespace obbkit;
using assign::AssignConfig;
using assign::FeatureGrid;
using assign::LevelConfig;
using geom::OBB;
using geom::Point2;
using geom::RepPoints;

namespace {

// Axis-aligned box with x extent wx and y extent hy.
OBB axis_obb(double cx, double cy, double wx, double hy) {
    if (wx <= hy) return geom::to_obb({cx, cy, wx, hy, -geom::kPi / 2});
    return geom::to_obb({cx, cy, hy, wx, 0.0});
}

RepPoints rect_points(double x0, double y0, double x1, double y1) {
    return RepPoints(std::vector<Point2>{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

}  // namespace

TEST_CASE("level_of maps box area through the log2 scale rule") {
    LevelConfig cfg;
    CHECK(assign::level_of(axis_obb(50, 50, 16, 16), cfg) == 2);
    CHECK(assign::level_of(axis_obb(50, 50, 64, 64), cfg) == 4);
    // sqrt(1024*256/16) = 128 -> raw level 7, clamped to 6.
    CHECK(assign::level_of(axis_obb(600, 600, 1024, 256), cfg) == 6);
    // sqrt(4/16) = 0.5 -> raw level -1, clamped to 2.
    CHECK(assign::level_of(axis_obb(50, 50, 2, 2), cfg) == 2);
    // log2(6) = 2.585 rounds to 3; log2(5) = 2.322 rounds to 2.
    CHECK(assign::level_of(axis_obb(50, 50, 24, 24), cfg) == 3);
    CHECK(assign::level_of(axis_obb(50, 50, 20, 20), cfg) == 2);
}

TEST_CASE("level_of is rotation invariant") {
    LevelConfig cfg;
    OBB flat = axis_obb(50, 50, 64, 16);
    OBB rot = geom::to_obb({50, 50, 16, 64, 0.7});
    CHECK(assign::level_of(flat, cfg) == assign::level_of(rot, cfg));
}

TEST_CASE("FeatureGrid lattice geometry") {
    FeatureGrid g = FeatureGrid::for_level(2, 32, 24);
    CHECK(g.stride == 4.0);
    CHECK(g.cols() == 8);
    CHECK(g.rows() == 6);
    CHECK(g.point_at(0, 0).x == doctest::Approx(2.0));
    CHECK(g.point_at(0, 0).y == doctest::Approx(2.0));
    CHECK(g.point_at(7, 5).x == doctest::Approx(30.0));
    CHECK_THROWS_AS(FeatureGrid::for_level(2, 0.0, 32), Error);
}

TEST_CASE("assign_init snaps each gt center to the nearest lattice point") {
    std::vector<FeatureGrid> grids;
    for (int l = 2; l <= 6; ++l) grids.push_back(FeatureGrid::for_level(l, 128, 128));
    std::vector<OBB> gts{axis_obb(10, 6, 16, 16)};
    auto out = assign::assign_init(gts, grids, {});
    REQUIRE(out.size() == 1);
    CHECK(out[0].gt_index == 0);
    CHECK(out[0].level == 2);
    CHECK(out[0].col == 2);
    CHECK(out[0].row == 1);
    CHECK(out[0].point.x == doctest::Approx(10.0));
    CHECK(out[0].point.y == doctest::Approx(6.0));
    CHECK_FALSE(out[0].out_of_extent);
}

TEST_CASE("assign_init resolves exact midpoint ties toward the smaller index") {
    std::vector<FeatureGrid> grids{FeatureGrid::for_level(2, 64, 64)};
    // Center (8, 8) is equidistant from lattice x = 6 and x = 10.
    std::vector<OBB> gts{axis_obb(8, 8, 16, 16)};
    auto out = assign::assign_init(gts, grids, {});
    CHECK(out[0].col == 1);
    CHECK(out[0].row == 1);
    CHECK(out[0].point.x == doctest::Approx(6.0));
    CHECK(out[0].point.y == doctest::Approx(6.0));
}

TEST_CASE("assign_init clamps and flags centers beyond the extent") {
    std::vector<FeatureGrid> grids{FeatureGrid::for_level(2, 32, 32)};
    std::vector<OBB> gts{axis_obb(40, 16, 16, 16), axis_obb(-4, 16, 16, 16)};
    auto out = assign::assign_init(gts, grids, {});
    CHECK(out[0].col == 7);
    CHECK(out[0].out_of_extent);
    CHECK(out[1].col == 0);
    CHECK(out[1].out_of_extent);
}

TEST_CASE("assign_init places each gt on its own pyramid level") {
    std::vector<FeatureGrid> grids;
    for (int l = 2; l <= 6; ++l) grids.push_back(FeatureGrid::for_level(l, 256, 256));
    std::vector<OBB> gts{axis_obb(100, 100, 16, 16), axis_obb(100, 100, 64, 64)};
    auto out = assign::assign_init(gts, grids, {});
    CHECK(out[0].level == 2);
    CHECK(out[1].level == 4);
}

TEST_CASE("assign_init falls back to the nearest provided level") {
    std::vector<FeatureGrid> grids{FeatureGrid::for_level(3, 256, 256)};
    std::vector<OBB> gts{axis_obb(100, 100, 16, 16)};
    auto out = assign::assign_init(gts, grids, {});
    CHECK(out[0].level == 3);
}

TEST_CASE("assign_init covers every gt exactly once") {
    Rng rng(404);
    std::vector<FeatureGrid> grids;
    for (int l = 2; l <= 6; ++l) grids.push_back(FeatureGrid::for_level(l, 128, 128));
    std::vector<OBB> gts;
    for (int i = 0; i < 50; ++i) gts.push_back(testutil::random_obb(rng, 128.0));
    auto out = assign::assign_init(gts, grids, {});
    REQUIRE(out.size() == gts.size());
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].gt_index == i);
}

TEST_CASE("assign_init shifts with the lattice under stride-multiple translation") {
    std::vector<FeatureGrid> grids{FeatureGrid::for_level(2, 64, 64)};
    std::vector<OBB> base{axis_obb(10, 6, 16, 16)};
    std::vector<OBB> shifted{axis_obb(18, 10, 16, 16)};
    auto a = assign::assign_init(base, grids, {});
    auto b = assign::assign_init(shifted, grids, {});
    CHECK(b[0].col == a[0].col + 2);
    CHECK(b[0].row == a[0].row + 1);
    CHECK(b[0].level == a[0].level);
}

TEST_CASE("assign_init rejects empty inputs") {
    std::vector<FeatureGrid> grids{FeatureGrid::for_level(2, 32, 32)};
    std::vector<OBB> gts{axis_obb(16, 16, 8, 8)};
    CHECK_THROWS_AS(assign::assign_init({}, grids, {}), Error);
    CHECK_THROWS_AS(assign::assign_init(gts, {}, {}), Error);
}

TEST_CASE("assign_refine requires the hull IoU to strictly exceed tau") {
    OBB gt = OBB::from_corners({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
    std::vector<OBB> gts{gt};
    AssignConfig cfg;

    // Hull covering exactly a tenth of the gt: IoU = 0.1, still background.
    std::vector<assign::RefinePred> at{{Point2{0.05, 0.5}, rect_points(0, 0, 0.1, 1)}};
    CHECK(assign::assign_refine(at, gts, cfg)[0] == assign::kBackground);

    std::vector<assign::RefinePred> above{{Point2{0.06, 0.5}, rect_points(0, 0, 0.12, 1)}};
    CHECK(assign::assign_refine(above, gts, cfg)[0] == 0);

    std::vector<assign::RefinePred> equal{{Point2{0.5, 0.5}, rect_points(0, 0, 1, 1)}};
    CHECK(assign::assign_refine(equal, gts, cfg)[0] == 0);

    std::vector<assign::RefinePred> disjoint{{Point2{5.5, 5.5}, rect_points(5, 5, 6, 6)}};
    CHECK(assign::assign_refine(disjoint, gts, cfg)[0] == assign::kBackground);
}

TEST_CASE("assign_refine breaks exact IoU ties toward the lower gt index") {
    OBB gt = OBB::from_corners({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
    std::vector<OBB> gts{gt, gt};
    std::vector<assign::RefinePred> preds{{Point2{0.5, 0.5}, rect_points(0.1, 0.1, 0.9, 0.9)}};
    auto labels = assign::assign_refine(preds, gts, {});
    CHECK(labels[0] == 0);
}

TEST_CASE("assign_refine positive count is nonincreasing in tau") {
    Rng rng(2718);
    std::vector<OBB> gts;
    for (int i = 0; i < 8; ++i) gts.push_back(testutil::random_obb(rng, 64.0));
    std::vector<assign::RefinePred> preds;
    for (int i = 0; i < 40; ++i) {
        auto pts = testutil::random_points(rng, 9, 0.0, 64.0);
        Point2 c{0, 0};
        for (const auto& p : pts) c = c + p;
        preds.push_back({c * (1.0 / 9.0), RepPoints(pts)});
    }

    std::size_t prev = preds.size() + 1;
    for (double tau : {0.05, 0.1, 0.3, 0.5}) {
        AssignConfig cfg;
        cfg.tau = tau;
        auto labels = assign::assign_refine(preds, gts, cfg);
        std::size_t pos = 0;
        for (auto l : labels) {
            if (l != assign::kBackground) ++pos;
        }
        CHECK(pos <= prev);
        prev = pos;
    }
}

TEST_CASE("assign_refine rejects tau outside [0,1]") {
    std::vector<assign::RefinePred> preds{{Point2{0.5, 0.5}, rect_points(0, 0, 1, 1)}};
    std::vector<OBB> gts{OBB::from_corners({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}})};
    AssignConfig cfg;
    cfg.tau = 1.5;
    CHECK_THROWS_AS(assign::assign_refine(preds, gts, cfg), Error);
}

TEST_CASE("assign_rcnn thresholds inclusively at the configured IoU") {
    OBB gt = OBB::from_corners({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
    std::vector<OBB> gts{gt};
    AssignConfig cfg;

    std::vector<OBB> half{OBB::from_corners({{{0, 0}, {0.5, 0}, {0.5, 1}, {0, 1}}})};
    CHECK(assign::assign_rcnn(half, gts, cfg)[0] == 0);  // IoU = 0.5 exactly

    std::vector<OBB> below{OBB::from_corners({{{0, 0}, {0.49, 0}, {0.49, 1}, {0, 1}}})};
    CHECK(assign::assign_rcnn(below, gts, cfg)[0] == assign::kBackground);

    std::vector<OBB> same{gt};
    CHECK(assign::assign_rcnn(same, gts, cfg)[0] == 0);
}

TEST_CASE("assign_rcnn matches the argmax gt") {
    std::vector<OBB> gts{OBB::from_corners({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}),
                         OBB::from_corners({{{0, 0}, {1, 0}, {1, 2}, {0, 2}}})};
    // IoU 1/1.2 with gt0, 1.2/2 with gt1.
    std::vector<OBB> p0{OBB::from_corners({{{0, 0}, {1, 0}, {1, 1.2}, {0, 1.2}}})};
    CHECK(assign::assign_rcnn(p0, gts, {})[0] == 0);
    // IoU 0.2/2 with gt0, 1.2/2 with gt1.
    std::vector<OBB> p1{OBB::from_corners({{{0, 0.8}, {1, 0.8}, {1, 2}, {0, 2}}})};
    CHECK(assign::assign_rcnn(p1, gts, {})[0] == 1);
}

TEST_CASE("refine and rcnn labels survive a rigid translation") {
    Rng rng(515);
    std::vector<OBB> gts;
    for (int i = 0; i < 6; ++i) gts.push_back(testutil::random_obb(rng, 64.0));
    std::vector<assign::RefinePred> preds;
    std::vector<OBB> props;
    for (int i = 0; i < 24; ++i) {
        auto pts = testutil::random_points(rng, 9, 0.0, 64.0);
        preds.push_back({pts[0], RepPoints(pts)});
        props.push_back(testutil::random_obb(rng, 64.0));
    }

    const Point2 shift{32.0, -16.0};
    auto move_obb = [&](const OBB& o) {
        auto c = o.corners();
        for (auto& p : c) p = p + shift;
        return OBB::from_corners(c);
    };
    std::vector<OBB> gts2;
    for (const auto& g : gts) gts2.push_back(move_obb(g));
    std::vector<assign::RefinePred> preds2;
    for (const auto& pr : preds) {
        std::vector<Point2> pts(pr.points.points().begin(), pr.points.points().end());
        for (auto& p : pts) p = p + shift;
        preds2.push_back({pr.feature_point + shift, RepPoints(pts)});
    }
    std::vector<OBB> props2;
    for (const auto& p : props) props2.push_back(move_obb(p));

    CHECK(assign::assign_refine(preds, gts, {}) == assign::assign_refine(preds2, gts2, {}));
    CHECK(assign::assign_rcnn(props, gts, {}) == assign::assign_rcnn(props2, gts2, {}));
}
