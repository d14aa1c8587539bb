#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "obbkit/assign.hpp"
#include "obbkit/error.hpp"
#include "obbkit/eval.hpp"
#include "obbkit/geom.hpp"
#include "obbkit/io.hpp"
#include "obbkit/losses.hpp"
#include "obbkit/parallel.hpp"
#include "obbkit/pipeline.hpp"
#include "obbkit/rng.hpp"
#include "obbkit/sampler.hpp"
#include "obbkit/synth.hpp"

namespace {

using namespace obbkit;
using geom::OBB;
using geom::Point2;
using geom::RepPoints;

std::string fx(double v) { return io::format_fixed(v); }

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return buf;
}

/// Writes to --out, or stdout when the path is "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw Error(Errc::ParseError, path + ": cannot open for writing");
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

/// Options shared by every subcommand. Precedence: defaults < config file
/// < --set overrides < dedicated flags.
struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out = "-";
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;

    io::Config config() const {
        io::Config cfg;
        if (!config_path.empty()) cfg = io::read_config(config_path);
        for (const auto& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw Error(Errc::InvalidArgument, "--set expects key=value, got '" + kv + "'");
            }
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed_opt != nullptr && seed_opt->count() > 0) cfg.set("seed", std::to_string(seed));
        return cfg;
    }

    std::uint64_t run_seed(const io::Config& cfg) const {
        return static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    }
};

std::shared_ptr<Common> add_common(CLI::App* sub) {
    auto c = std::make_shared<Common>();
    sub->add_option("--config", c->config_path, "key=value config file");
    sub->add_option("--set", c->overrides, "override one config key (key=value, repeatable)");
    sub->add_option("--out", c->out, "output path, '-' for stdout");
    c->seed_opt = sub->add_option("--seed", c->seed, "RNG seed (overrides config `seed`)");
    return c;
}

OBB read_corner_obb(const std::string& path) {
    auto pts = io::read_points(path);
    if (pts.size() != 4) {
        throw Error(Errc::ParseError,
                    path + ": expected exactly 4 corner points, got " + std::to_string(pts.size()));
    }
    return OBB::from_corners({pts[0], pts[1], pts[2], pts[3]});
}

// Corner coordinates as ",x1,y1,...,x4,y4" (leading separator included).
std::string corner_fields(const OBB& o) {
    std::string s;
    for (const auto& p : o.corners()) {
        s += ',';
        s += fx(p.x);
        s += ',';
        s += fx(p.y);
    }
    return s;
}

/// Annotation directory as (image id, annotations) pairs in sorted id order,
/// keeping images whose files are empty.
std::vector<std::pair<std::string, std::vector<io::Annotation>>> read_image_annotations(
    const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error(Errc::ParseError, dir + ": not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, std::vector<io::Annotation>>> out;
    out.reserve(files.size());
    for (const auto& f : files) {
        out.emplace_back(f.stem().string(), io::read_annotations(f.string()));
    }
    return out;
}

std::vector<eval::GtRecord> flatten_gts(
    const std::vector<std::pair<std::string, std::vector<io::Annotation>>>& images) {
    std::vector<eval::GtRecord> out;
    for (const auto& [id, anns] : images) {
        for (const auto& a : anns) out.push_back({id, a.category, a.obb, a.difficult});
    }
    return out;
}

pipeline::GradMode parse_grad_mode(const std::string& name) {
    if (name == "analytic") return pipeline::GradMode::Analytic;
    if (name == "fd" || name == "finite_difference") return pipeline::GradMode::FiniteDifference;
    throw Error(Errc::InvalidArgument, "grad_mode must be `analytic` or `fd`, got '" + name + "'");
}

OBB synth_target(Rng& rng, double canvas) {
    double h = rng.uniform(canvas * 0.12, canvas * 0.3);
    double w = rng.uniform(h * 0.33, h);
    double cx = rng.uniform(canvas * 0.3, canvas * 0.7);
    double cy = rng.uniform(canvas * 0.3, canvas * 0.7);
    double theta = rng.uniform(-geom::kPi / 2, geom::kPi / 2);
    if (theta >= geom::kPi / 2) theta = 0.0;
    return geom::to_obb({cx, cy, w, h, theta});
}

std::vector<Point2> synth_init(Rng& rng, double canvas, std::size_t k) {
    std::vector<Point2> pts;
    pts.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        pts.push_back({rng.uniform(canvas * 0.25, canvas * 0.75),
                       rng.uniform(canvas * 0.25, canvas * 0.75)});
    }
    return pts;
}

void cmd_hull(const Common& c, const std::string& in) {
    auto pts = io::read_points(in);
    auto hull = geom::convex_hull(pts);
    if (hull.degenerate) throw Error(Errc::DegenerateHull, in + ": hull is degenerate");
    Output out(c.out);
    out.os() << "index,x,y\n";
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
        out.os() << i << ',' << fx(hull.vertices[i].x) << ',' << fx(hull.vertices[i].y) << '\n';
    }
}

void cmd_minrect(const Common& c, const std::string& in) {
    auto pts = io::read_points(in);
    OBB rect = geom::min_area_rect(pts);
    auto fp = geom::to_five_param(rect);
    Output out(c.out);
    out.os() << "cx,cy,w,h,theta,x1,y1,x2,y2,x3,y3,x4,y4\n";
    out.os() << fx(fp.cx) << ',' << fx(fp.cy) << ',' << fx(fp.w) << ',' << fx(fp.h) << ','
             << fx(fp.theta) << corner_fields(rect) << '\n';
}

void cmd_ciou(const Common& c, const std::string& pred_path, const std::string& target_path) {
    RepPoints pred(io::read_points(pred_path));
    OBB target = read_corner_obb(target_path);

    auto hull = geom::convex_hull(pred.points());
    double pred_area = hull.degenerate ? 0.0 : geom::polygon_area(hull);
    double inter =
        hull.degenerate ? 0.0 : geom::intersection_area(hull, geom::to_polygon(target));
    double uni = pred_area + target.area() - inter;
    std::vector<Point2> all = hull.vertices;
    const auto& tc = target.corners();
    all.insert(all.end(), tc.begin(), tc.end());
    double enclosing = geom::polygon_area(geom::convex_hull(all));

    Output out(c.out);
    out.os() << "ciou,hull_iou,pred_area,intersection,union,enclosing\n";
    out.os() << fx(losses::ciou(pred, target)) << ',' << fx(losses::hull_iou(pred.points(), target))
             << ',' << fx(pred_area) << ',' << fx(inter) << ',' << fx(uni) << ',' << fx(enclosing)
             << '\n';
}

void cmd_gradcheck(const Common& c) {
    auto cfg = c.config();
    std::uint64_t seed = c.run_seed(cfg);
    auto trials = static_cast<std::size_t>(cfg.get_int("trials", 200));
    double canvas = cfg.get_double("canvas", 128.0);
    auto k = static_cast<std::size_t>(cfg.get_int("points", 9));
    if (trials == 0 || k < 3) {
        throw Error(Errc::InvalidArgument, "gradcheck: need trials >= 1 and points >= 3");
    }

    struct Row {
        double max_abs = 0.0;
        double rel = 0.0;
        bool flagged = false;
    };
    std::vector<Row> rows(trials);

    parallel_for(trials, [&](std::size_t t) {
        // Independent generator per trial keeps output thread-count invariant.
        Rng rng(seed + t);
        OBB target = synth_target(rng, canvas);
        std::vector<Point2> pts;
        geom::ConvexPolygon hull;
        do {
            pts = synth_init(rng, canvas, k);
            hull = geom::convex_hull(pts);
        } while (hull.degenerate);

        auto g = losses::grad_ciou(RepPoints(pts), target);

        constexpr double h = 1e-5;
        std::vector<Point2> work = pts;
        double max_abs = 0.0, fd_inf = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double* coord[2] = {&work[i].x, &work[i].y};
            for (int axis = 0; axis < 2; ++axis) {
                double keep = *coord[axis];
                *coord[axis] = keep + h;
                double hi = losses::ciou(std::span<const Point2>(work), target);
                *coord[axis] = keep - h;
                double lo = losses::ciou(std::span<const Point2>(work), target);
                *coord[axis] = keep;
                double fd = (hi - lo) / (2.0 * h);
                fd_inf = std::max(fd_inf, std::abs(fd));
                max_abs = std::max(max_abs,
                                   std::abs(g.grad[2 * i + static_cast<std::size_t>(axis)] - fd));
            }
        }
        rows[t] = {max_abs, max_abs / std::max(1.0, fd_inf), g.near_non_smooth};
    });

    Output out(c.out);
    out.os() << "trial,flagged,max_abs_err,max_rel_err\n";
    std::size_t flagged = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        out.os() << t << ',' << (rows[t].flagged ? 1 : 0) << ',' << sci(rows[t].max_abs) << ','
                 << sci(rows[t].rel) << '\n';
        if (rows[t].flagged) {
            ++flagged;
        } else {
            worst = std::max(worst, rows[t].rel);
        }
    }
    std::cerr << "gradcheck: " << trials << " trials, " << flagged
              << " flagged, worst unflagged rel err " << sci(worst) << '\n';
}

void cmd_assign(const Common& c, const std::string& gts_dir) {
    auto cfg = c.config();
    double canvas = cfg.get_double("canvas", 128.0);
    assign::LevelConfig lcfg;
    lcfg.s = cfg.get_double("s", 16.0);
    lcfg.l_min = static_cast<int>(cfg.get_int("l_min", 2));
    lcfg.l_max = static_cast<int>(cfg.get_int("l_max", 6));

    std::vector<assign::FeatureGrid> grids;
    for (int l = lcfg.l_min; l <= lcfg.l_max; ++l) {
        grids.push_back(assign::FeatureGrid::for_level(l, canvas, canvas));
    }

    Output out(c.out);
    out.os() << "image_id,gt_index,category,level,col,row,point_x,point_y,out_of_extent\n";
    for (const auto& [id, anns] : read_image_annotations(gts_dir)) {
        if (anns.empty()) continue;
        std::vector<OBB> obbs;
        obbs.reserve(anns.size());
        for (const auto& a : anns) obbs.push_back(a.obb);
        for (const auto& a : assign::assign_init(obbs, grids, lcfg)) {
            out.os() << id << ',' << a.gt_index << ',' << anns[a.gt_index].category << ','
                     << a.level << ',' << a.col << ',' << a.row << ',' << fx(a.point.x) << ','
                     << fx(a.point.y) << ',' << (a.out_of_extent ? 1 : 0) << '\n';
        }
    }
}

sampler::DatasetIndex dataset_index(const std::string& gts_dir) {
    sampler::DatasetIndex ds;
    for (const auto& [id, anns] : read_image_annotations(gts_dir)) {
        std::set<std::string> cats;
        for (const auto& a : anns) cats.insert(a.category);
        ds.images.emplace_back(id, std::move(cats));
    }
    if (ds.images.empty()) {
        throw Error(Errc::EmptyInput, gts_dir + ": no .txt annotation files");
    }
    return ds;
}

void cmd_repeat_factors(const Common& c, const std::string& gts_dir) {
    auto cfg = c.config();
    double beta = cfg.get_double("beta", 0.3);
    auto table = sampler::repeat_factors(dataset_index(gts_dir), beta);

    Output out(c.out);
    out.os() << "scope,id,fraction,repeat\n";
    for (const auto& [cat, f] : table.category_fraction) {
        out.os() << "category," << cat << ',' << fx(f) << ',' << fx(table.category_repeat.at(cat))
                 << '\n';
    }
    for (const auto& [id, r] : table.image_repeat) {
        out.os() << "image," << id << ",," << fx(r) << '\n';
    }
}

void cmd_epoch(const Common& c, const std::string& gts_dir) {
    auto cfg = c.config();
    double beta = cfg.get_double("beta", 0.3);
    auto table = sampler::repeat_factors(dataset_index(gts_dir), beta);
    auto epoch = sampler::build_epoch(table, c.run_seed(cfg));

    Output out(c.out);
    out.os() << "position,image_id\n";
    for (std::size_t i = 0; i < epoch.size(); ++i) {
        out.os() << i << ',' << epoch[i] << '\n';
    }
}

void cmd_fit(const Common& c, const std::string& target_path, const std::string& init_path) {
    auto cfg = c.config();
    pipeline::FitConfig fit;
    fit.steps = static_cast<int>(cfg.get_int("steps", fit.steps));
    fit.lr = cfg.get_double("lr", fit.lr);
    fit.stop_ciou = cfg.get_double("stop_ciou", fit.stop_ciou);
    fit.grad_mode = parse_grad_mode(cfg.get_string("grad_mode", "analytic"));
    double canvas = cfg.get_double("canvas", 128.0);
    auto k = static_cast<std::size_t>(cfg.get_int("points", 9));

    // Missing pieces are synthesized from the seed, target first.
    Rng rng(c.run_seed(cfg));
    OBB target = target_path.empty() ? synth_target(rng, canvas) : read_corner_obb(target_path);
    std::vector<Point2> init =
        init_path.empty() ? synth_init(rng, canvas, k) : io::read_points(init_path);

    auto res = pipeline::fit_points(target, RepPoints(init), fit);

    Output out(c.out);
    out.os() << "step,ciou";
    for (std::size_t i = 0; i < init.size(); ++i) {
        out.os() << ",x" << i << ",y" << i;
    }
    out.os() << '\n';
    for (const auto& s : res.trajectory) {
        out.os() << s.step << ',' << fx(s.ciou);
        for (const auto& p : s.points) out.os() << ',' << fx(p.x) << ',' << fx(p.y);
        out.os() << '\n';
    }
    std::cerr << "fit: " << (res.converged ? "converged" : "did not converge") << " at ciou "
              << fx(res.trajectory.back().ciou) << " after " << res.trajectory.back().step
              << " steps\n";
}

void cmd_nms(const Common& c, const std::string& dets_path) {
    auto cfg = c.config();
    double iou_thr = cfg.get_double("iou_thr", 0.5);
    double score_thr = cfg.get_double("score_thr", 0.0);
    auto dets = io::read_detections(dets_path);

    std::map<std::string, std::vector<pipeline::Detection>> by_image;
    for (const auto& d : dets) {
        by_image[d.image_id].push_back({d.obb, d.category, d.score});
    }

    Output out(c.out);
    out.os() << "image_id,category,score,x1,y1,x2,y2,x3,y3,x4,y4\n";
    for (const auto& [id, image_dets] : by_image) {
        for (const auto& kept : pipeline::rotated_nms(image_dets, iou_thr, score_thr)) {
            out.os() << id << ',' << kept.category << ',' << fx(kept.score)
                     << corner_fields(kept.obb) << '\n';
        }
    }
}

void cmd_eval(const Common& c, const std::string& gts_dir, const std::string& dets_path) {
    auto cfg = c.config();
    double iou_thr = cfg.get_double("iou_thr", 0.5);
    auto gts = flatten_gts(read_image_annotations(gts_dir));
    auto dets = io::read_detections(dets_path);

    auto res07 = eval::evaluate(dets, gts, iou_thr, eval::ApMetric::Voc07);
    auto res12 = eval::evaluate(dets, gts, iou_thr, eval::ApMetric::Voc12);

    std::map<std::string, std::size_t> countable;
    std::size_t total = 0;
    for (const auto& g : gts) {
        if (!g.difficult) {
            ++countable[g.category];
            ++total;
        }
    }

    Output out(c.out);
    out.os() << "category,n_gt,ap_voc07,ap_voc12\n";
    for (const auto& [cat, ap07] : res07.ap) {
        out.os() << cat << ',' << countable.at(cat) << ',' << fx(ap07) << ','
                 << fx(res12.ap.at(cat)) << '\n';
    }
    out.os() << "mAP," << total << ',' << fx(res07.map) << ',' << fx(res12.map) << '\n';
}

void cmd_recall(const Common& c, const std::string& gts_dir, const std::string& props_path) {
    auto cfg = c.config();
    double iou_thr = cfg.get_double("iou_thr", 0.5);
    auto ks = cfg.get_doubles("ks", {300.0, 1000.0, 2000.0});
    auto gts = flatten_gts(read_image_annotations(gts_dir));
    auto props = io::read_detections(props_path);

    Output out(c.out);
    out.os() << "k,recall\n";
    for (double kd : ks) {
        if (!(kd >= 1.0)) throw Error(Errc::InvalidArgument, "recall: every k must be >= 1");
        auto k = static_cast<std::size_t>(kd);
        out.os() << k << ',' << fx(eval::recall_at_k(props, gts, k, iou_thr)) << '\n';
    }
}

void cmd_boundary_demo(const Common& c) {
    auto cfg = c.config();
    double aspect = cfg.get_double("aspect", 1.01);
    auto steps = static_cast<int>(cfg.get_int("steps", 360));
    Output out(c.out);
    out.os() << "step,phi,theta,corner_step\n";
    for (const auto& row : pipeline::boundary_demo(aspect, steps)) {
        out.os() << row.step << ',' << fx(row.phi) << ',' << fx(row.theta) << ','
                 << fx(row.corner_step) << '\n';
    }
}

void cmd_gen(const Common& c, const std::string& out_dir) {
    auto cfg = c.config();
    synth::SceneConfig scene;
    scene.canvas = cfg.get_double("canvas", scene.canvas);
    scene.images = static_cast<std::size_t>(cfg.get_int("images", 10));
    scene.objects_per_image = static_cast<std::size_t>(cfg.get_int("objects", 5));
    scene.frequencies = cfg.get_doubles("frequencies", scene.frequencies);
    scene.size_min = cfg.get_double("size_min", scene.size_min);
    scene.size_max = cfg.get_double("size_max", scene.size_max);
    scene.aspect_min = cfg.get_double("aspect_min", scene.aspect_min);
    scene.aspect_max = cfg.get_double("aspect_max", scene.aspect_max);
    scene.rot_min = cfg.get_double("rot_min", scene.rot_min);
    scene.rot_max = cfg.get_double("rot_max", scene.rot_max);
    scene.difficult_frac = cfg.get_double("difficult_frac", scene.difficult_frac);
    scene.proposals_per_gt = static_cast<std::size_t>(cfg.get_int("proposals_per_gt", 3));
    scene.jitter = cfg.get_double("jitter", scene.jitter);
    scene.seed = c.run_seed(cfg);

    auto ds = synth::generate(scene);

    namespace fs = std::filesystem;
    fs::path root(out_dir);
    fs::create_directories(root / "annotations");
    std::size_t n_ann = 0;
    for (const auto& img : ds.images) {
        io::write_annotations((root / "annotations" / (img.id + ".txt")).string(),
                              img.annotations);
        n_ann += img.annotations.size();
    }
    io::write_detections((root / "detections.txt").string(), ds.detections);
    io::write_detections((root / "proposals.txt").string(), ds.proposals);

    Output out(c.out);
    out.os() << "images,annotations,detections,proposals\n";
    out.os() << ds.images.size() << ',' << n_ann << ',' << ds.detections.size() << ','
             << ds.proposals.size() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oriented-box detection math toolkit"};
    app.require_subcommand(1);

    {
        auto* sub = app.add_subcommand("hull", "convex hull of a point file");
        auto c = add_common(sub);
        auto in = std::make_shared<std::string>();
        sub->add_option("--in", *in, "points file, `x y` per line")->required();
        sub->callback([c, in] { cmd_hull(*c, *in); });
    }
    {
        auto* sub = app.add_subcommand("minrect", "minimum-area enclosing rectangle");
        auto c = add_common(sub);
        auto in = std::make_shared<std::string>();
        sub->add_option("--in", *in, "points file, `x y` per line")->required();
        sub->callback([c, in] { cmd_minrect(*c, *in); });
    }
    {
        auto* sub = app.add_subcommand("ciou", "convex-hull GIoU between points and a box");
        auto c = add_common(sub);
        auto pred = std::make_shared<std::string>();
        auto target = std::make_shared<std::string>();
        sub->add_option("--pred", *pred, "prediction points file")->required();
        sub->add_option("--target", *target, "target box corner file (4 points)")->required();
        sub->callback([c, pred, target] { cmd_ciou(*c, *pred, *target); });
    }
    {
        auto* sub = app.add_subcommand("gradcheck", "analytic vs finite-difference gradients");
        auto c = add_common(sub);
        sub->callback([c] { cmd_gradcheck(*c); });
    }
    {
        auto* sub = app.add_subcommand("assign", "initial-stage lattice assignment");
        auto c = add_common(sub);
        auto gts = std::make_shared<std::string>();
        sub->add_option("--gts", *gts, "annotation directory")->required();
        sub->callback([c, gts] { cmd_assign(*c, *gts); });
    }
    {
        auto* sub = app.add_subcommand("repeat-factors", "category and image repeat factors");
        auto c = add_common(sub);
        auto gts = std::make_shared<std::string>();
        sub->add_option("--gts", *gts, "annotation directory")->required();
        sub->callback([c, gts] { cmd_repeat_factors(*c, *gts); });
    }
    {
        auto* sub = app.add_subcommand("epoch", "rebalanced epoch image list");
        auto c = add_common(sub);
        auto gts = std::make_shared<std::string>();
        sub->add_option("--gts", *gts, "annotation directory")->required();
        sub->callback([c, gts] { cmd_epoch(*c, *gts); });
    }
    {
        auto* sub = app.add_subcommand("fit", "gradient-ascent point fitting to a target box");
        auto c = add_common(sub);
        auto target = std::make_shared<std::string>();
        auto init = std::make_shared<std::string>();
        sub->add_option("--target", *target, "target corner file (default: synthesized)");
        sub->add_option("--init", *init, "initial points file (default: synthesized)");
        sub->callback([c, target, init] { cmd_fit(*c, *target, *init); });
    }
    {
        auto* sub = app.add_subcommand("nms", "per-image, per-category rotated NMS");
        auto c = add_common(sub);
        auto dets = std::make_shared<std::string>();
        sub->add_option("--dets", *dets, "detection file")->required();
        sub->callback([c, dets] { cmd_nms(*c, *dets); });
    }
    {
        auto* sub = app.add_subcommand("eval", "VOC07/VOC12 rotated mAP");
        auto c = add_common(sub);
        auto gts = std::make_shared<std::string>();
        auto dets = std::make_shared<std::string>();
        sub->add_option("--gts", *gts, "annotation directory")->required();
        sub->add_option("--dets", *dets, "detection file")->required();
        sub->callback([c, gts, dets] { cmd_eval(*c, *gts, *dets); });
    }
    {
        auto* sub = app.add_subcommand("recall", "proposal recall at top-k");
        auto c = add_common(sub);
        auto gts = std::make_shared<std::string>();
        auto props = std::make_shared<std::string>();
        sub->add_option("--gts", *gts, "annotation directory")->required();
        sub->add_option("--props", *props, "proposal file (detection format)")->required();
        sub->callback([c, gts, props] { cmd_recall(*c, *gts, *props); });
    }
    {
        auto* sub = app.add_subcommand("boundary-demo", "five-param angle wrap demonstration");
        auto c = add_common(sub);
        sub->callback([c] { cmd_boundary_demo(*c); });
    }
    {
        auto* sub = app.add_subcommand("gen", "synthetic long-tailed dataset");
        auto c = add_common(sub);
        auto dir = std::make_shared<std::string>();
        sub->add_option("--out-dir", *dir, "dataset output directory")->required();
        sub->callback([c, dir] { cmd_gen(*c, *dir); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
