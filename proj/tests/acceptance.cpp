// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
// Usage: acceptance <path to the nccut binary>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "nccut/metrics.hpp"
#include "nccut/nc_cut.hpp"
#include "nccut/pipeline.hpp"
#include "nccut/png_io.hpp"
#include "nccut/roi_io.hpp"
#include "oracles.hpp"

using namespace nccut;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail)
{
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    failures += !pass;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

SeedSet random_seeds(fixtures::Noise& rng, int n)
{
    std::vector<std::int32_t> s{static_cast<std::int32_t>(rng.engine()() % std::uint64_t(n))};
    if (n > 2 && rng.unit() < 0.5)
        s.push_back(static_cast<std::int32_t>(rng.engine()() % std::uint64_t(n)));
    return SeedSet(std::move(s), static_cast<std::size_t>(n));
}

// reached non-seed regions whose value beats their parent's
std::size_t monotonicity_violations(const NcResult& nc)
{
    std::size_t bad = 0;
    for (std::size_t r = 0; r < nc.region_count(); ++r) {
        const auto ri = static_cast<std::int32_t>(r);
        if (nc.is_seed(ri) || !nc.reached(ri))
            continue;
        const auto p = static_cast<std::size_t>(nc.forest.parent[r]);
        if (nc.values[r].truth > nc.values[p].truth || nc.values[r].indeterminacy < nc.values[p].indeterminacy)
            ++bad;
    }
    return bad;
}

void nc_oracle_equivalence()
{
    fixtures::Noise rng(1001);
    int exact = 0, truth_only = 0;
    const int total = 100;
    bool oracle_agrees = true;
    const auto t0 = Clock::now();
    for (int k = 0; k < total; ++k) {
        const int n = 2 + static_cast<int>(rng.engine()() % 8);
        const RegionGraph g = fixtures::random_graph(rng, n, 0.2 + 0.6 * rng.unit());
        const SeedSet seeds = random_seeds(rng, n);
        const NcResult nc = compute_nc(g, seeds);
        const auto brute = brute_force_nc(g, seeds);
        // the library brute force is itself checked against explicit path enumeration
        oracle_agrees = oracle_agrees && brute == oracle::path_nc(g, seeds.regions());
        bool same = true, same_t = true;
        for (int r = 0; r < n; ++r) {
            same = same && nc.values[static_cast<std::size_t>(r)] == brute[static_cast<std::size_t>(r)];
            same_t = same_t && nc.values[static_cast<std::size_t>(r)].truth == brute[static_cast<std::size_t>(r)].truth;
        }
        exact += same;
        truth_only += same_t;
    }
    const double secs = seconds_since(t0);
    report("nc-oracle-equivalence", exact == total && oracle_agrees && secs < 5,
           std::to_string(exact) + "/" + std::to_string(total) + " graphs exact on (T, I), " + std::to_string(truth_only) +
               "/" + std::to_string(total) + " on T; brute force matches path enumeration: " +
               (oracle_agrees ? "yes" : "no") + "; " + fmt(secs, 3) + " s (limit 5 s)");
}

void forest_monotonicity()
{
    fixtures::Noise rng(2002);
    std::size_t bad = 0, graphs = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 2 + static_cast<int>(rng.engine()() % 11);
        const RegionGraph g = fixtures::random_graph(rng, n, 0.3 + 0.5 * rng.unit());
        const SeedSet seeds = random_seeds(rng, n);
        bad += monotonicity_violations(compute_nc(g, seeds));
        bad += monotonicity_violations(compute_nc(g.without_indeterminacy(), seeds));
        ++graphs;
    }
    const Config cfg;
    for (const auto& f : {fixtures::two_tone_square(), fixtures::noisy_ellipse(), fixtures::ring_with_hole()}) {
        const PixelBox box = loosen_box(bounding_box(f.gt), f.gt.width(), f.gt.height(), 0.5);
        const SegSession s = init_session(f.image, box_polygon(box), cfg);
        bad += monotonicity_violations(compute_nc(s.graph, s.seeds));
        bad += monotonicity_violations(compute_nc(s.graph.without_indeterminacy(), s.seeds));
        ++graphs;
    }
    const auto nine = fixtures::nine_region_grid();
    bad += monotonicity_violations(compute_nc(nine.graph, SeedSet({0, 2}, 9)));
    ++graphs;
    report("forest-monotonicity", bad == 0,
           std::to_string(bad) + " violations over " + std::to_string(graphs) + " graphs (random and fixtures)");
}

NcResult two_region_nc(double t_t, double t_r)
{
    // seed 0, parent t = 1, child r = 2
    NcResult nc;
    nc.values = {{1, 0}, {t_t, 0}, {t_r, 0}};
    nc.forest.parent = {0, 0, 1};
    nc.forest.root = {0, 0, 0};
    nc.seeds = SeedSet({0}, 3);
    return nc;
}

void parent_child_ordering()
{
    fixtures::Noise rng(3003);
    int holds = 0, weights_match = 0;
    const double delta_nc = Config{}.delta_nc;
    for (int k = 0; k < 1000; ++k) {
        double a = 1e-3 + (1 - 2e-3) * rng.unit(), b = 1e-3 + (1 - 2e-3) * rng.unit();
        if (k % 50 == 0)
            b = a; // equal connectedness is part of the claim
        const double t_t = std::max(a, b), t_r = std::min(a, b);
        const NcResult nc = two_region_nc(t_t, t_r);
        ModifiedForest mf{nc.forest.parent, nc.forest.root, std::vector<std::vector<std::int32_t>>(3)};
        const RegionWeights rw = region_weights(nc, mf, delta_nc);
        // independent weights from the definitions
        const double wr1 = -std::log(t_r), wr0 = -std::log(1 - t_r);
        const double wt1 = -std::log(t_t), wt0 = -std::log(1 - t_t);
        // the seed's T = 1 is clamped to 1 - 1e-6 before taking logs
        const double seed_t = 1 - 1e-6;
        const double lambda = std::max({wr1, wr0, wt1, wt0, -std::log(seed_t), -std::log(1 - seed_t)}) + 1;
        const double wrt = lambda * std::exp(-(t_t - t_r) * (t_t - t_r) / (2 * delta_nc * delta_nc));
        const auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
        weights_match += close(rw.to_object[2], wr1) && close(rw.to_background[2], wr0) &&
                         close(rw.to_object[1], wt1) && close(rw.to_background[1], wt0) &&
                         close(rw.link(2, 1), wrt);
        // inverted: r background, t object
        const double inverted = rw.to_object[2] + rw.to_background[1] + rw.link(2, 1);
        const double cb = rw.to_background[2] + rw.to_object[1] + rw.link(2, 1);
        const double cc = rw.to_object[2] + rw.to_object[1];
        const double cd = rw.to_background[2] + rw.to_background[1];
        holds += std::min({cb, cc, cd}) < inverted;
    }

    int avoided = 0;
    for (int k = 0; k < 200; ++k) {
        double a = 0.01 + 0.98 * rng.unit(), b = 0.01 + 0.98 * rng.unit();
        const double t_t = std::max(a, b), t_r = std::min(a, b);
        const NcResult nc = two_region_nc(t_t, t_r);
        ModifiedForest mf{nc.forest.parent, nc.forest.root, std::vector<std::vector<std::int32_t>>(3)};
        const RegionWeights rw = region_weights(nc, mf, delta_nc);
        FlowNetwork net;
        net.resize(2); // node 0 = r, node 1 = t
        net.cost0 = {rw.to_object[2], rw.to_object[1]};
        net.cost1 = {rw.to_background[2], rw.to_background[1]};
        net.links.push_back({0, 1, rw.link(2, 1)});
        const CutResult cut = max_flow_min_cut(net);
        avoided += !(cut.labeling[0] == 0 && cut.labeling[1] == 1);
    }
    report("parent-child-ordering", holds == 1000 && weights_match == 1000 && avoided == 200,
           "inequality holds on " + std::to_string(holds) + "/1000 (weights match definitions on " +
               std::to_string(weights_match) + "/1000); solver avoids the inverted labeling on " + std::to_string(avoided) + "/200");
}

void maxflow_correctness()
{
    fixtures::Noise rng(4004);
    int good = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = 1 + static_cast<int>(rng.engine()() % 8);
        FlowNetwork net;
        net.resize(static_cast<std::size_t>(n));
        // integer capacities keep every sum exact
        for (int i = 0; i < n; ++i) {
            net.cost0[static_cast<std::size_t>(i)] = double(rng.engine()() % 21);
            net.cost1[static_cast<std::size_t>(i)] = double(rng.engine()() % 21);
        }
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (rng.unit() < 0.5)
                    net.links.push_back({a, b, double(rng.engine()() % 16)});
        const CutResult cut = max_flow_min_cut(net);
        const auto en = oracle::enumerate_cut(net);
        good += cut.cut_value == en.min_energy && cut.flow == en.min_energy &&
                oracle::labeling_energy(net, cut.labeling) == en.min_energy;
    }
    report("maxflow-correctness", good == 100, std::to_string(good) + "/100 networks match exhaustive enumeration");
}

void nine_region()
{
    const auto f = fixtures::nine_region_grid();
    const SeedSet seeds({0, 2}, 9);
    const NcResult with_i = compute_nc(f.graph, seeds);
    const NcResult without_i = compute_nc(f.graph.without_indeterminacy(), seeds);
    const auto& noisy = with_i.values[1];
    const auto& clean = with_i.values[3];
    const bool pass = noisy.truth == clean.truth && noisy.indeterminacy > clean.indeterminacy &&
                      with_i.forest.parent != without_i.forest.parent;
    report("nine-region-analog", pass,
           "noisy region (T " + fmt(noisy.truth) + ", I " + fmt(noisy.indeterminacy) + ") vs clean (T " +
               fmt(clean.truth) + ", I " + fmt(clean.indeterminacy) + "); forests differ: " +
               (with_i.forest.parent != without_i.forest.parent ? "yes" : "no"));
}

struct RingRun {
    MetricsReport m;
    std::size_t hole = 0, hole_kept = 0, iterations = 0;
    double secs = 0;
    bool pass() const
    {
        // the blob counts as excluded when under 5% of it stays in the mask
        return 20 * hole_kept < hole && m.err_percent < 2 && m.rand_index > 0.97 && secs < 10;
    }
};

RingRun run_ring(std::uint64_t seed)
{
    const auto f = fixtures::ring_with_hole(20, seed);
    const PixelBox box = loosen_box(bounding_box(f.gt), 200, 200, 0.5);
    RingRun out;
    const auto t0 = Clock::now();
    SegSession s = init_session(f.image, box_polygon(box), Config{});
    const SegmentResult r = segment(s);
    out.secs = seconds_since(t0);
    out.m = compute_metrics(r.mask, f.gt, s.roi_mask);
    out.iterations = r.trace.size();
    for (int y = 0; y < 200; ++y)
        for (int x = 0; x < 200; ++x)
            if (std::hypot(x + 0.5 - 100, y + 0.5 - 100) < 20) {
                ++out.hole;
                out.hole_kept += r.mask.at(x, y);
            }
    return out;
}

// The canonical noise seed plus nine other draws of the same fixture: a
// single realization is not evidence that the blob is excluded.
void end_to_end()
{
    const RingRun canon = run_ring(7);
    int passed = canon.pass();
    double worst_err = canon.m.err_percent, worst_ri = canon.m.rand_index, worst_secs = canon.secs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        if (seed == 7)
            continue;
        const RingRun r = run_ring(seed);
        passed += r.pass();
        worst_err = std::max(worst_err, r.m.err_percent);
        worst_ri = std::min(worst_ri, r.m.rand_index);
        worst_secs = std::max(worst_secs, r.secs);
    }
    report("end-to-end-ring", passed == 10,
           std::to_string(passed) + "/10 noise draws pass (ERR < 2%, RI > 0.97, < 5% of hole kept, < 10 s); "
           "canonical draw ERR " + fmt(canon.m.err_percent) + "%, RI " + fmt(canon.m.rand_index) + ", hole kept " +
               std::to_string(canon.hole_kept) + "/" + std::to_string(canon.hole) + "; worst ERR " + fmt(worst_err) +
               "%, worst RI " + fmt(worst_ri) + ", slowest " + fmt(worst_secs, 3) + " s");
}

void roi_insensitivity()
{
    const Config cfg;
    bool pass = true;
    std::string detail;
    // the ring sits on a wider canvas: at 200 x 200 only the full-image box
    // reaches looseness 2, and that box leaves no background seeds
    auto padded_ring = fixtures::ring_with_hole(20, 7, 300);
    padded_ring.name = "ring_with_hole_300";
    for (const auto& f : {fixtures::two_tone_square(), fixtures::noisy_ellipse(), padded_ring}) {
        const auto sweep = looseness_sweep(f.gt, 10);
        const auto loose = std::find_if(sweep.begin(), sweep.end(), [](const auto& l) { return l.looseness >= 2; });
        if (loose == sweep.end()) {
            pass = false;
            detail += f.name + ": no level reaches looseness 2; ";
            continue;
        }
        auto run = [&](const PixelBox& b) {
            SegSession s = init_session(f.image, box_polygon(b), cfg);
            return segment(s).mask;
        };
        const Mask tight = run(sweep.front().box);
        const Mask wide = run(loose->box);
        std::size_t diff = 0;
        for (std::size_t i = 0; i < tight.size(); ++i)
            diff += tight[i] != wide[i];
        const double pct = 100.0 * double(diff) / double(tight.size());
        pass = pass && pct < 1.0;
        detail += f.name + " " + fmt(pct, 3) + "% (looseness " + fmt(loose->looseness, 3) + "); ";
    }
    report("roi-insensitivity", pass, detail + "limit 1%");
}

void metrics_identities()
{
    const auto f = fixtures::noisy_ellipse();
    const MetricsReport id = compute_metrics(f.gt, f.gt, Mask(f.gt.width(), f.gt.height(), 1));
    const bool ident = id.err_percent == 0 && id.rand_index == 1 && id.gce == 0 && id.bde == 0 && id.iou_obj == 1 &&
                       id.iou_bkg == 1 && id.iou_avg == 1;
    Mask pred(2, 2, 0), gt(2, 2, 1);
    pred[0] = pred[1] = 1;
    const MetricsReport h = compute_metrics(pred, gt, Mask(2, 2, 1));
    const bool hand = h.err_percent == 50 && std::abs(h.rand_index - 1.0 / 3) <= 1e-9 && h.iou_avg == 0.25;
    report("metrics-identities", ident && hand,
           std::string("identical masks exact: ") + (ident ? "yes" : "no") + "; 4-pixel example ERR " +
               fmt(h.err_percent) + ", RI " + fmt(h.rand_index, 10) + ", IoU_avg " + fmt(h.iou_avg));
}

void determinism(const std::string& exe)
{
    const fs::path dir = fs::temp_directory_path() / "nccut_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto f = fixtures::noisy_ellipse();
    write_file(dir / "img.png", encode_png(f.image));
    const std::string poly = polygon_json({{15, 20}, {150, 10}, {140, 110}, {20, 100}});
    write_file(dir / "roi.json", std::span(reinterpret_cast<const std::uint8_t*>(poly.data()), poly.size()));
    auto run = [&](const char* out) {
        const std::string cmd = "\"" + exe + "\" segment --image \"" + (dir / "img.png").string() + "\" --roi \"" +
                                (dir / "roi.json").string() + "\" --out \"" + (dir / out).string() + "\" > /dev/null";
        return std::system(cmd.c_str());
    };
    const int a = run("a.png"), b = run("b.png");
    bool same = false;
    if (a == 0 && b == 0)
        same = read_file(dir / "a.png") == read_file(dir / "b.png");
    report("determinism", same,
           a == 0 && b == 0 ? (same ? "two segment runs wrote identical mask files" : "mask files differ")
                            : "segment exited with " + std::to_string(a) + " / " + std::to_string(b));
    fs::remove_all(dir);
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <nccut binary>\n";
        return 2;
    }
    const std::vector<std::function<void()>> checks{nc_oracle_equivalence, forest_monotonicity, parent_child_ordering,
                                                    maxflow_correctness,   nine_region,         end_to_end,
                                                    roi_insensitivity,     metrics_identities,
                                                    [&] { determinism(argv[1]); }};
    for (const auto& check : checks) {
        try {
            check();
        } catch (const std::exception& e) {
            report("exception", false, e.what());
        }
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
