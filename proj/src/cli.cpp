#include "nccut/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "nccut/export.hpp"
#include "nccut/metrics.hpp"
#include "nccut/roi_io.hpp"
#include "nccut/service.hpp"

namespace nccut {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string image, roi, out, config, trace, dimacs, dataset, roi_dir, host = "127.0.0.1", static_dir;
    bool nc_cut0 = false;
    double looseness = -1;
    int port = 8080;
    std::size_t max_pixels = StoreOptions{}.max_pixels;
    int idle_minutes = 30;
};

Config load_options_config(const Options& o)
{
    Config c = o.config.empty() ? Config{} : load_config(o.config);
    if (o.nc_cut0)
        c.indeterminacy_enabled = false;
    c.validate();
    return c;
}

void write_text(const fs::path& path, const std::string& text)
{
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

fs::path sidecar(const fs::path& out, const char* ext)
{
    fs::path p = out;
    p.replace_extension(ext);
    return p;
}

int cmd_segment(const Options& o, std::ostream& out)
{
    const Config cfg = load_options_config(o);
    SegSession s = init_session(load_image(fs::path(o.image)), load_polygon(o.roi), cfg);
    const SegmentResult r = segment(s);
    write_file(o.out, encode_mask_png(r.mask));
    if (!o.trace.empty())
        write_text(o.trace, trace_json(r, cfg.max_iterations).dump(2) + "\n");
    if (!o.dimacs.empty()) {
        std::ofstream f(o.dimacs);
        if (!f)
            throw InvalidPath("cannot write " + o.dimacs);
        write_dimacs(current_network(s), f);
    }
    out << "segmented " << s.image.width() << "x" << s.image.height() << " in " << r.trace.size()
        << " iteration(s) -> " << o.out << "\n";
    return 0;
}

int cmd_superpixels(const Options& o, std::ostream& out)
{
    const Config cfg = load_options_config(o);
    const PreparedImage p = prepare_regions(load_image(fs::path(o.image)), cfg);
    write_file(o.out, encode_png(label_image16(p.regions)));
    const nlohmann::json side = {{"width", p.regions.width()},
                                 {"height", p.regions.height()},
                                 {"region_count", p.regions.region_count()},
                                 {"boundaries", region_boundaries(p.regions)},
                                 {"regions", region_info(p.regions)}};
    write_text(sidecar(o.out, ".json"), side.dump() + "\n");
    out << p.regions.region_count() << " regions -> " << o.out << "\n";
    return 0;
}

int cmd_ncmap(const Options& o, std::ostream& out)
{
    const Config cfg = load_options_config(o);
    const SegSession s = init_session(load_image(fs::path(o.image)), load_polygon(o.roi), cfg);
    // seeds are the regions outside the ROI, as in the first iteration
    const NcResult nc = cfg.indeterminacy_enabled ? compute_nc(s.graph, s.seeds)
                                                  : compute_nc(s.graph.without_indeterminacy(), s.seeds);
    write_file(o.out, encode_png(truth_map(s.regions, nc)));
    write_text(sidecar(o.out, ".json"), nc_json(nc).dump() + "\n");
    out << "connectedness of " << nc.region_count() << " regions -> " << o.out << "\n";
    return 0;
}

int cmd_eval(const Options& o, std::ostream& out)
{
    DatasetOptions d;
    d.dataset = o.dataset;
    if (!o.roi_dir.empty())
        d.roi_dir = fs::path(o.roi_dir);
    else
        d.looseness_alpha = o.looseness;
    d.config = load_options_config(o);
    const DatasetReport report = evaluate_dataset(d);
    write_text(o.out, report_json(report));
    write_text(sidecar(o.out, ".csv"), report_csv(report));
    out << "evaluated " << report.evaluated << "/" << report.rows.size() << " images, mean ERR "
        << report.mean.err_percent << "% -> " << o.out << "\n";
    return report.evaluated == report.rows.size() ? 0 : 2;
}

int cmd_serve(const Options& o, std::ostream& out)
{
    ServiceOptions so;
    so.store.config = load_options_config(o);
    so.store.max_pixels = o.max_pixels;
    so.store.idle_timeout = std::chrono::minutes(o.idle_minutes);
    if (!o.static_dir.empty())
        so.static_dir = fs::path(o.static_dir);
    Service service(std::move(so));
    out << "listening on http://" << o.host << ":" << o.port << "\n" << std::flush;
    if (!service.listen(o.host, o.port))
        throw Error("cannot listen on " + o.host + ":" + std::to_string(o.port));
    return 0;
}

int default_port()
{
    if (const char* v = std::getenv("NCCUT_PORT")) {
        char* end = nullptr;
        const long p = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && p > 0 && p < 65536)
            return static_cast<int>(p);
    }
    return 8080;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    o.port = default_port();

    CLI::App app{"Interactive ROI segmentation with connectedness-guided graph cuts", "nccut"};
    app.require_subcommand(1);

    auto* seg = app.add_subcommand("segment", "Segment an image inside a polygon ROI");
    seg->add_option("--image", o.image, "Input PNG")->required()->check(CLI::ExistingFile);
    seg->add_option("--roi", o.roi, "ROI polygon JSON")->required()->check(CLI::ExistingFile);
    seg->add_option("--out", o.out, "Output mask PNG")->required();
    seg->add_option("--config", o.config, "Config file (key = value)")->check(CLI::ExistingFile);
    seg->add_option("--trace", o.trace, "Write the per-iteration trace as JSON");
    seg->add_option("--dimacs", o.dimacs, "Write the last flow network in DIMACS form");
    seg->add_flag("--nc-cut0", o.nc_cut0, "Disable indeterminacy");

    auto* sp = app.add_subcommand("superpixels", "Write the superpixel label image");
    sp->add_option("--image", o.image, "Input PNG")->required()->check(CLI::ExistingFile);
    sp->add_option("--out", o.out, "16-bit label PNG; a .json sidecar is written next to it")->required();
    sp->add_option("--config", o.config, "Config file (key = value)")->check(CLI::ExistingFile);

    auto* nc = app.add_subcommand("ncmap", "Render the connectedness map from the regions outside the ROI");
    nc->add_option("--image", o.image, "Input PNG")->required()->check(CLI::ExistingFile);
    nc->add_option("--roi", o.roi, "ROI polygon JSON")->required()->check(CLI::ExistingFile);
    nc->add_option("--out", o.out, "False-color PNG; a .json sidecar is written next to it")->required();
    nc->add_option("--config", o.config, "Config file (key = value)")->check(CLI::ExistingFile);
    nc->add_flag("--nc-cut0", o.nc_cut0, "Disable indeterminacy");

    auto* ev = app.add_subcommand("eval", "Evaluate on a dataset (images/ and gt/ subdirectories)");
    ev->add_option("--dataset", o.dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    auto* roi_dir = ev->add_option("--roi-dir", o.roi_dir, "Directory of NAME.json ROI polygons")
                        ->check(CLI::ExistingDirectory);
    auto* loose = ev->add_option("--looseness", o.looseness, "Box ROI from the ground truth loosened by this fraction")
                      ->check(CLI::Range(0.0, 1.0));
    roi_dir->excludes(loose);
    ev->add_option("--out", o.out, "Report JSON; a .csv is written next to it")->required();
    ev->add_option("--config", o.config, "Config file (key = value)")->check(CLI::ExistingFile);
    ev->add_flag("--nc-cut0", o.nc_cut0, "Disable indeterminacy");

    auto* sv = app.add_subcommand("serve", "Run the local HTTP service");
    sv->add_option("--port", o.port, "Port (default $NCCUT_PORT or 8080)")->check(CLI::Range(1, 65535));
    sv->add_option("--host", o.host, "Bind address");
    sv->add_option("--static", o.static_dir, "Serve this directory at /")->check(CLI::ExistingDirectory);
    sv->add_option("--max-pixels", o.max_pixels, "Largest accepted image")->check(CLI::PositiveNumber);
    sv->add_option("--idle-minutes", o.idle_minutes, "Session idle expiry")->check(CLI::PositiveNumber);
    sv->add_option("--config", o.config, "Config file (key = value)")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
        if (ev->parsed() && roi_dir->count() == 0 && loose->count() == 0)
            throw CLI::RequiredError("eval needs --roi-dir or --looseness");
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return 1;
    }

    try {
        if (seg->parsed())
            return cmd_segment(o, out);
        if (sp->parsed())
            return cmd_superpixels(o, out);
        if (nc->parsed())
            return cmd_ncmap(o, out);
        if (ev->parsed())
            return cmd_eval(o, out);
        return cmd_serve(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace nccut
