#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "xbar/config.hpp"
#include "xbar/demo_mlp.hpp"
#include "xbar/errors.hpp"
#include "xbar/experiment.hpp"
#include "xbar/mvm.hpp"
#include "xbar/wagonn.hpp"
#include "xbar/weight_file.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

int cmd_interconnect(const std::string& config_path) {
    xbar::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = xbar::load_config(config_path);
    const xbar::WireModel m = xbar::built_wire_model(cfg);

    json out = {
        {"r_per_length_ohm_um", m.r_per_length_ohm_um},
        {"r_via_ohm", m.r_via_ohm},
        {"r_segment_sram_ohm", m.r_segment_sram_ohm},
        {"r_segment_fefet_ohm", m.r_segment_fefet_ohm},
    };
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_remap(const std::string& in_path, const std::string& out_path,
              const std::string& tv_path) {
    const xbar::WeightFile wf = xbar::read_weight_file(in_path);
    const auto slices = xbar::bit_slice(wf.weights, wf.bits, wf.is_signed);

    // row sums count stored bits over every slice column, because one
    // permutation must serve all slices of the crossbar
    xbar::BitMatrix physical(wf.weights.rows, wf.weights.cols * wf.bits);
    for (int r = 0; r < wf.weights.rows; ++r)
        for (int j = 0; j < wf.weights.cols; ++j)
            for (int k = 0; k < wf.bits; ++k)
                physical.at(r, j * wf.bits + k) = slices[k].at(r, j);

    const xbar::TrackingVector tv = xbar::build_tracking_vector(xbar::row_sums(physical));

    xbar::WeightFile out = wf;
    for (int r = 0; r < wf.weights.rows; ++r)
        for (int c = 0; c < wf.weights.cols; ++c)
            out.weights.at(tv.dest[r], c) = wf.weights.at(r, c);
    xbar::write_weight_file(out_path, out);

    const json tv_json = tv.dest;
    if (tv_path.empty()) {
        std::cout << tv_json.dump() << '\n';
    } else {
        std::ofstream tv_out(tv_path);
        if (!tv_out) throw xbar::ValidationError("cannot open for writing: " + tv_path);
        tv_out << tv_json.dump() << '\n';
    }
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 bool deterministic) {
    const xbar::ExperimentConfig cfg = xbar::load_config(config_path);
    const auto rows = xbar::run_experiments(cfg);

    if (out_path == "-") {
        xbar::write_csv(std::cout, cfg, rows, deterministic);
    } else {
        std::ofstream out(out_path);
        if (!out) throw xbar::ValidationError("cannot open for writing: " + out_path);
        xbar::write_csv(out, cfg, rows, deterministic);
    }

    int failed = 0;
    for (const auto& r : rows)
        if (!r.ok) ++failed;
    if (failed > 0)
        std::cerr << failed << " of " << rows.size() << " trials failed; see the report\n";
    return kExitOk;
}

int cmd_demo_mlp(const std::string& fixture_dir, bool zero_parasitics) {
    xbar::MlpDemoOptions opts;
    opts.zero_parasitics = zero_parasitics;
    const xbar::MlpDemoResult r = xbar::demo_mlp(fixture_dir, opts);
    json out = {
        {"exact_accuracy", r.exact_accuracy},
        {"baseline_accuracy", r.baseline_accuracy},
        {"wagonn_accuracy", r.wagonn_accuracy},
        {"samples", r.n_samples},
    };
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crossbar interconnect non-ideality simulator"};
    app.require_subcommand(1);

    std::string cfg_path;
    auto* sc_inter = app.add_subcommand(
        "interconnect", "print the wire model for a config (or the defaults) as JSON");
    sc_inter->add_option("-c,--config", cfg_path, "experiment config JSON");

    std::string remap_in, remap_out, remap_tv;
    auto* sc_remap =
        app.add_subcommand("remap", "row-sum sort a weight file; emit the tracking vector");
    sc_remap->add_option("weights", remap_in, "input weight file (XBW v1)")->required();
    sc_remap->add_option("-o,--output", remap_out, "remapped weight file")->required();
    sc_remap->add_option("--tv", remap_tv,
                         "tracking vector JSON path (stdout when omitted)");

    std::string sim_cfg, sim_out;
    bool deterministic = false;
    auto* sc_sim = app.add_subcommand("simulate", "run the experiment sweep to a CSV report");
    sc_sim->add_option("-c,--config", sim_cfg, "experiment config JSON")->required();
    sc_sim->add_option("-o,--output", sim_out, "report CSV path ('-' for stdout)")->required();
    sc_sim->add_flag("--deterministic", deterministic,
                     "suppress the timestamp line so reruns are byte-identical");

    std::string fixture_dir;
    bool zero_parasitics = false;
    auto* sc_demo = app.add_subcommand("demo-mlp", "classify the bundled MLP fixture");
    sc_demo->add_option("fixture_dir", fixture_dir, "fixture directory")->required();
    sc_demo->add_flag("--zero-parasitics", zero_parasitics, "solve with ideal wires");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (sc_inter->parsed()) return cmd_interconnect(cfg_path);
        if (sc_remap->parsed()) return cmd_remap(remap_in, remap_out, remap_tv);
        if (sc_sim->parsed()) return cmd_simulate(sim_cfg, sim_out, deterministic);
        if (sc_demo->parsed()) return cmd_demo_mlp(fixture_dir, zero_parasitics);
    } catch (const xbar::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const xbar::SimError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}
