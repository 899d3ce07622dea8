#include "xbar/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xbar/errors.hpp"

namespace xbar {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
    throw ValidationError("config " + ctx + ": " + what);
}

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(ctx, "expected a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(ctx, "unknown key '" + item.key() + "'");
    }
}

void read_num(const json& j, const std::string& ctx, const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) fail(ctx, std::string("'") + key + "' must be a number");
    out = j[key].get<double>();
}

void read_int(const json& j, const std::string& ctx, const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) fail(ctx, std::string("'") + key + "' must be an integer");
    out = j[key].get<int>();
}

void read_bool(const json& j, const std::string& ctx, const char* key, bool& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) fail(ctx, std::string("'") + key + "' must be a boolean");
    out = j[key].get<bool>();
}

void read_str(const json& j, const std::string& ctx, const char* key, std::string& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) fail(ctx, std::string("'") + key + "' must be a string");
    out = j[key].get<std::string>();
}

void parse_geometry(const json& j, WireGeometry& g) {
    const std::string ctx = "geometry";
    check_keys(j, ctx,
               {"width_nm", "height_nm", "taper_angle_deg", "liner_nm", "barrier_nm",
                "pitch_nm"});
    read_num(j, ctx, "width_nm", g.width_nm);
    read_num(j, ctx, "height_nm", g.height_nm);
    read_num(j, ctx, "taper_angle_deg", g.taper_angle_deg);
    read_num(j, ctx, "liner_nm", g.liner_nm);
    read_num(j, ctx, "barrier_nm", g.barrier_nm);
    read_num(j, ctx, "pitch_nm", g.pitch_nm);
}

void parse_scattering(const json& j, ScatteringParams& p) {
    const std::string ctx = "scattering";
    check_keys(j, ctx,
               {"rho_bulk_ohm_um", "mean_free_path_nm", "gb_reflection", "specularity",
                "grain_size_nm", "rho_liner_ohm_um", "rho_barrier_ohm_um"});
    read_num(j, ctx, "rho_bulk_ohm_um", p.rho_bulk_ohm_um);
    read_num(j, ctx, "mean_free_path_nm", p.mean_free_path_nm);
    read_num(j, ctx, "gb_reflection", p.gb_reflection);
    read_num(j, ctx, "specularity", p.specularity);
    read_num(j, ctx, "grain_size_nm", p.grain_size_nm);
    read_num(j, ctx, "rho_liner_ohm_um", p.rho_liner_ohm_um);
    read_num(j, ctx, "rho_barrier_ohm_um", p.rho_barrier_ohm_um);
}

void parse_leakage(const json& j, const std::string& ctx, CellTechnology& t) {
    check_keys(j, ctx, {"g_in1_w0", "g_in0_w1", "g_in0_w0"});
    read_num(j, ctx, "g_in1_w0", t.g_in1_w0);
    read_num(j, ctx, "g_in0_w1", t.g_in0_w1);
    read_num(j, ctx, "g_in0_w0", t.g_in0_w0);
}

void parse_cells(const json& j, CellOverrides& c) {
    const std::string ctx = "cells";
    check_keys(j, ctx, {"g_on", "v_t", "smoothing", "sram_leakage", "fefet_leakage"});
    read_num(j, ctx, "g_on", c.g_on);
    read_num(j, ctx, "v_t", c.v_t);
    read_num(j, ctx, "smoothing", c.smoothing);
    if (j.contains("sram_leakage")) parse_leakage(j["sram_leakage"], "cells.sram_leakage", c.sram);
    if (j.contains("fefet_leakage"))
        parse_leakage(j["fefet_leakage"], "cells.fefet_leakage", c.fefet);
}

void parse_adc(const json& j, AdcPolicy& a) {
    const std::string ctx = "adc";
    check_keys(j, ctx, {"scale_to_active_rows", "bits", "full_scale_a"});
    read_bool(j, ctx, "scale_to_active_rows", a.scale_to_active_rows);
    if (j.contains("bits")) {
        if (!j["bits"].is_number_integer()) fail(ctx, "'bits' must be an integer");
        a.bits_override = j["bits"].get<int>();
    }
    if (j.contains("full_scale_a")) {
        if (!j["full_scale_a"].is_number()) fail(ctx, "'full_scale_a' must be a number");
        a.full_scale_override = j["full_scale_a"].get<double>();
    }
}

void parse_weight_source(const json& j, WeightSource& w) {
    const std::string ctx = "weight_source";
    check_keys(j, ctx, {"kind", "density", "path"});
    std::string kind = "random";
    read_str(j, ctx, "kind", kind);
    if (kind == "random") {
        w.kind = WeightSource::Kind::Random;
        read_num(j, ctx, "density", w.density);
        if (j.contains("path")) fail(ctx, "'path' is only valid with kind 'file'");
    } else if (kind == "file") {
        w.kind = WeightSource::Kind::File;
        if (j.contains("density")) fail(ctx, "'density' is only valid with kind 'random'");
        read_str(j, ctx, "path", w.path);
        if (w.path.empty()) fail(ctx, "kind 'file' requires a 'path'");
    } else {
        fail(ctx, "kind must be 'random' or 'file'");
    }
}

void parse_input_source(const json& j, InputSource& in) {
    const std::string ctx = "input_source";
    check_keys(j, ctx, {"kind", "path"});
    std::string kind = "all_ones";
    read_str(j, ctx, "kind", kind);
    if (kind == "all_ones") {
        in.kind = InputSource::Kind::AllOnes;
    } else if (kind == "random") {
        in.kind = InputSource::Kind::Random;
    } else if (kind == "file") {
        in.kind = InputSource::Kind::File;
        read_str(j, ctx, "path", in.path);
        if (in.path.empty()) fail(ctx, "kind 'file' requires a 'path'");
        return;
    } else {
        fail(ctx, "kind must be 'all_ones', 'random', or 'file'");
    }
    if (j.contains("path")) fail(ctx, "'path' is only valid with kind 'file'");
}

ExperimentConfig parse_root(const json& j) {
    check_keys(j, "root",
               {"technology", "array_rows", "array_cols", "weight_bits", "signed_weights",
                "input_bits", "geometry", "scattering", "wire", "bias", "cells", "adc",
                "mapping", "schedule", "sigma", "seeds", "weight_source", "input_source"});

    ExperimentConfig cfg;

    if (j.contains("technology")) {
        std::string t;
        read_str(j, "root", "technology", t);
        cfg.technology = tech_from_name(t);
    }
    read_int(j, "root", "array_rows", cfg.array_rows);
    read_int(j, "root", "array_cols", cfg.array_cols);
    read_int(j, "root", "weight_bits", cfg.weight_bits);
    read_bool(j, "root", "signed_weights", cfg.signed_weights);
    read_int(j, "root", "input_bits", cfg.input_bits);

    if (j.contains("geometry")) parse_geometry(j["geometry"], cfg.geometry);
    if (j.contains("scattering")) parse_scattering(j["scattering"], cfg.scattering);

    if (j.contains("wire")) {
        const std::string ctx = "wire";
        const json& w = j["wire"];
        check_keys(w, ctx,
                   {"sram_cell_height_um", "r_driver_ohm", "r_sink_ohm", "r_via_ohm",
                    "zero_parasitics"});
        read_num(w, ctx, "sram_cell_height_um", cfg.sram_cell_height_um);
        read_num(w, ctx, "r_driver_ohm", cfg.r_driver_ohm);
        read_num(w, ctx, "r_sink_ohm", cfg.r_sink_ohm);
        read_num(w, ctx, "r_via_ohm", cfg.r_via_ohm);
        read_bool(w, ctx, "zero_parasitics", cfg.zero_parasitics);
    }

    if (j.contains("bias")) {
        check_keys(j["bias"], "bias", {"v_wl", "v_bl"});
        read_num(j["bias"], "bias", "v_wl", cfg.bias.v_wl);
        read_num(j["bias"], "bias", "v_bl", cfg.bias.v_bl);
    }

    if (j.contains("cells")) parse_cells(j["cells"], cfg.cells);
    if (j.contains("adc")) parse_adc(j["adc"], cfg.adc);

    if (j.contains("mapping")) {
        if (!j["mapping"].is_array()) fail("root", "'mapping' must be an array");
        cfg.mappings.clear();
        for (const auto& m : j["mapping"]) {
            if (!m.is_string()) fail("mapping", "entries must be strings");
            cfg.mappings.push_back(mapping_from_name(m.get<std::string>()));
        }
    }

    if (j.contains("schedule")) {
        if (!j["schedule"].is_array()) fail("root", "'schedule' must be an array");
        cfg.schedules.clear();
        for (const auto& s : j["schedule"]) {
            check_keys(s, "schedule[]", {"strategy", "groups"});
            ScheduleSpec spec;
            std::string name = "Full";
            read_str(s, "schedule[]", "strategy", name);
            spec.strategy = strategy_from_name(name);
            read_int(s, "schedule[]", "groups", spec.groups);
            cfg.schedules.push_back(spec);
        }
    }

    if (j.contains("sigma")) {
        if (!j["sigma"].is_array()) fail("root", "'sigma' must be an array");
        cfg.sigmas.clear();
        for (const auto& s : j["sigma"]) {
            if (!s.is_number()) fail("sigma", "entries must be numbers");
            cfg.sigmas.push_back(s.get<double>());
        }
    }

    if (j.contains("seeds")) {
        if (!j["seeds"].is_array()) fail("root", "'seeds' must be an array");
        cfg.seeds.clear();
        for (const auto& s : j["seeds"]) {
            if (!s.is_number_integer() || s.get<long long>() < 0)
                fail("seeds", "entries must be non-negative integers");
            cfg.seeds.push_back(s.get<std::uint64_t>());
        }
    }

    if (j.contains("weight_source")) parse_weight_source(j["weight_source"], cfg.weight_source);
    if (j.contains("input_source")) parse_input_source(j["input_source"], cfg.input_source);

    cfg.validate();
    return cfg;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (array_rows < 1 || array_cols < 1)
        throw ValidationError("config: array dimensions must be positive");
    if (weight_bits < 1 || weight_bits > 62)
        throw ValidationError("config: weight_bits must lie in [1, 62]");
    if (array_cols % weight_bits != 0)
        throw ValidationError("config: weight_bits must divide array_cols");
    if (input_bits < 1 || input_bits > 62)
        throw ValidationError("config: input_bits must lie in [1, 62]");
    if (mappings.empty() || schedules.empty() || sigmas.empty() || seeds.empty())
        throw ValidationError("config: mapping, schedule, sigma, and seeds must be non-empty");
    for (double s : sigmas)
        if (s < 0) throw ValidationError("config: sigma must be non-negative");
    for (const auto& s : schedules) {
        if (s.groups < 1) throw ValidationError("config: schedule groups must be positive");
        if (array_rows % s.groups != 0)
            throw ValidationError("config: schedule groups must divide array_rows");
        if (s.strategy == Strategy::Full && s.groups != 1)
            throw ValidationError("config: Full schedule takes exactly one group");
    }
    if (weight_source.kind == WeightSource::Kind::Random &&
        (weight_source.density < 0 || weight_source.density > 1))
        throw ValidationError("config: weight density must lie in [0, 1]");
    geometry.validate();
    scattering.validate();
    bias.validate();
    if (sram_cell_height_um < 0 || r_driver_ohm < 0 || r_sink_ohm < 0 || r_via_ohm < 0)
        throw ValidationError("config: wire resistances and cell height must be non-negative");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": JSON parse error: " + e.what());
    }
    return parse_root(j);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

WireModel built_wire_model(const ExperimentConfig& cfg) {
    return build_wire_model(cfg.geometry, cfg.scattering, cfg.sram_cell_height_um,
                            cfg.r_driver_ohm, cfg.r_sink_ohm, cfg.r_via_ohm);
}

WireModel effective_wire_model(const ExperimentConfig& cfg) {
    WireModel m = built_wire_model(cfg);
    if (cfg.zero_parasitics) {
        m.r_segment_sram_ohm = 0.0;
        m.r_segment_fefet_ohm = 0.0;
        m.r_driver_ohm = 0.0;
        m.r_sink_ohm = 0.0;
    }
    return m;
}

CellTechnology effective_technology(const ExperimentConfig& cfg) {
    CellTechnology t =
        cfg.technology == TechKind::FeFET ? cfg.cells.fefet : cfg.cells.sram;
    t.kind = cfg.technology;
    t.v_t = cfg.cells.v_t;
    t.smoothing = cfg.cells.smoothing;
    return calibrate(t, cfg.cells.g_on, cfg.bias);
}

std::string mapping_name(Mapping m) {
    return m == Mapping::Wagonn ? "Wagonn" : "Baseline";
}

Mapping mapping_from_name(const std::string& name) {
    if (name == "Baseline") return Mapping::Baseline;
    if (name == "Wagonn") return Mapping::Wagonn;
    throw ValidationError("unknown mapping: " + name);
}

std::string tech_name(TechKind k) {
    return k == TechKind::FeFET ? "FeFET" : "SRAM8T";
}

TechKind tech_from_name(const std::string& name) {
    if (name == "SRAM8T") return TechKind::SRAM8T;
    if (name == "FeFET") return TechKind::FeFET;
    throw ValidationError("unknown technology: " + name);
}

}  // namespace xbar
