#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xbar/cells.hpp"
#include "xbar/interconnect.hpp"
#include "xbar/mvm.hpp"
#include "xbar/schedule.hpp"
#include "xbar/solver.hpp"

namespace xbar {

struct ScheduleSpec {
    Strategy strategy = Strategy::Full;
    int groups = 1;
};

struct WeightSource {
    enum class Kind { Random, File };
    Kind kind = Kind::Random;
    double density = 0.5;  // probability of a stored bit being 1
    std::string path;
};

struct InputSource {
    enum class Kind { AllOnes, Random, File };
    Kind kind = Kind::AllOnes;
    std::string path;
};

struct CellOverrides {
    double g_on = 1.6e-5;
    double v_t = 0.25;
    double smoothing = 0.05;
    CellTechnology sram = default_sram_tech();
    CellTechnology fefet = default_fefet_tech();
};

// One experiment sweep: the Cartesian product of mapping, schedule, sigma,
// and seed runs against a fixed device and array configuration.
struct ExperimentConfig {
    TechKind technology = TechKind::SRAM8T;
    int array_rows = 128;
    int array_cols = 128;  // physical columns; weight columns times weight_bits
    int weight_bits = 1;
    bool signed_weights = false;
    int input_bits = 1;

    WireGeometry geometry;
    ScatteringParams scattering;
    double sram_cell_height_um = 0.110;
    double r_driver_ohm = 100.0;
    double r_sink_ohm = 100.0;
    double r_via_ohm = 78.0;
    bool zero_parasitics = false;

    BiasConfig bias;
    CellOverrides cells;
    AdcPolicy adc;

    std::vector<Mapping> mappings = {Mapping::Baseline};
    std::vector<ScheduleSpec> schedules = {{Strategy::Full, 1}};
    std::vector<double> sigmas = {0.0};
    std::vector<std::uint64_t> seeds = {0};

    WeightSource weight_source;
    InputSource input_source;

    void validate() const;
};

// Parses the JSON schema documented in the README. Unknown keys anywhere in
// the document are a hard error; omitted keys take the defaults above.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

// Physical wire model for the config (ignores zero_parasitics, which is a
// simulation override applied by the runner).
WireModel built_wire_model(const ExperimentConfig& cfg);

// Wire model as the simulator sees it: zero_parasitics nulls the segment,
// driver, and sink resistances.
WireModel effective_wire_model(const ExperimentConfig& cfg);

// Leakage table for the configured technology, calibrated at the configured
// bias so the ON state hits g_on.
CellTechnology effective_technology(const ExperimentConfig& cfg);

std::string mapping_name(Mapping m);
Mapping mapping_from_name(const std::string& name);
std::string tech_name(TechKind k);
TechKind tech_from_name(const std::string& name);

}  // namespace xbar
