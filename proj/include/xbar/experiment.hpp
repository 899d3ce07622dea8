#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "xbar/config.hpp"
#include "xbar/mvm.hpp"

namespace xbar {

struct TrialAxes {
    int index = 0;
    Mapping mapping = Mapping::Baseline;
    ScheduleSpec schedule;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

// One CSV row. Failed trials keep their axes and carry a message instead of
// metrics, so a long sweep survives isolated solver failures.
struct TrialRow {
    TrialAxes axes;
    bool ok = false;
    std::string message;
    double mean_abs_err = 0.0;
    double mean_analog_err = 0.0;
    double rmse = 0.0;
    long long max_err = 0;
    long long total_ideal = 0;
    long long total_measured = 0;
    double total_analog_a = 0.0;
    long long newton_iters_total = 0;
    int newton_iters_max = 0;
    double max_residual_a = 0.0;
};

// Deterministic weight/input generation for a trial seed. Random weights
// draw every stored bit Bernoulli(density) (two's complement when signed);
// random inputs are uniform over the representable range. Streams are salted
// apart so weights, inputs, and variation never share draws.
IntMatrix trial_weights(const ExperimentConfig& cfg, std::uint64_t seed);
std::vector<long long> trial_inputs(const ExperimentConfig& cfg, std::uint64_t seed);

// Cartesian product of mapping x schedule x sigma x seed, seed innermost.
// Trials sharing a seed see identical weights, inputs, and variation, which
// is what makes cross-mapping comparisons paired. XBAR_THREADS caps workers.
std::vector<TrialRow> run_experiments(const ExperimentConfig& cfg);

// Stable schema; --deterministic suppresses the timestamp comment line so
// reruns are byte-identical.
void write_csv(std::ostream& out, const ExperimentConfig& cfg,
               const std::vector<TrialRow>& rows, bool deterministic);

std::string csv_header();

}  // namespace xbar
