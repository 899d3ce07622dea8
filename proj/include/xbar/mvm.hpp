#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xbar/bitmatrix.hpp"
#include "xbar/cells.hpp"
#include "xbar/interconnect.hpp"
#include "xbar/schedule.hpp"
#include "xbar/solver.hpp"

namespace xbar {

struct AdcConfig {
    int bits = 8;
    double full_scale = 0.0;  // amperes at the top code

    double lsb() const { return full_scale / ((1LL << bits) - 1); }
    void validate() const;
};

// Exact-count resolution for a cycle that can fire active_rows cells: the
// LSB is one unit ON current, the code range covers every possible count.
AdcConfig exact_count_adc(int active_rows, double unit_current);

long long adc_quantize(double i_amps, const AdcConfig& cfg);

// LSB-first bit planes; in signed mode the top slice carries weight
// -2^(bits-1) (two's complement recombination).
std::vector<BitMatrix> bit_slice(const IntMatrix& weights, int bits_per_weight,
                                 bool signed_weights);

long long slice_weight(int slice_index, int bits_per_weight, bool signed_weights);

// Everything needed to place one logical weight matrix into a physical
// array. Physical column j*bits_per_weight + k holds slice k of weight
// column j, so all slices of a weight live in adjacent columns.
struct MvmSetup {
    IntMatrix weights;
    int bits_per_weight = 1;
    bool signed_weights = false;
    Mapping mapping = Mapping::Baseline;
    WireModel wire;
    CellTechnology tech;
    BiasConfig bias;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

// Slices, draws per-cell variation on the unmapped grid, then maps (computing
// the tracking vector from physical row sums when mapping is Wagonn). The
// multipliers travel with their rows through the remap, so equal seeds give
// each weight the same variation draw under either mapping.
CrossbarInstance build_crossbar(const MvmSetup& setup);

struct AdcPolicy {
    bool scale_to_active_rows = true;
    std::optional<int> bits_override;
    std::optional<double> full_scale_override;
};

struct MvmReport {
    std::vector<long long> ideal;
    std::vector<long long> measured;
    std::vector<long long> abs_err;
    std::vector<double> analog_mvm;       // pre-ADC recombined value, count units
    std::vector<double> analog_currents;  // per physical column, summed over cycles
    double mean_abs_err = 0.0;
    double mean_analog_err = 0.0;  // mean |ideal - analog_mvm|, quantization-free
    double rmse = 0.0;
    long long max_err = 0;
    long long newton_iters_total = 0;
    int newton_iters_max = 0;
    double max_residual = 0.0;
    std::string config_echo;
};

// Streams x bit-serially through the placed crossbar: per input bit and
// schedule group, sets the gate bits, solves every column, quantizes, then
// recombines codes across groups, weight slices, and input bits. The ideal
// reference is computed by exact integer arithmetic on (weights, x).
MvmReport mvm_execute(const MvmSetup& setup, CrossbarInstance& xbar,
                      const std::vector<long long>& x, int input_bits,
                      const ActivationSchedule& schedule, const AdcPolicy& adc);

struct ErrorStats {
    double mean_abs_err = 0.0;  // mean over trials of per-trial mean abs error
    double rmse = 0.0;          // pooled over all columns of all trials
    double p95_err = 0.0;       // 95th percentile of per-trial mean abs error
    double win_rate = 0.0;      // fraction of pairs where candidate beats baseline
    double mean_diff = 0.0;     // mean of (candidate - baseline) per-trial means
    int wins = 0;
    int ties = 0;
    int losses = 0;
};

// Pairs candidate[i] with baseline[i]; trials must line up by seed.
ErrorStats error_stats(const std::vector<MvmReport>& candidate,
                       const std::vector<MvmReport>& baseline);

}  // namespace xbar
