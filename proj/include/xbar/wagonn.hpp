#pragma once

#include <cstdint>
#include <vector>

#include "xbar/bitmatrix.hpp"
#include "xbar/errors.hpp"

namespace xbar {

// Row permutation as destination addresses: original row r moves to physical
// row dest[r]. Row 0 is the top of the array; row N-1 sits next to the ADC.
struct TrackingVector {
    std::vector<int> dest;

    void validate() const;  // must be a permutation of 0..N-1
};

std::vector<int> row_sums(const BitMatrix& w);

// Stable ascending sort of the row sums: the largest row-sum lands on the
// bottom (ADC-adjacent) row, ties keep original order.
TrackingVector build_tracking_vector(const std::vector<int>& sums);

BitMatrix remap_weights(const BitMatrix& w, const TrackingVector& tv);

template <typename T>
std::vector<T> remap_inputs(const std::vector<T>& x, const TrackingVector& tv) {
    tv.validate();
    if (x.size() != tv.dest.size())
        throw ValidationError("remap_inputs: input length must match the tracking vector");
    std::vector<T> out(x.size());
    for (std::size_t r = 0; r < x.size(); ++r) out[tv.dest[r]] = x[r];
    return out;
}

// Input re-mapping unit cost: remapping streams one row per cycle, so a full
// remap costs n_rows cycles against the multi-cycle MVM baseline.
struct IruCostModel {
    int n_rows = 128;
    int adcs_per_xbar = 1;
    int adc_conversion_cycles = 1;
    int cols = 128;

    void validate() const;
};

struct IruLatency {
    long long remap_cycles = 0;
    long long baseline_mvm_cycles = 0;
    double overhead_fraction = 0.0;
};

IruLatency iru_latency(const IruCostModel& m);

}  // namespace xbar
