#include "xbar/wagonn.hpp"

#include <algorithm>
#include <numeric>

#include "xbar/errors.hpp"

namespace xbar {

void TrackingVector::validate() const {
    std::vector<char> seen(dest.size(), 0);
    for (int d : dest) {
        if (d < 0 || d >= static_cast<int>(dest.size()) || seen[d])
            throw ValidationError("tracking vector: not a permutation");
        seen[d] = 1;
    }
}

std::vector<int> row_sums(const BitMatrix& w) {
    std::vector<int> sums(w.rows, 0);
    for (int r = 0; r < w.rows; ++r) {
        int s = 0;
        for (int c = 0; c < w.cols; ++c) s += w.at(r, c);
        sums[r] = s;
    }
    return sums;
}

TrackingVector build_tracking_vector(const std::vector<int>& sums) {
    const int n = static_cast<int>(sums.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sums[a] < sums[b]; });

    TrackingVector tv;
    tv.dest.resize(n);
    for (int pos = 0; pos < n; ++pos) tv.dest[order[pos]] = pos;
    return tv;
}

BitMatrix remap_weights(const BitMatrix& w, const TrackingVector& tv) {
    tv.validate();
    if (static_cast<int>(tv.dest.size()) != w.rows)
        throw ValidationError("remap_weights: tracking vector length must match rows");
    BitMatrix out(w.rows, w.cols);
    for (int r = 0; r < w.rows; ++r)
        for (int c = 0; c < w.cols; ++c) out.at(tv.dest[r], c) = w.at(r, c);
    return out;
}

void IruCostModel::validate() const {
    if (n_rows < 1 || adcs_per_xbar < 1 || adc_conversion_cycles < 1 || cols < 1)
        throw ValidationError("iru cost model: all counts must be positive");
    if (adcs_per_xbar > cols)
        throw ValidationError("iru cost model: more ADCs than columns");
}

IruLatency iru_latency(const IruCostModel& m) {
    m.validate();
    IruLatency out;
    out.remap_cycles = m.n_rows;
    const long long conversions = (m.cols + m.adcs_per_xbar - 1) / m.adcs_per_xbar;
    out.baseline_mvm_cycles = conversions * m.adc_conversion_cycles;
    out.overhead_fraction =
        static_cast<double>(out.remap_cycles) / static_cast<double>(out.baseline_mvm_cycles);
    return out;
}

}  // namespace xbar
