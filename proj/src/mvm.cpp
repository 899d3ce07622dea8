#include "xbar/mvm.hpp"

#include <algorithm>
#include <cmath>

#include "xbar/errors.hpp"
#include "xbar/wagonn.hpp"

namespace xbar {

namespace {

int bits_for_count(int max_count) {
    int bits = 1;
    while ((1LL << bits) - 1 < max_count) ++bits;
    return bits;
}

}  // namespace

void AdcConfig::validate() const {
    if (bits < 1 || bits > 62) throw ValidationError("adc: bits must lie in [1, 62]");
    if (!(full_scale > 0)) throw ValidationError("adc: full scale must be positive");
}

AdcConfig exact_count_adc(int active_rows, double unit_current) {
    if (active_rows < 1) throw ValidationError("adc: active rows must be positive");
    if (!(unit_current > 0)) throw ValidationError("adc: unit current must be positive");
    AdcConfig cfg;
    cfg.bits = bits_for_count(active_rows);
    cfg.full_scale = static_cast<double>((1LL << cfg.bits) - 1) * unit_current;
    return cfg;
}

long long adc_quantize(double i_amps, const AdcConfig& cfg) {
    cfg.validate();
    const long long top = (1LL << cfg.bits) - 1;
    const double code = std::round(i_amps / cfg.lsb());
    if (code <= 0.0) return 0;
    if (code >= static_cast<double>(top)) return top;
    return static_cast<long long>(code);
}

long long slice_weight(int slice_index, int bits_per_weight, bool signed_weights) {
    const long long mag = 1LL << slice_index;
    if (signed_weights && slice_index == bits_per_weight - 1) return -mag;
    return mag;
}

std::vector<BitMatrix> bit_slice(const IntMatrix& weights, int bits_per_weight,
                                 bool signed_weights) {
    if (bits_per_weight < 1 || bits_per_weight > 62)
        throw ValidationError("bit_slice: bits_per_weight must lie in [1, 62]");
    const long long lo = signed_weights ? -(1LL << (bits_per_weight - 1)) : 0;
    const long long hi =
        signed_weights ? (1LL << (bits_per_weight - 1)) - 1 : (1LL << bits_per_weight) - 1;

    std::vector<BitMatrix> slices(bits_per_weight, BitMatrix(weights.rows, weights.cols));
    for (int r = 0; r < weights.rows; ++r) {
        for (int c = 0; c < weights.cols; ++c) {
            const long long w = weights.at(r, c);
            if (w < lo || w > hi)
                throw ValidationError("bit_slice: weight " + std::to_string(w) +
                                      " not representable in " +
                                      std::to_string(bits_per_weight) + " bits");
            const unsigned long long pattern =
                static_cast<unsigned long long>(w < 0 ? w + (1LL << bits_per_weight) : w);
            for (int k = 0; k < bits_per_weight; ++k)
                slices[k].at(r, c) = static_cast<std::uint8_t>((pattern >> k) & 1ULL);
        }
    }
    return slices;
}

CrossbarInstance build_crossbar(const MvmSetup& setup) {
    const auto slices = bit_slice(setup.weights, setup.bits_per_weight, setup.signed_weights);
    const int n = setup.weights.rows;
    const int phys_cols = setup.weights.cols * setup.bits_per_weight;

    BitMatrix physical(n, phys_cols);
    for (int r = 0; r < n; ++r)
        for (int j = 0; j < setup.weights.cols; ++j)
            for (int k = 0; k < setup.bits_per_weight; ++k)
                physical.at(r, j * setup.bits_per_weight + k) = slices[k].at(r, j);

    // Variation multipliers are drawn on the unmapped grid and travel with the
    // rows through any remap, so paired mapping trials share per-weight draws.
    CellGrid grid(n, phys_cols);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < phys_cols; ++c) grid.at(r, c).weight_bit = physical.at(r, c);
    apply_variation(grid, setup.sigma, setup.seed);

    CrossbarInstance xbar;
    xbar.mapping = setup.mapping;
    if (setup.mapping == Mapping::Wagonn) {
        const TrackingVector tv = build_tracking_vector(row_sums(physical));
        physical = remap_weights(physical, tv);
        CellGrid placed(n, phys_cols);
        for (int r = 0; r < n; ++r) {
            const int dest = tv.dest[static_cast<std::size_t>(r)];
            for (int c = 0; c < phys_cols; ++c) placed.at(dest, c) = grid.at(r, c);
        }
        grid = std::move(placed);
        xbar.tracking = tv.dest;
    }

    xbar.weights = physical;
    xbar.cells = std::move(grid);

    xbar.wire = setup.wire;
    xbar.tech = setup.tech;
    xbar.bias = setup.bias;
    xbar.validate();
    return xbar;
}

MvmReport mvm_execute(const MvmSetup& setup, CrossbarInstance& xbar,
                      const std::vector<long long>& x, int input_bits,
                      const ActivationSchedule& schedule, const AdcPolicy& adc) {
    const int n = xbar.cells.rows;
    const int phys_cols = xbar.cells.cols;
    const int b = setup.bits_per_weight;
    const int weight_cols = setup.weights.cols;

    if (setup.weights.rows != n || weight_cols * b != phys_cols)
        throw ValidationError("mvm: crossbar shape disagrees with the weight setup");
    if (static_cast<int>(x.size()) != n)
        throw ValidationError("mvm: input length must equal the row count");
    if (schedule.n_rows != n)
        throw ValidationError("mvm: schedule row count disagrees with the array");
    if (input_bits < 1 || input_bits > 62)
        throw ValidationError("mvm: input_bits must lie in [1, 62]");
    for (long long xi : x)
        if (xi < 0 || xi >= (1LL << input_bits))
            throw ValidationError("mvm: input " + std::to_string(xi) +
                                  " not representable in " + std::to_string(input_bits) +
                                  " unsigned bits");

    const double unit_current = xbar.tech.g_on * xbar.bias.v_bl;
    TrackingVector tv;
    if (xbar.tracking) tv.dest = *xbar.tracking;

    MvmReport rep;
    rep.measured.assign(weight_cols, 0);
    rep.analog_mvm.assign(weight_cols, 0.0);
    rep.analog_currents.assign(phys_cols, 0.0);

    for (int t = 0; t < input_bits; ++t) {
        std::vector<std::uint8_t> xbits(n);
        for (int r = 0; r < n; ++r) xbits[r] = static_cast<std::uint8_t>((x[r] >> t) & 1LL);
        if (xbar.tracking) xbits = remap_inputs(xbits, tv);

        std::vector<std::vector<long long>> cycle_codes;
        cycle_codes.reserve(schedule.groups.size());
        std::vector<double> bit_analog(phys_cols, 0.0);

        for (std::size_t g = 0; g < schedule.groups.size(); ++g) {
            const auto masked = masked_inputs(xbits, schedule, static_cast<int>(g));
            for (int r = 0; r < n; ++r) {
                const std::uint8_t bit = masked[r];
                for (int c = 0; c < phys_cols; ++c) xbar.cells.at(r, c).input_bit = bit;
            }

            const int active =
                adc.scale_to_active_rows ? static_cast<int>(schedule.groups[g].size()) : n;
            AdcConfig cfg = exact_count_adc(active, unit_current);
            if (adc.bits_override) {
                cfg.bits = *adc.bits_override;
                cfg.full_scale =
                    static_cast<double>((1LL << cfg.bits) - 1) * unit_current;
            }
            if (adc.full_scale_override) cfg.full_scale = *adc.full_scale_override;
            cfg.validate();

            const auto sols = solve_array(xbar);
            std::vector<long long> codes(phys_cols);
            for (int c = 0; c < phys_cols; ++c) {
                rep.analog_currents[c] += sols[c].i_out;
                bit_analog[c] += sols[c].i_out;
                codes[c] = adc_quantize(sols[c].i_out, cfg);
                rep.newton_iters_total += sols[c].newton_iters;
                rep.newton_iters_max = std::max(rep.newton_iters_max, sols[c].newton_iters);
                rep.max_residual = std::max(rep.max_residual, sols[c].max_residual);
            }
            cycle_codes.push_back(std::move(codes));
        }

        const auto totals = accumulate(cycle_codes);
        for (int j = 0; j < weight_cols; ++j) {
            long long contrib = 0;
            double analog_contrib = 0.0;
            for (int k = 0; k < b; ++k) {
                const long long sw = slice_weight(k, b, setup.signed_weights);
                contrib += sw * totals[j * b + k];
                analog_contrib +=
                    static_cast<double>(sw) * bit_analog[j * b + k] / unit_current;
            }
            rep.measured[j] += contrib * (1LL << t);
            rep.analog_mvm[j] += analog_contrib * static_cast<double>(1LL << t);
        }
    }

    rep.ideal.assign(weight_cols, 0);
    for (int j = 0; j < weight_cols; ++j) {
        long long acc = 0;
        for (int r = 0; r < n; ++r) acc += setup.weights.at(r, j) * x[r];
        rep.ideal[j] = acc;
    }

    rep.abs_err.resize(weight_cols);
    double sq_sum = 0.0;
    double abs_sum = 0.0;
    double analog_abs_sum = 0.0;
    for (int j = 0; j < weight_cols; ++j) {
        const long long e = std::llabs(rep.ideal[j] - rep.measured[j]);
        rep.abs_err[j] = e;
        rep.max_err = std::max(rep.max_err, e);
        abs_sum += static_cast<double>(e);
        sq_sum += static_cast<double>(e) * static_cast<double>(e);
        analog_abs_sum += std::abs(static_cast<double>(rep.ideal[j]) - rep.analog_mvm[j]);
    }
    rep.mean_abs_err = abs_sum / weight_cols;
    rep.mean_analog_err = analog_abs_sum / weight_cols;
    rep.rmse = std::sqrt(sq_sum / weight_cols);
    return rep;
}

ErrorStats error_stats(const std::vector<MvmReport>& candidate,
                       const std::vector<MvmReport>& baseline) {
    if (candidate.size() != baseline.size() || candidate.empty())
        throw ValidationError("error_stats: paired lists must be non-empty and equal length");

    ErrorStats st;
    std::vector<double> trial_means;
    trial_means.reserve(candidate.size());
    double pooled_sq = 0.0;
    long long pooled_n = 0;
    double diff_sum = 0.0;

    for (std::size_t i = 0; i < candidate.size(); ++i) {
        const MvmReport& c = candidate[i];
        const MvmReport& bl = baseline[i];
        trial_means.push_back(c.mean_abs_err);
        for (long long e : c.abs_err) {
            pooled_sq += static_cast<double>(e) * static_cast<double>(e);
            ++pooled_n;
        }
        diff_sum += c.mean_abs_err - bl.mean_abs_err;
        if (c.mean_abs_err < bl.mean_abs_err)
            ++st.wins;
        else if (c.mean_abs_err > bl.mean_abs_err)
            ++st.losses;
        else
            ++st.ties;
    }

    double mean_sum = 0.0;
    for (double m : trial_means) mean_sum += m;
    st.mean_abs_err = mean_sum / trial_means.size();
    st.rmse = std::sqrt(pooled_sq / static_cast<double>(pooled_n));
    st.mean_diff = diff_sum / static_cast<double>(candidate.size());
    st.win_rate = static_cast<double>(st.wins) / static_cast<double>(candidate.size());

    // 95th percentile with linear interpolation between order statistics
    std::sort(trial_means.begin(), trial_means.end());
    const double pos = 0.95 * static_cast<double>(trial_means.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, trial_means.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    st.p95_err = trial_means[lo] * (1.0 - frac) + trial_means[hi] * frac;
    return st;
}

}  // namespace xbar
