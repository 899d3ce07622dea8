#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "xbar/errors.hpp"
#include "xbar/interconnect.hpp"
#include "xbar/mvm.hpp"
#include "xbar/schedule.hpp"
#include "xbar/wagonn.hpp"

using namespace xbar;

namespace {

WireModel default_wire() {
    return build_wire_model(WireGeometry{}, ScatteringParams{}, 0.110, 100.0, 100.0);
}

WireModel ideal_wire() {
    WireModel m = default_wire();
    m.r_segment_sram_ohm = 0.0;
    m.r_segment_fefet_ohm = 0.0;
    m.r_driver_ohm = 0.0;
    m.r_sink_ohm = 0.0;
    return m;
}

MvmSetup base_setup(IntMatrix weights, int bits, bool is_signed, const WireModel& wire) {
    MvmSetup s;
    s.weights = std::move(weights);
    s.bits_per_weight = bits;
    s.signed_weights = is_signed;
    s.wire = wire;
    s.tech = calibrate(default_sram_tech(), 1.6e-5, BiasConfig{});
    s.bias = BiasConfig{};
    return s;
}

IntMatrix random_weights(int rows, int cols, int bits, bool is_signed,
                         std::uint64_t seed) {
    IntMatrix w(rows, cols);
    std::mt19937_64 eng(seed);
    const long long lo = is_signed ? -(1LL << (bits - 1)) : 0;
    const long long hi = is_signed ? (1LL << (bits - 1)) - 1 : (1LL << bits) - 1;
    std::uniform_int_distribution<long long> d(lo, hi);
    for (auto& v : w.v) v = d(eng);
    return w;
}

std::vector<long long> ideal_mvm(const IntMatrix& w, const std::vector<long long>& x) {
    std::vector<long long> out(w.cols, 0);
    for (int c = 0; c < w.cols; ++c)
        for (int r = 0; r < w.rows; ++r) out[c] += w.at(r, c) * x[r];
    return out;
}

}  // namespace

TEST_CASE("bit slicing is little-endian with a negative top slice when signed") {
    IntMatrix w(1, 2);
    w.at(0, 0) = 5;   // 0101
    w.at(0, 1) = -3;  // 1101 two's complement
    const std::vector<BitMatrix> slices = bit_slice(w, 4, true);
    REQUIRE(slices.size() == 4);
    CHECK(slices[0].at(0, 0) == 1);
    CHECK(slices[1].at(0, 0) == 0);
    CHECK(slices[2].at(0, 0) == 1);
    CHECK(slices[3].at(0, 0) == 0);
    CHECK(slices[0].at(0, 1) == 1);
    CHECK(slices[1].at(0, 1) == 0);
    CHECK(slices[2].at(0, 1) == 1);
    CHECK(slices[3].at(0, 1) == 1);

    CHECK(slice_weight(0, 4, true) == 1);
    CHECK(slice_weight(1, 4, true) == 2);
    CHECK(slice_weight(2, 4, true) == 4);
    CHECK(slice_weight(3, 4, true) == -8);
    CHECK(slice_weight(3, 4, false) == 8);
}

TEST_CASE("slice and recombine round-trips random matrices") {
    for (const bool is_signed : {false, true}) {
        const IntMatrix w = random_weights(32, 8, 4, is_signed, 900 + is_signed);
        const std::vector<BitMatrix> slices = bit_slice(w, 4, is_signed);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 8; ++c) {
                long long acc = 0;
                for (int k = 0; k < 4; ++k)
                    acc += slice_weight(k, 4, is_signed) * slices[k].at(r, c);
                CHECK(acc == w.at(r, c));
            }
    }
}

TEST_CASE("bit slicing rejects values outside the representable range") {
    IntMatrix w(1, 1);
    w.at(0, 0) = 8;  // max signed 4-bit is 7
    CHECK_THROWS_AS(bit_slice(w, 4, true), ValidationError);
    w.at(0, 0) = -1;
    CHECK_THROWS_AS(bit_slice(w, 4, false), ValidationError);
    w.at(0, 0) = 16;
    CHECK_THROWS_AS(bit_slice(w, 4, false), ValidationError);
}

TEST_CASE("count-exact converter covers every count with a unit step") {
    const AdcConfig cfg = exact_count_adc(128, 4e-6);
    CHECK(cfg.bits == 8);  // 129 distinct counts need 8 bits
    CHECK(cfg.lsb() == doctest::Approx(4e-6).epsilon(1e-12));
    CHECK(cfg.full_scale == doctest::Approx(255 * 4e-6).epsilon(1e-12));

    CHECK(adc_quantize(0.0, cfg) == 0);
    CHECK(adc_quantize(256e-6, cfg) == 64);
    CHECK(adc_quantize(4e-6 * 127.9, cfg) == 128);
    CHECK(adc_quantize(1.0, cfg) == 255);    // clamps at the top code
    CHECK(adc_quantize(-1e-6, cfg) == 0);    // clamps at zero

    // Every integer count is a fixed point of the quantizer.
    for (int k = 0; k <= 128; ++k) CHECK(adc_quantize(k * 4e-6, cfg) == k);

    const AdcConfig small = exact_count_adc(7, 4e-6);
    CHECK(small.bits == 3);

    AdcConfig bad;
    bad.bits = 0;
    bad.full_scale = 1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.bits = 8;
    bad.full_scale = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("ideal wires make the measured output exactly the integer product") {
    std::mt19937_64 eng(17);
    std::uniform_int_distribution<long long> xi(0, 15);
    for (int trial = 0; trial < 6; ++trial) {
        const bool is_signed = trial % 2 == 1;
        MvmSetup s = base_setup(random_weights(64, 6, 4, is_signed, 40 + trial), 4,
                                is_signed, ideal_wire());
        CrossbarInstance xbar = build_crossbar(s);
        std::vector<long long> x(64);
        for (auto& v : x) v = xi(eng);
        const ActivationSchedule sched = make_groups(64, 1, Strategy::Full);
        const MvmReport rep = mvm_execute(s, xbar, x, 4, sched, AdcPolicy{});
        CHECK(rep.ideal == ideal_mvm(s.weights, x));
        CHECK(rep.measured == rep.ideal);
        CHECK(rep.mean_abs_err == 0.0);
        CHECK(rep.max_err == 0);
        // Wire parasitics are gone but OFF-cell leakage still trickles into
        // the pre-converter value; it stays far below half a count.
        CHECK(rep.mean_analog_err < 0.01);
    }
}

TEST_CASE("ideal wires stay exact under grouped activation") {
    std::mt19937_64 eng(23);
    std::uniform_int_distribution<long long> xi(0, 15);
    MvmSetup s = base_setup(random_weights(128, 4, 4, true, 55), 4, true, ideal_wire());
    CrossbarInstance xbar = build_crossbar(s);
    std::vector<long long> x(128);
    for (auto& v : x) v = xi(eng);
    for (Strategy st : {Strategy::ConsecutivePWA, Strategy::StridedDPWA}) {
        for (int groups : {2, 4}) {
            const ActivationSchedule sched = make_groups(128, groups, st);
            const MvmReport rep = mvm_execute(s, xbar, x, 4, sched, AdcPolicy{});
            CHECK(rep.measured == rep.ideal);
        }
    }
}

TEST_CASE("ideal product is invariant under the row agglomeration remap") {
    std::mt19937_64 eng(29);
    std::uniform_int_distribution<long long> xi(0, 15);
    for (int trial = 0; trial < 4; ++trial) {
        const IntMatrix w = random_weights(64, 6, 4, true, 70 + trial);
        std::vector<long long> x(64);
        for (auto& v : x) v = xi(eng);

        MvmSetup sb = base_setup(w, 4, true, ideal_wire());
        MvmSetup sw = sb;
        sw.mapping = Mapping::Wagonn;
        CrossbarInstance xb = build_crossbar(sb);
        CrossbarInstance xw = build_crossbar(sw);
        REQUIRE(xw.tracking.has_value());
        const ActivationSchedule sched = make_groups(64, 1, Strategy::Full);
        const MvmReport rb = mvm_execute(sb, xb, x, 4, sched, AdcPolicy{});
        const MvmReport rw = mvm_execute(sw, xw, x, 4, sched, AdcPolicy{});
        CHECK(rb.ideal == rw.ideal);
        CHECK(rb.measured == rw.measured);  // both exact under ideal wires
    }
}

TEST_CASE("real wires only lose current for unsigned weights") {
    MvmSetup s = base_setup(random_weights(128, 8, 1, false, 81), 1, false,
                            default_wire());
    CrossbarInstance xbar = build_crossbar(s);
    const std::vector<long long> x(128, 1);
    const ActivationSchedule sched = make_groups(128, 1, Strategy::Full);
    const MvmReport rep = mvm_execute(s, xbar, x, 1, sched, AdcPolicy{});
    CHECK(rep.mean_abs_err > 0.0);
    for (int c = 0; c < 8; ++c) CHECK(rep.measured[c] <= rep.ideal[c]);

    // The digital output is the quantized pre-converter value; with one
    // input bit and one group they differ by at most half a count.
    for (int c = 0; c < 8; ++c)
        CHECK(std::abs(static_cast<double>(rep.measured[c]) - rep.analog_mvm[c]) <=
              0.5 + 1e-9);

    // Summary statistics agree with the per-column data.
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) acc += std::abs(rep.analog_mvm[c] - rep.ideal[c]);
    CHECK(rep.mean_analog_err == doctest::Approx(acc / 8.0).epsilon(1e-12));
}

TEST_CASE("variation multipliers follow their rows through the remap") {
    MvmSetup sb = base_setup(random_weights(64, 4, 2, false, 91), 2, false,
                             default_wire());
    sb.sigma = 0.2;
    sb.seed = 1234;
    MvmSetup sw = sb;
    sw.mapping = Mapping::Wagonn;

    CrossbarInstance xb = build_crossbar(sb);
    CrossbarInstance xw = build_crossbar(sw);
    REQUIRE(xw.tracking.has_value());
    const std::vector<int>& dest = *xw.tracking;

    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 8; ++c) {
            CHECK(xw.cells.at(dest[r], c).variation_mult ==
                  xb.cells.at(r, c).variation_mult);
            CHECK(xw.cells.at(dest[r], c).weight_bit == xb.cells.at(r, c).weight_bit);
        }
}

TEST_CASE("crossbar build is deterministic in the seed") {
    MvmSetup s = base_setup(random_weights(32, 4, 1, false, 95), 1, false,
                            default_wire());
    s.sigma = 0.1;
    s.seed = 42;
    const CrossbarInstance a = build_crossbar(s);
    const CrossbarInstance b = build_crossbar(s);
    for (std::size_t k = 0; k < a.cells.cells.size(); ++k)
        CHECK(a.cells.cells[k].variation_mult == b.cells.cells[k].variation_mult);

    MvmSetup other = s;
    other.seed = 43;
    const CrossbarInstance c = build_crossbar(other);
    int differing = 0;
    for (std::size_t k = 0; k < a.cells.cells.size(); ++k)
        if (a.cells.cells[k].variation_mult != c.cells.cells[k].variation_mult)
            ++differing;
    CHECK(differing > 100);
}

TEST_CASE("execution validates input shape and range") {
    MvmSetup s = base_setup(random_weights(16, 2, 2, false, 97), 2, false, ideal_wire());
    CrossbarInstance xbar = build_crossbar(s);
    const ActivationSchedule sched = make_groups(16, 1, Strategy::Full);

    std::vector<long long> short_x(8, 1);
    CHECK_THROWS_AS(mvm_execute(s, xbar, short_x, 2, sched, AdcPolicy{}),
                    ValidationError);

    std::vector<long long> big_x(16, 4);  // needs 3 bits
    CHECK_THROWS_AS(mvm_execute(s, xbar, big_x, 2, sched, AdcPolicy{}), ValidationError);

    std::vector<long long> neg_x(16, -1);
    CHECK_THROWS_AS(mvm_execute(s, xbar, neg_x, 2, sched, AdcPolicy{}), ValidationError);

    std::vector<long long> x(16, 1);
    const ActivationSchedule wrong = make_groups(32, 1, Strategy::Full);
    CHECK_THROWS_AS(mvm_execute(s, xbar, x, 2, wrong, AdcPolicy{}), ValidationError);
}

TEST_CASE("zero input yields zero everywhere") {
    MvmSetup s = base_setup(random_weights(64, 4, 4, true, 99), 4, true, default_wire());
    CrossbarInstance xbar = build_crossbar(s);
    const std::vector<long long> x(64, 0);
    const ActivationSchedule sched = make_groups(64, 1, Strategy::Full);
    const MvmReport rep = mvm_execute(s, xbar, x, 4, sched, AdcPolicy{});
    for (int c = 0; c < 4; ++c) {
        CHECK(rep.ideal[c] == 0);
        CHECK(rep.measured[c] == 0);
    }
    CHECK(rep.mean_abs_err == 0.0);
}

TEST_CASE("paired statistics count wins losses and ties") {
    MvmReport c0, c1, b0, b1;
    c0.mean_abs_err = 0.0;
    c0.abs_err = {0, 0};
    c1.mean_abs_err = 2.0;
    c1.abs_err = {2, 2};
    b0.mean_abs_err = 1.0;
    b0.abs_err = {1, 1};
    b1.mean_abs_err = 1.0;
    b1.abs_err = {1, 1};

    const ErrorStats st = error_stats({c0, c1}, {b0, b1});
    CHECK(st.wins == 1);
    CHECK(st.losses == 1);
    CHECK(st.ties == 0);
    CHECK(st.win_rate == doctest::Approx(0.5));
    CHECK(st.mean_abs_err == doctest::Approx(1.0));
    CHECK(st.mean_diff == doctest::Approx(0.0));
    CHECK(st.rmse == doctest::Approx(std::sqrt((0.0 + 0.0 + 4.0 + 4.0) / 4.0)));

    // Exact equality is a tie, not a win.
    const ErrorStats tied = error_stats({b0}, {b1});
    CHECK(tied.ties == 1);
    CHECK(tied.win_rate == 0.0);

    CHECK_THROWS_AS(error_stats({}, {}), ValidationError);
    CHECK_THROWS_AS(error_stats({c0}, {b0, b1}), ValidationError);
}

TEST_CASE("95th percentile interpolates between order statistics") {
    std::vector<MvmReport> cand(21), base(21);
    for (int i = 0; i < 21; ++i) {
        cand[i].mean_abs_err = static_cast<double>(i);  // 0..20
        cand[i].abs_err = {static_cast<long long>(i)};
        base[i].mean_abs_err = 100.0;
        base[i].abs_err = {100};
    }
    const ErrorStats st = error_stats(cand, base);
    CHECK(st.p95_err == doctest::Approx(19.0));  // 0.95 * 20 lands on index 19
    CHECK(st.win_rate == doctest::Approx(1.0));
}
