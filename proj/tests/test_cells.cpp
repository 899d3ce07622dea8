#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "xbar/cells.hpp"
#include "xbar/errors.hpp"

using namespace xbar;

namespace {

CellTechnology calibrated_sram() {
    return calibrate(default_sram_tech(), 1.6e-5, BiasConfig{});
}

}  // namespace

TEST_CASE("calibration hits the target conductance at the reference bias") {
    const BiasConfig bias;
    const CellTechnology t = calibrated_sram();
    CHECK(t.beta == doctest::Approx(3.9139780668051571e-05).epsilon(1e-6));

    // The fitted cell draws g_on * v_bl at (v_wl, v_bl, 0) by construction.
    const CellState on{1, 1, 1.0};
    const double i = cell_current(t, on, bias.v_wl, bias.v_bl, 0.0);
    CHECK(i == doctest::Approx(1.6e-5 * bias.v_bl).epsilon(1e-8));
}

TEST_CASE("calibration rejects unreachable and non-positive targets") {
    const BiasConfig bias;
    CHECK_THROWS_AS(calibrate(default_sram_tech(), 0.0, bias), CalibrationError);
    CHECK_THROWS_AS(calibrate(default_sram_tech(), -1e-6, bias), CalibrationError);
    CHECK_THROWS_AS(calibrate(default_sram_tech(), 1e25, bias), CalibrationError);
}

TEST_CASE("linear states scale their leakage conductance with drain-source bias") {
    const CellTechnology t = calibrated_sram();
    const double vd = 0.25;
    const CellState in1_w0{1, 0, 1.0};
    const CellState in0_w1{0, 1, 1.0};
    const CellState in0_w0{0, 0, 1.0};
    CHECK(cell_current(t, in1_w0, 0.7, vd, 0.0) ==
          doctest::Approx(4.7e-12 * vd).epsilon(1e-12));
    CHECK(cell_current(t, in0_w1, 0.0, vd, 0.0) ==
          doctest::Approx(6.6e-12 * vd).epsilon(1e-12));
    CHECK(cell_current(t, in0_w0, 0.0, vd, 0.0) ==
          doctest::Approx(2.2e-12 * vd).epsilon(1e-12));

    // Leakage does not depend on the gate.
    CHECK(cell_current(t, in0_w1, 0.0, vd, 0.0) ==
          doctest::Approx(cell_current(t, in0_w1, 0.7, vd, 0.0)).epsilon(1e-15));

    // Reversed bias reverses the current.
    CHECK(cell_current(t, in0_w0, 0.0, 0.0, vd) ==
          doctest::Approx(-2.2e-12 * vd).epsilon(1e-12));
}

TEST_CASE("source rise hurts more than an equal drain drop") {
    const CellTechnology t = calibrated_sram();
    const CellState on{1, 1, 1.0};
    // +50 mV on the source cuts overdrive and drain-source bias at once;
    // -50 mV on the drain only cuts the drain-source bias.
    const double i_source = cell_current(t, on, 0.7, 0.25, 0.05);
    const double i_drain = cell_current(t, on, 0.7, 0.20, 0.0);
    CHECK(i_source == doctest::Approx(2.8940856875099073e-06).epsilon(1e-6));
    CHECK(i_drain == doctest::Approx(3.3076610808419842e-06).epsilon(1e-6));
    CHECK(i_source < i_drain);
}

TEST_CASE("gate far below threshold leaves only an exponential tail") {
    const CellTechnology t = calibrated_sram();
    const CellState on{1, 1, 1.0};
    const double i = cell_current(t, on, 0.0, 0.25, 0.0);
    CHECK(i > 0.0);
    CHECK(i < 1e-10);
}

TEST_CASE("analytic partials match central differences across the bias box") {
    const CellTechnology t = calibrated_sram();
    const CellState on{1, 1, 1.0};
    std::mt19937_64 eng(42);
    std::uniform_real_distribution<double> ug(0.0, 0.7);
    std::uniform_real_distribution<double> ud(0.0, 0.25);
    const double h = 1e-7;
    for (int k = 0; k < 100; ++k) {
        const double vg = ug(eng);
        const double vd = ud(eng);
        const double vs = std::uniform_real_distribution<double>(0.0, vd)(eng);
        const CellCurrentDerivs d = cell_current_and_derivs(t, on, vg, vd, vs);
        CHECK(d.i == doctest::Approx(cell_current(t, on, vg, vd, vs)).epsilon(1e-12));
        const double num_dvd = (cell_current(t, on, vg, vd + h, vs) -
                                cell_current(t, on, vg, vd - h, vs)) /
                               (2.0 * h);
        const double num_dvs = (cell_current(t, on, vg, vd, vs + h) -
                                cell_current(t, on, vg, vd, vs - h)) /
                               (2.0 * h);
        CHECK(std::abs(d.di_dvd - num_dvd) <= 1e-4 * std::max(1e-9, std::abs(num_dvd)));
        CHECK(std::abs(d.di_dvs - num_dvs) <= 1e-4 * std::max(1e-9, std::abs(num_dvs)));
    }
}

TEST_CASE("derivatives of linear states are the signed conductance") {
    const CellTechnology t = calibrated_sram();
    const CellState leak{1, 0, 1.0};
    const CellCurrentDerivs d = cell_current_and_derivs(t, leak, 0.7, 0.2, 0.05);
    CHECK(d.di_dvd == doctest::Approx(4.7e-12).epsilon(1e-12));
    CHECK(d.di_dvs == doctest::Approx(-4.7e-12).epsilon(1e-12));
    CHECK(d.i == doctest::Approx(4.7e-12 * 0.15).epsilon(1e-12));
}

TEST_CASE("variation multiplier scales every state linearly") {
    const CellTechnology t = calibrated_sram();
    const CellState on1{1, 1, 1.0};
    const CellState on2{1, 1, 2.0};
    CHECK(cell_current(t, on2, 0.7, 0.25, 0.0) ==
          doctest::Approx(2.0 * cell_current(t, on1, 0.7, 0.25, 0.0)).epsilon(1e-14));
    const CellState lk1{0, 1, 1.0};
    const CellState lk2{0, 1, 0.5};
    CHECK(cell_current(t, lk2, 0.0, 0.25, 0.0) ==
          doctest::Approx(0.5 * cell_current(t, lk1, 0.0, 0.25, 0.0)).epsilon(1e-14));
}

TEST_CASE("variation draws are deterministic in seed and shape") {
    CellGrid a(128, 128);
    CellGrid b(128, 128);
    apply_variation(a, 0.1, 7);
    apply_variation(b, 0.1, 7);
    for (std::size_t k = 0; k < a.cells.size(); ++k)
        CHECK(a.cells[k].variation_mult == b.cells[k].variation_mult);

    CellGrid c(128, 128);
    apply_variation(c, 0.1, 8);
    int differing = 0;
    for (std::size_t k = 0; k < a.cells.size(); ++k)
        if (a.cells[k].variation_mult != c.cells[k].variation_mult) ++differing;
    CHECK(differing > 16000);  // nearly every draw moves with the seed
}

TEST_CASE("zero sigma writes exact unit multipliers") {
    CellGrid g(64, 64);
    apply_variation(g, 0.0, 123);
    for (const auto& c : g.cells) CHECK(c.variation_mult == 1.0);
}

TEST_CASE("variation multipliers center on 1 and respect the positive floor") {
    CellGrid g(128, 128);
    apply_variation(g, 0.1, 7);
    double sum = 0.0;
    for (const auto& c : g.cells) sum += c.variation_mult;
    const double mean = sum / static_cast<double>(g.cells.size());
    CHECK(std::abs(mean - 1.0) < 0.01);

    // A giant sigma exercises the truncation floor; nothing may reach zero.
    CellGrid wild(64, 64);
    apply_variation(wild, 5.0, 7);
    double lo = 1e9;
    for (const auto& c : wild.cells) lo = std::min(lo, c.variation_mult);
    CHECK(lo >= 1e-3);

    CHECK_THROWS_AS(apply_variation(g, -0.1, 7), ValidationError);
}
