#include "xbar/cells.hpp"

#include <cmath>

#include "xbar/errors.hpp"
#include "xbar/rng.hpp"

namespace xbar {

namespace {

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Leakage conductance for the three linear states; the ON state never lands here.
double leakage_g(const CellTechnology& tech, const CellState& s) {
    if (s.input_bit != 0) return tech.g_in1_w0;
    return s.weight_bit != 0 ? tech.g_in0_w1 : tech.g_in0_w0;
}

// ON current for a unit variation multiplier:
//   V_eff = smoothing * ln(1 + exp((v_g - v_s - v_t)/smoothing))
//   I     = beta * V_eff^2 * tanh((v_d - v_s)/V_eff)
double on_current_unit(const CellTechnology& tech, double v_g, double v_d, double v_s) {
    const double v_eff = tech.smoothing * softplus((v_g - v_s - tech.v_t) / tech.smoothing);
    if (v_eff <= 0.0) return 0.0;
    return tech.beta * v_eff * v_eff * std::tanh((v_d - v_s) / v_eff);
}

}  // namespace

void BiasConfig::validate() const {
    if (v_wl <= 0 || v_bl <= 0)
        throw ValidationError("bias: v_wl and v_bl must be positive");
}

CellTechnology default_sram_tech() {
    CellTechnology t;
    t.kind = TechKind::SRAM8T;
    t.g_on = 1.6e-5;
    t.g_in1_w0 = 4.7e-12;
    t.g_in0_w1 = 6.6e-12;
    t.g_in0_w0 = 2.2e-12;
    return t;
}

CellTechnology default_fefet_tech() {
    CellTechnology t;
    t.kind = TechKind::FeFET;
    t.g_on = 1.6e-5;
    t.g_in1_w0 = 2.5e-7;
    t.g_in0_w1 = 4.3e-8;
    t.g_in0_w0 = 2.0e-10;
    return t;
}

CellTechnology calibrate(CellTechnology tech, double g_on_target, const BiasConfig& bias) {
    bias.validate();
    CellState on{1, 1, 1.0};

    auto conductance_at = [&](double beta) {
        CellTechnology probe = tech;
        probe.beta = beta;
        return cell_current(probe, on, bias.v_wl, bias.v_bl, 0.0) / bias.v_bl;
    };

    // I is linear in beta, so any positive target brackets against beta = 0.
    double lo = 0.0;
    double hi = 1.0;
    int expansions = 0;
    while (conductance_at(hi) < g_on_target) {
        hi *= 2.0;
        if (++expansions > 64)
            throw CalibrationError("calibrate: ON conductance target not bracketed from above");
    }
    if (!(g_on_target > 0.0) || conductance_at(lo) >= g_on_target)
        throw CalibrationError("calibrate: ON conductance target not bracketed");

    while ((hi - lo) > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (conductance_at(mid) < g_on_target)
            lo = mid;
        else
            hi = mid;
    }
    tech.beta = 0.5 * (lo + hi);
    tech.g_on = g_on_target;
    return tech;
}

double cell_current(const CellTechnology& tech, const CellState& s, double v_g,
                    double v_d, double v_s) {
    if (s.input_bit != 0 && s.weight_bit != 0)
        return s.variation_mult * on_current_unit(tech, v_g, v_d, v_s);
    return s.variation_mult * leakage_g(tech, s) * (v_d - v_s);
}

CellCurrentDerivs cell_current_and_derivs(const CellTechnology& tech, const CellState& s,
                                          double v_g, double v_d, double v_s) {
    CellCurrentDerivs out;
    const double m = s.variation_mult;

    if (s.input_bit == 0 || s.weight_bit == 0) {
        const double g = m * leakage_g(tech, s);
        out.i = g * (v_d - v_s);
        out.di_dvd = g;
        out.di_dvs = -g;
        return out;
    }

    const double arg = (v_g - v_s - tech.v_t) / tech.smoothing;
    const double v_eff = tech.smoothing * softplus(arg);
    if (v_eff <= 0.0) return out;

    const double lgt = logistic(arg);  // dV_eff/dv_s = -lgt
    const double u = (v_d - v_s) / v_eff;
    const double t = std::tanh(u);
    const double sech2 = (1.0 - t) * (1.0 + t);

    out.i = m * tech.beta * v_eff * v_eff * t;
    out.di_dvd = m * tech.beta * v_eff * sech2;
    out.di_dvs =
        m * tech.beta * (-2.0 * v_eff * lgt * t + sech2 * (-v_eff + (v_d - v_s) * lgt));
    return out;
}

void apply_variation(CellGrid& grid, double sigma, std::uint64_t seed) {
    if (sigma < 0) throw ValidationError("apply_variation: sigma must be non-negative");
    if (sigma == 0.0) {
        for (auto& c : grid.cells) c.variation_mult = 1.0;
        return;
    }
    GaussianStream stream(seed);
    for (auto& c : grid.cells) c.variation_mult = sample_variation(stream, sigma);
}

}  // namespace xbar
