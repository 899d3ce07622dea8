#pragma once

#include <cstdint>
#include <vector>

namespace xbar {

struct BiasConfig {
    double v_wl = 0.7;  // gate drive for input = 1
    double v_bl = 0.25;  // BL drive at the column top

    void validate() const;
};

enum class TechKind { SRAM8T, FeFET };

// Electrical behavior of one bit-cell family. The ON state (In=1, w=1) is a
// smoothed square-law FET; every other state is a linear leakage conductance.
// beta is meaningless until calibrate() has run.
struct CellTechnology {
    TechKind kind = TechKind::SRAM8T;
    double g_on = 1.6e-5;      // S, small-signal target at reference bias
    double g_in1_w0 = 4.7e-12;  // S
    double g_in0_w1 = 6.6e-12;  // S
    double g_in0_w0 = 2.2e-12;  // S
    double v_t = 0.25;         // V
    double beta = 0.0;         // A/V^2, set by calibrate()
    double smoothing = 0.05;   // V, softplus knee width
};

struct CellState {
    std::uint8_t input_bit = 0;
    std::uint8_t weight_bit = 0;
    double variation_mult = 1.0;
};

// Row-major grid of cell states; the physical array the solver walks.
struct CellGrid {
    int rows = 0;
    int cols = 0;
    std::vector<CellState> cells;

    CellGrid() = default;
    CellGrid(int r, int c) : rows(r), cols(c), cells(static_cast<std::size_t>(r) * c) {}

    CellState& at(int r, int c) { return cells[static_cast<std::size_t>(r) * cols + c]; }
    const CellState& at(int r, int c) const {
        return cells[static_cast<std::size_t>(r) * cols + c];
    }
};

// Leakage conductance tables from the bit-cell characterization, S.
CellTechnology default_sram_tech();
CellTechnology default_fefet_tech();

// Fits beta so the ON cell reproduces g_on_target as a small-signal
// conductance at (v_g = v_wl, v_d = v_bl, v_s = 0). Bisection to 1e-9
// relative; throws CalibrationError when the root is not bracketed.
CellTechnology calibrate(CellTechnology tech, double g_on_target, const BiasConfig& bias);

// Terminal current, positive from the BL node into the SL node.
double cell_current(const CellTechnology& tech, const CellState& s, double v_g,
                    double v_d, double v_s);

// Current plus analytic partials, consumed by the Newton solver.
struct CellCurrentDerivs {
    double i = 0.0;
    double di_dvd = 0.0;
    double di_dvs = 0.0;
};
CellCurrentDerivs cell_current_and_derivs(const CellTechnology& tech, const CellState& s,
                                          double v_g, double v_d, double v_s);

// Overwrites every variation_mult with max(1e-3, N(1, sigma)) drawn
// row-major from a generator seeded with seed. sigma = 0 writes exact 1s.
void apply_variation(CellGrid& grid, double sigma, std::uint64_t seed);

}  // namespace xbar
