#pragma once

#include <optional>
#include <vector>

#include "xbar/bitmatrix.hpp"
#include "xbar/cells.hpp"
#include "xbar/interconnect.hpp"

namespace xbar {

// One crossbar column as a ladder: BL driven from the top through r_driver,
// SL collected at the bottom through r_sink into a virtual ground. Row i
// contributes one cell between BL node i and SL node i, with r_segment of
// wire between adjacent nodes on both lines.
struct ColumnCell {
    CellState state;
    double v_g = 0.0;
};

struct ColumnNetwork {
    int n_rows = 0;
    double r_segment = 0.0;
    double r_driver = 0.0;
    double r_sink = 0.0;
    std::vector<ColumnCell> cells;
    double v_bl = 0.25;

    void validate() const;
};

struct ColumnSolution {
    std::vector<double> bl_voltages;
    std::vector<double> sl_voltages;
    double i_out = 0.0;  // sum of cell currents delivered to the sink
    int newton_iters = 0;
    double max_residual = 0.0;  // amperes, max |KCL residual| at convergence
};

// Damped Newton on the 2 n_rows KCL equations with a banded Jacobian
// (bandwidth 2 in interleaved bl/sl node order). Zero driver or sink
// resistance pins the adjacent node; zero segment resistance collapses each
// line to a single node and solves the reduced system.
ColumnSolution solve_column(const ColumnNetwork& net, const CellTechnology& tech);

// Same equations, dense Jacobian and dense LU, assembled by independent
// code. Verification only; rejects n_rows > 256.
ColumnSolution oracle_solve(const ColumnNetwork& net, const CellTechnology& tech);

enum class Mapping { Baseline, Wagonn };

// A fully placed physical array: weights holds the mapped bit layout, cells
// mirrors it with per-cell variation, tracking records the row permutation
// when mapping is Wagonn.
struct CrossbarInstance {
    BitMatrix weights;
    CellGrid cells;
    WireModel wire;
    CellTechnology tech;
    BiasConfig bias;
    Mapping mapping = Mapping::Baseline;
    std::optional<std::vector<int>> tracking;

    void validate() const;
};

// Segment resistance for the instance's technology (FeFET cells are half an
// SRAM cell tall, so their per-row wire segment is half as long).
double segment_resistance(const CrossbarInstance& xbar);

// solve_column over every column; results in column order. Per-column
// failures are rethrown with the column index prefixed.
std::vector<ColumnSolution> solve_array(const CrossbarInstance& xbar);

}  // namespace xbar
