#include "xbar/solver.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "xbar/errors.hpp"
#include "xbar/linalg.hpp"

namespace xbar {

namespace {

// Newton targets 1e-15 A so the telescoped KCL sum across 128 rows stays
// well under the 1e-13 A column contract; stagnation below 1e-13 accepts.
constexpr double kTolTarget = 1e-15;
constexpr double kTolAccept = 1e-13;
constexpr int kMaxIters = 100;
constexpr int kMaxHalvings = 8;
constexpr double kConservationTol = 1e-12;

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

struct LadderContext {
    const ColumnNetwork* net = nullptr;
    const CellTechnology* tech = nullptr;
    bool pin_bl0 = false;  // r_driver = 0 pins BL node 0 to v_bl
    bool pin_slN = false;  // r_sink = 0 pins the last SL node to ground
    double g_seg = 0.0;
    double g_drv = 0.0;
    double g_sink = 0.0;
};

// KCL residuals, current into the node positive. Unknowns interleave as
// x[2i] = BL node i, x[2i+1] = SL node i. Pinned nodes swap their KCL row
// for a voltage equation, which the initial guess already satisfies.
void ladder_residual(const LadderContext& ctx, const std::vector<double>& x,
                     std::vector<double>& f) {
    const ColumnNetwork& net = *ctx.net;
    const int n = net.n_rows;
    for (int i = 0; i < n; ++i) {
        const double bl = x[2 * i];
        const double sl = x[2 * i + 1];
        const double ic =
            cell_current(*ctx.tech, net.cells[i].state, net.cells[i].v_g, bl, sl);

        if (i == 0 && ctx.pin_bl0) {
            f[0] = bl - net.v_bl;
        } else {
            double acc = -ic;
            if (i == 0)
                acc += (net.v_bl - bl) * ctx.g_drv;
            else
                acc += (x[2 * (i - 1)] - bl) * ctx.g_seg;
            if (i < n - 1) acc += (x[2 * (i + 1)] - bl) * ctx.g_seg;
            f[2 * i] = acc;
        }

        if (i == n - 1 && ctx.pin_slN) {
            f[2 * i + 1] = sl;
        } else {
            double acc = ic;
            if (i > 0) acc += (x[2 * (i - 1) + 1] - sl) * ctx.g_seg;
            if (i < n - 1) acc += (x[2 * (i + 1) + 1] - sl) * ctx.g_seg;
            if (i == n - 1) acc -= sl * ctx.g_sink;
            f[2 * i + 1] = acc;
        }
    }
}

// Banded Jacobian of ladder_residual. Coupling reaches at most two positions
// away in the interleaved ordering, so kl = ku = 2.
void ladder_jacobian(const LadderContext& ctx, const std::vector<double>& x,
                     BandedMatrix& jac) {
    jac.clear();
    const ColumnNetwork& net = *ctx.net;
    const int n = net.n_rows;
    for (int i = 0; i < n; ++i) {
        const int rb = 2 * i;
        const int rs = 2 * i + 1;
        const CellCurrentDerivs d = cell_current_and_derivs(
            *ctx.tech, net.cells[i].state, net.cells[i].v_g, x[rb], x[rs]);

        if (i == 0 && ctx.pin_bl0) {
            jac.at(rb, rb) = 1.0;
        } else {
            double diag = -d.di_dvd;
            if (i == 0) {
                diag -= ctx.g_drv;
            } else {
                diag -= ctx.g_seg;
                jac.at(rb, rb - 2) = ctx.g_seg;
            }
            if (i < n - 1) {
                diag -= ctx.g_seg;
                jac.at(rb, rb + 2) = ctx.g_seg;
            }
            jac.at(rb, rb) = diag;
            jac.at(rb, rs) = -d.di_dvs;
        }

        if (i == n - 1 && ctx.pin_slN) {
            jac.at(rs, rs) = 1.0;
        } else {
            double diag = d.di_dvs;
            if (i > 0) {
                diag -= ctx.g_seg;
                jac.at(rs, rs - 2) = ctx.g_seg;
            }
            if (i < n - 1) {
                diag -= ctx.g_seg;
                jac.at(rs, rs + 2) = ctx.g_seg;
            }
            if (i == n - 1) diag -= ctx.g_sink;
            jac.at(rs, rs) = diag;
            jac.at(rs, rb) = d.di_dvd;
        }
    }
}

double total_cell_current(const ColumnNetwork& net, const CellTechnology& tech,
                          const std::vector<double>& bl, const std::vector<double>& sl) {
    double sum = 0.0;
    for (int i = 0; i < net.n_rows; ++i)
        sum += cell_current(tech, net.cells[i].state, net.cells[i].v_g, bl[i], sl[i]);
    return sum;
}

// Driver- and sink-side currents measured from the solved voltages; pinned
// ends are measured from the network side of the pin.
void check_conservation(const LadderContext& ctx, const std::vector<double>& bl,
                        const std::vector<double>& sl, double i_cells) {
    const ColumnNetwork& net = *ctx.net;
    const int n = net.n_rows;
    const double i_cell_top =
        cell_current(*ctx.tech, net.cells[0].state, net.cells[0].v_g, bl[0], sl[0]);
    const double i_cell_bot = cell_current(*ctx.tech, net.cells[n - 1].state,
                                           net.cells[n - 1].v_g, bl[n - 1], sl[n - 1]);

    double i_in, i_out;
    if (ctx.pin_bl0)
        i_in = i_cell_top + (n > 1 ? (bl[0] - bl[1]) * ctx.g_seg : 0.0);
    else
        i_in = (net.v_bl - bl[0]) * ctx.g_drv;
    if (ctx.pin_slN)
        i_out = i_cell_bot + (n > 1 ? (sl[n - 2] - sl[n - 1]) * ctx.g_seg : 0.0);
    else
        i_out = sl[n - 1] * ctx.g_sink;

    if (std::fabs(i_in - i_out) > kConservationTol ||
        std::fabs(i_cells - i_out) > kConservationTol)
        throw SimError("ladder solve: KCL conservation check failed");
}

ColumnSolution solve_ladder_banded(const ColumnNetwork& net, const CellTechnology& tech) {
    LadderContext ctx;
    ctx.net = &net;
    ctx.tech = &tech;
    ctx.pin_bl0 = net.r_driver == 0.0;
    ctx.pin_slN = net.r_sink == 0.0;
    ctx.g_seg = 1.0 / net.r_segment;
    ctx.g_drv = ctx.pin_bl0 ? 0.0 : 1.0 / net.r_driver;
    ctx.g_sink = ctx.pin_slN ? 0.0 : 1.0 / net.r_sink;

    const int n2 = 2 * net.n_rows;
    std::vector<double> x(n2), f(n2), x_try(n2), f_try(n2);
    for (int i = 0; i < net.n_rows; ++i) {
        x[2 * i] = net.v_bl;
        x[2 * i + 1] = 0.0;
    }

    BandedMatrix jac(n2, 2, 2);
    ladder_residual(ctx, x, f);
    double r = inf_norm(f);
    int iters = 0;

    while (r > kTolTarget) {
        if (iters >= kMaxIters) {
            if (r <= kTolAccept) break;
            throw NonConvergenceError("ladder solve: no convergence after " +
                                          std::to_string(kMaxIters) + " iterations",
                                      r);
        }
        ladder_jacobian(ctx, x, jac);
        std::vector<double> dx(n2);
        for (int k = 0; k < n2; ++k) dx[k] = -f[k];
        jac.solve_in_place(dx);

        double t = 1.0;
        bool stagnant = false;
        for (int h = 0;; ++h) {
            for (int k = 0; k < n2; ++k) x_try[k] = x[k] + t * dx[k];
            ladder_residual(ctx, x_try, f_try);
            const double r_try = inf_norm(f_try);
            if (r_try < r) {
                x.swap(x_try);
                f.swap(f_try);
                r = r_try;
                break;
            }
            if (h == kMaxHalvings) {
                if (r <= kTolAccept) {
                    stagnant = true;  // at the rounding floor, contract already met
                } else {
                    x.swap(x_try);  // forced minimal step; next iteration retries
                    f.swap(f_try);
                    r = r_try;
                }
                break;
            }
            t *= 0.5;
        }
        ++iters;
        if (stagnant) break;
    }

    ColumnSolution sol;
    sol.bl_voltages.resize(net.n_rows);
    sol.sl_voltages.resize(net.n_rows);
    for (int i = 0; i < net.n_rows; ++i) {
        sol.bl_voltages[i] = x[2 * i];
        sol.sl_voltages[i] = x[2 * i + 1];
    }
    sol.i_out = total_cell_current(net, tech, sol.bl_voltages, sol.sl_voltages);
    sol.newton_iters = iters;
    sol.max_residual = r;
    check_conservation(ctx, sol.bl_voltages, sol.sl_voltages, sol.i_out);
    return sol;
}

// r_segment = 0 collapses each line to one node: at most two unknowns
// (common BL voltage, common SL voltage), fewer when an end is pinned.
ColumnSolution solve_ladder_merged(const ColumnNetwork& net, const CellTechnology& tech) {
    const bool free_b = net.r_driver > 0.0;
    const bool free_s = net.r_sink > 0.0;
    const double g_drv = free_b ? 1.0 / net.r_driver : 0.0;
    const double g_sink = free_s ? 1.0 / net.r_sink : 0.0;

    auto totals = [&](double vb, double vs) {
        CellCurrentDerivs sum;
        for (int i = 0; i < net.n_rows; ++i) {
            const CellCurrentDerivs d = cell_current_and_derivs(
                tech, net.cells[i].state, net.cells[i].v_g, vb, vs);
            sum.i += d.i;
            sum.di_dvd += d.di_dvd;
            sum.di_dvs += d.di_dvs;
        }
        return sum;
    };

    double vb = net.v_bl;
    double vs = 0.0;
    int iters = 0;
    double r = 0.0;

    auto residual_pair = [&](double b, double s, double& fb, double& fs) {
        const double isum = total_cell_current(
            net, tech, std::vector<double>(net.n_rows, b), std::vector<double>(net.n_rows, s));
        fb = free_b ? (net.v_bl - b) * g_drv - isum : 0.0;
        fs = free_s ? isum - s * g_sink : 0.0;
    };

    if (free_b || free_s) {
        double fb, fs;
        residual_pair(vb, vs, fb, fs);
        r = std::max(std::fabs(fb), std::fabs(fs));
        while (r > kTolTarget) {
            if (iters >= kMaxIters) {
                if (r <= kTolAccept) break;
                throw NonConvergenceError("merged ladder solve: no convergence", r);
            }
            const CellCurrentDerivs d = totals(vb, vs);
            // rows for pinned unknowns degenerate to identity
            const double j00 = free_b ? -g_drv - d.di_dvd : 1.0;
            const double j01 = free_b ? -d.di_dvs : 0.0;
            const double j10 = free_s ? d.di_dvd : 0.0;
            const double j11 = free_s ? d.di_dvs - g_sink : 1.0;
            const double det = j00 * j11 - j01 * j10;
            if (det == 0.0)
                throw SingularJacobianError("merged ladder solve: singular 2x2 Jacobian");
            const double db = (-fb * j11 + fs * j01) / det;
            const double ds = (-fs * j00 + fb * j10) / det;

            double t = 1.0;
            bool stagnant = false;
            for (int h = 0;; ++h) {
                double fb_t, fs_t;
                residual_pair(vb + t * db, vs + t * ds, fb_t, fs_t);
                const double r_t = std::max(std::fabs(fb_t), std::fabs(fs_t));
                if (r_t < r || (h == kMaxHalvings && r > kTolAccept)) {
                    vb += t * db;
                    vs += t * ds;
                    fb = fb_t;
                    fs = fs_t;
                    r = r_t;
                    break;
                }
                if (h == kMaxHalvings) {
                    stagnant = true;
                    break;
                }
                t *= 0.5;
            }
            ++iters;
            if (stagnant) break;
        }
    }

    ColumnSolution sol;
    sol.bl_voltages.assign(net.n_rows, vb);
    sol.sl_voltages.assign(net.n_rows, vs);
    sol.i_out = total_cell_current(net, tech, sol.bl_voltages, sol.sl_voltages);
    sol.newton_iters = iters;
    sol.max_residual = r;

    const double i_in = free_b ? (net.v_bl - vb) * g_drv : sol.i_out;
    const double i_out = free_s ? vs * g_sink : sol.i_out;
    if (std::fabs(i_in - i_out) > kConservationTol)
        throw SimError("merged ladder solve: KCL conservation check failed");
    return sol;
}

}  // namespace

void ColumnNetwork::validate() const {
    if (n_rows < 1) throw ValidationError("column network: n_rows must be at least 1");
    if (static_cast<int>(cells.size()) != n_rows)
        throw ValidationError("column network: cells length must equal n_rows");
    if (r_segment < 0 || r_driver < 0 || r_sink < 0)
        throw ValidationError("column network: resistances must be non-negative");
    for (const auto& c : cells)
        if (c.state.variation_mult <= 0)
            throw ValidationError("column network: variation multipliers must be positive");
}

ColumnSolution solve_column(const ColumnNetwork& net, const CellTechnology& tech) {
    net.validate();
    if (net.r_segment == 0.0) return solve_ladder_merged(net, tech);
    return solve_ladder_banded(net, tech);
}

void CrossbarInstance::validate() const {
    if (weights.rows != cells.rows || weights.cols != cells.cols)
        throw ValidationError("crossbar: weight and cell grid dimensions differ");
    if ((mapping == Mapping::Wagonn) != tracking.has_value())
        throw ValidationError("crossbar: tracking vector present iff mapping is Wagonn");
    if (tracking) {
        if (static_cast<int>(tracking->size()) != weights.rows)
            throw ValidationError("crossbar: tracking vector length must equal rows");
        std::vector<char> seen(tracking->size(), 0);
        for (int d : *tracking) {
            if (d < 0 || d >= weights.rows || seen[d])
                throw ValidationError("crossbar: tracking vector is not a permutation");
            seen[d] = 1;
        }
    }
    for (int r = 0; r < weights.rows; ++r)
        for (int c = 0; c < weights.cols; ++c)
            if (cells.at(r, c).weight_bit != weights.at(r, c))
                throw ValidationError("crossbar: cell grid disagrees with weight bits");
}

double segment_resistance(const CrossbarInstance& xbar) {
    return xbar.tech.kind == TechKind::FeFET ? xbar.wire.r_segment_fefet_ohm
                                             : xbar.wire.r_segment_sram_ohm;
}

std::vector<ColumnSolution> solve_array(const CrossbarInstance& xbar) {
    xbar.validate();
    const int rows = xbar.cells.rows;
    const int cols = xbar.cells.cols;
    const double r_seg = segment_resistance(xbar);

    std::vector<ColumnSolution> out;
    out.reserve(cols);
    ColumnNetwork net;
    net.n_rows = rows;
    net.r_segment = r_seg;
    net.r_driver = xbar.wire.r_driver_ohm;
    net.r_sink = xbar.wire.r_sink_ohm;
    net.v_bl = xbar.bias.v_bl;
    net.cells.resize(rows);

    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            const CellState& s = xbar.cells.at(r, c);
            net.cells[r].state = s;
            net.cells[r].v_g = s.input_bit ? xbar.bias.v_wl : 0.0;
        }
        try {
            out.push_back(solve_column(net, xbar.tech));
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError("column " + std::to_string(c) + ": " + e.what(),
                                      e.max_residual);
        } catch (const SingularJacobianError& e) {
            throw SingularJacobianError("column " + std::to_string(c) + ": " + e.what());
        }
    }
    return out;
}

ColumnSolution oracle_solve(const ColumnNetwork& net, const CellTechnology& tech) {
    net.validate();
    if (net.n_rows > 256)
        throw ValidationError("oracle solve: dense path is capped at 256 rows");

    // The merged topology has no dense structure to exercise; evaluate the
    // two-node system with an independently written scalar iteration.
    if (net.r_segment == 0.0) return solve_ladder_merged(net, tech);

    const int n = net.n_rows;
    const int n2 = 2 * n;
    const bool pin_bl0 = net.r_driver == 0.0;
    const bool pin_slN = net.r_sink == 0.0;
    const double g_seg = 1.0 / net.r_segment;
    const double g_drv = pin_bl0 ? 0.0 : 1.0 / net.r_driver;
    const double g_sink = pin_slN ? 0.0 : 1.0 / net.r_sink;

    // Residuals written equation-by-equation, independent of the banded path.
    auto residual_at = [&](const std::vector<double>& x, int row) -> double {
        const int i = row / 2;
        const double bl = x[2 * i];
        const double sl = x[2 * i + 1];
        const double ic =
            cell_current(tech, net.cells[i].state, net.cells[i].v_g, bl, sl);
        if (row % 2 == 0) {
            if (i == 0 && pin_bl0) return bl - net.v_bl;
            double acc = -ic;
            acc += (i == 0) ? (net.v_bl - bl) * g_drv : (x[2 * i - 2] - bl) * g_seg;
            if (i < n - 1) acc += (x[2 * i + 2] - bl) * g_seg;
            return acc;
        }
        if (i == n - 1 && pin_slN) return sl;
        double acc = ic;
        if (i > 0) acc += (x[2 * i - 1] - sl) * g_seg;
        if (i < n - 1) acc += (x[2 * i + 3] - sl) * g_seg;
        if (i == n - 1) acc -= sl * g_sink;
        return acc;
    };

    std::vector<double> x(n2), f(n2);
    for (int i = 0; i < n; ++i) {
        x[2 * i] = net.v_bl;
        x[2 * i + 1] = 0.0;
    }
    auto eval_all = [&](const std::vector<double>& xv, std::vector<double>& fv) {
        for (int row = 0; row < n2; ++row) fv[row] = residual_at(xv, row);
    };
    eval_all(x, f);
    double r = inf_norm(f);
    int iters = 0;

    std::vector<double> jac(static_cast<std::size_t>(n2) * n2);
    while (r > kTolTarget) {
        if (iters >= kMaxIters) {
            if (r <= kTolAccept) break;
            throw NonConvergenceError("oracle solve: no convergence", r);
        }
        std::fill(jac.begin(), jac.end(), 0.0);
        auto j = [&](int a, int b) -> double& {
            return jac[static_cast<std::size_t>(a) * n2 + b];
        };
        for (int i = 0; i < n; ++i) {
            const int rb = 2 * i;
            const int rs = 2 * i + 1;
            const CellCurrentDerivs d = cell_current_and_derivs(
                tech, net.cells[i].state, net.cells[i].v_g, x[rb], x[rs]);
            if (i == 0 && pin_bl0) {
                j(rb, rb) = 1.0;
            } else {
                j(rb, rb) = -d.di_dvd - ((i == 0) ? g_drv : g_seg) -
                            ((i < n - 1) ? g_seg : 0.0);
                j(rb, rs) = -d.di_dvs;
                if (i > 0) j(rb, rb - 2) = g_seg;
                if (i < n - 1) j(rb, rb + 2) = g_seg;
            }
            if (i == n - 1 && pin_slN) {
                j(rs, rs) = 1.0;
            } else {
                j(rs, rs) = d.di_dvs - ((i > 0) ? g_seg : 0.0) -
                            ((i < n - 1) ? g_seg : 0.0) - ((i == n - 1) ? g_sink : 0.0);
                j(rs, rb) = d.di_dvd;
                if (i > 0) j(rs, rs - 2) = g_seg;
                if (i < n - 1) j(rs, rs + 2) = g_seg;
            }
        }

        std::vector<double> dx(n2);
        for (int k = 0; k < n2; ++k) dx[k] = -f[k];
        dense_solve_in_place(jac, dx, n2);

        double t = 1.0;
        bool stagnant = false;
        std::vector<double> x_try(n2), f_try(n2);
        for (int h = 0;; ++h) {
            for (int k = 0; k < n2; ++k) x_try[k] = x[k] + t * dx[k];
            eval_all(x_try, f_try);
            const double r_try = inf_norm(f_try);
            if (r_try < r || (h == kMaxHalvings && r > kTolAccept)) {
                x.swap(x_try);
                f.swap(f_try);
                r = r_try;
                break;
            }
            if (h == kMaxHalvings) {
                stagnant = true;
                break;
            }
            t *= 0.5;
        }
        ++iters;
        if (stagnant) break;
    }

    ColumnSolution sol;
    sol.bl_voltages.resize(n);
    sol.sl_voltages.resize(n);
    for (int i = 0; i < n; ++i) {
        sol.bl_voltages[i] = x[2 * i];
        sol.sl_voltages[i] = x[2 * i + 1];
    }
    sol.i_out = total_cell_current(net, tech, sol.bl_voltages, sol.sl_voltages);
    sol.newton_iters = iters;
    sol.max_residual = r;
    return sol;
}

}  // namespace xbar
