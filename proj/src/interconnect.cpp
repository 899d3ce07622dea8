#include "xbar/interconnect.hpp"

#include <cmath>
#include <string>

#include "xbar/errors.hpp"

namespace xbar {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}
}  // namespace

void WireGeometry::validate() const {
    require(width_nm > 0 && height_nm > 0, "wire geometry: width and height must be positive");
    require(taper_angle_deg > 0 && taper_angle_deg <= 90,
            "wire geometry: taper angle must be in (0, 90] degrees");
    require(liner_nm >= 0 && barrier_nm >= 0,
            "wire geometry: liner and barrier thickness must be non-negative");
    require(width_nm > 2.0 * (liner_nm + barrier_nm),
            "wire geometry: width leaves no Cu core after liner and barrier");
    require(pitch_nm > 0, "wire geometry: pitch must be positive");
}

WireGeometry WireGeometry::scaled(double factor) const {
    WireGeometry out = *this;
    out.width_nm *= factor;
    out.height_nm *= factor;
    out.liner_nm *= factor;
    out.barrier_nm *= factor;
    out.pitch_nm *= factor;
    // taper angle is shape, not size; it survives a uniform upscale
    return out;
}

void ScatteringParams::validate() const {
    require(rho_bulk_ohm_um > 0, "scattering: rho_bulk must be positive");
    require(mean_free_path_nm > 0, "scattering: mean free path must be positive");
    require(gb_reflection >= 0 && gb_reflection < 1,
            "scattering: gb_reflection must lie in [0, 1)");
    require(specularity >= 0 && specularity <= 1,
            "scattering: specularity must lie in [0, 1]");
    require(grain_size_nm > 0, "scattering: grain size must be positive");
    require(rho_liner_ohm_um > 0 && rho_barrier_ohm_um > 0,
            "scattering: liner and barrier resistivities must be positive");
}

double ms_factor(const ScatteringParams& p) {
    if (p.gb_reflection >= 1.0)
        throw ValidationError("ms_factor: gb_reflection = 1 has no finite resistivity");
    if (p.gb_reflection <= 0.0) return 1.0;
    const double alpha = (p.mean_free_path_nm / p.grain_size_nm) * p.gb_reflection /
                         (1.0 - p.gb_reflection);
    if (alpha == 0.0) return 1.0;
    const double bulk_fraction = 1.0 / 3.0 - alpha / 2.0 + alpha * alpha -
                                 alpha * alpha * alpha * std::log(1.0 + 1.0 / alpha);
    return 1.0 / (3.0 * bulk_fraction);
}

double fs_factor(const ScatteringParams& p, double cu_width_nm, double cu_height_nm) {
    require(cu_width_nm > 0 && cu_height_nm > 0, "fs_factor: film dimensions must be positive");
    return 1.0 + 0.375 * (1.0 - p.specularity) * p.mean_free_path_nm *
                     (1.0 / cu_width_nm + 1.0 / cu_height_nm);
}

double trapezoid_area_nm2(const WireGeometry& g, double inset_nm) {
    const double cot = 1.0 / std::tan(g.taper_angle_deg * kPi / 180.0);
    const double h = g.height_nm - inset_nm;
    return h * (g.width_nm - 2.0 * inset_nm) - h * h * cot;
}

double line_resistance(const WireGeometry& g, const ScatteringParams& p) {
    g.validate();
    p.validate();

    const double barrier_inset = g.barrier_nm;
    const double shell_inset = g.barrier_nm + g.liner_nm;
    const double a_outer = trapezoid_area_nm2(g, 0.0);
    const double a_inside_barrier = trapezoid_area_nm2(g, barrier_inset);
    const double a_cu = trapezoid_area_nm2(g, shell_inset);
    if (a_cu <= 0.0) throw ValidationError("line_resistance: Cu core area is not positive");

    const double cu_width = g.width_nm - 2.0 * shell_inset;
    const double cu_height = g.height_nm - shell_inset;
    const double rho_eff = p.rho_bulk_ohm_um * ms_factor(p) * fs_factor(p, cu_width, cu_height);

    // areas in nm^2, resistivities in Ohm*um: 1 nm^2 = 1e-6 um^2
    const double nm2_to_um2 = 1e-6;
    double conductance = a_cu * nm2_to_um2 / rho_eff;
    conductance += (a_inside_barrier - a_cu) * nm2_to_um2 / p.rho_liner_ohm_um;
    conductance += (a_outer - a_inside_barrier) * nm2_to_um2 / p.rho_barrier_ohm_um;
    return 1.0 / conductance;
}

WireModel build_wire_model(const WireGeometry& g, const ScatteringParams& p,
                           double sram_cell_height_um, double r_driver_ohm,
                           double r_sink_ohm, double r_via_ohm) {
    if (sram_cell_height_um < 0)
        throw ValidationError("build_wire_model: cell height must be non-negative");
    if (r_driver_ohm < 0 || r_sink_ohm < 0 || r_via_ohm < 0)
        throw ValidationError("build_wire_model: resistances must be non-negative");

    WireModel m;
    m.r_per_length_ohm_um = line_resistance(g, p);
    m.r_via_ohm = r_via_ohm;
    m.r_segment_sram_ohm = m.r_per_length_ohm_um * sram_cell_height_um;
    m.r_segment_fefet_ohm = m.r_per_length_ohm_um * (sram_cell_height_um / 2.0);
    m.r_driver_ohm = r_driver_ohm;
    m.r_sink_ohm = r_sink_ohm;
    return m;
}

}  // namespace xbar
