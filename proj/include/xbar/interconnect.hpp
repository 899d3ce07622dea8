#pragma once

namespace xbar {

// Damascene line cross-section: a trapezoid tapering toward the bottom, Cu
// core wrapped by a Ta liner inside a TaN barrier on both sidewalls and the
// bottom. The top surface is open (capped by dielectric, not metal).
struct WireGeometry {
    double width_nm = 18.0;
    double height_nm = 36.0;
    double taper_angle_deg = 87.0;
    double liner_nm = 1.0;    // Ta
    double barrier_nm = 2.0;  // TaN
    double pitch_nm = 36.0;

    // True when the Cu core keeps a positive width after both insets.
    void validate() const;

    WireGeometry scaled(double factor) const;
};

struct ScatteringParams {
    double rho_bulk_ohm_um = 0.0172;
    double mean_free_path_nm = 40.0;
    double gb_reflection = 0.135;
    double specularity = 0.70;  // calibrated jointly with grain_size_nm
    double grain_size_nm = 6.08;
    double rho_liner_ohm_um = 2.0;    // Ta
    double rho_barrier_ohm_um = 3.0;  // TaN

    void validate() const;
};

// Per-column parasitics consumed by the ladder solver plus the reporting-only
// via constant. Segment values are resistance per bitcell pitch along BL/SL.
struct WireModel {
    double r_per_length_ohm_um = 0.0;
    double r_via_ohm = 78.0;
    double r_segment_sram_ohm = 0.0;
    double r_segment_fefet_ohm = 0.0;
    double r_driver_ohm = 100.0;
    double r_sink_ohm = 100.0;
};

// Grain-boundary scattering enhancement (>= 1). Throws ValidationError when
// gb_reflection = 1 (the reflection term diverges).
double ms_factor(const ScatteringParams& p);

// Surface scattering enhancement (>= 1) for a cu_width x cu_height film.
double fs_factor(const ScatteringParams& p, double cu_width_nm, double cu_height_nm);

// Cross-section of the trapezoid at a uniform inset from sidewalls and
// bottom, nm^2. inset = 0 gives the outer (drawn) area.
double trapezoid_area_nm2(const WireGeometry& g, double inset_nm);

// Resistance per unit length, Ohm/um: Cu core at rho_bulk * f_MS * f_FS in
// parallel with the liner and barrier shells at their bulk resistivities.
double line_resistance(const WireGeometry& g, const ScatteringParams& p);

WireModel build_wire_model(const WireGeometry& g, const ScatteringParams& p,
                           double sram_cell_height_um, double r_driver_ohm,
                           double r_sink_ohm, double r_via_ohm = 78.0);

}  // namespace xbar
