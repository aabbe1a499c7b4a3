#pragma once

#include <string>

namespace lmem {

// Dimensional description of the medium and the drive.  Units follow the
// conventions that make the reduced equations closed: g^2*density_N has
// units of rate/length, g*density_N of rate.
struct PhysicalParams {
    double coupling_g = 0.0;     // atom-field coupling
    double density_N = 0.0;      // atomic number density
    double rabi_omega_abs = 0.0; // |Omega|, drive Rabi frequency magnitude (rad/s)
    double length_L = 0.0;       // medium length (m)
    double gamma = 0.0;          // upper-level decay rate (rad/s)
    double k_signal = 0.0;       // signal wavenumber (rad/m)
    double area_S = 0.0;         // transverse cell area (m^2)
    double c_light = 2.99792458e8; // speed of light (m/s)

    // throws std::invalid_argument unless every field is strictly positive
    void validate() const;
};

// Dimensionless working coordinates: t_tilde = |Omega| t, z_tilde =
// (2 g^2 N / |Omega|) z (an effective optical depth), p = g N / |Omega|.
struct DimensionlessConfig {
    double L_tilde = 0.0;  // medium depth in z_tilde units
    double Tw_tilde = 0.0; // write window in t_tilde units
    double Tr_tilde = 0.0; // read window in t_tilde units
    double p_coeff = 0.0;  // effective interaction coefficient
    int nt = 200;          // time samples per unit of t_tilde (dt = 1/nt)
    int nz = 400;          // space samples across [0, L_tilde]

    void validate() const; // positivity, nt >= 2, nz >= 2
    double dt() const { return 1.0 / nt; }
    double dz() const { return L_tilde / nz; }
};

struct RegimeReport {
    double gamma_T = 0.0;     // decay during the pulse, want << 1
    double transit_ratio = 0.0; // L/(c*T), propagation time vs pulse, want << 1
    bool pass = false;
};

// Threshold standing in for "much smaller than one"; both regime ratios
// must stay at or below it.
inline constexpr double regime_margin = 0.1;

DimensionlessConfig to_dimensionless(const PhysicalParams& params, double Tw_seconds,
                                     double Tr_seconds);

// Inverse of to_dimensionless for the quantities that carry units.
struct DimensionalWindows {
    double Tw_seconds = 0.0;
    double Tr_seconds = 0.0;
    double length_L = 0.0;
};
DimensionalWindows from_dimensionless(const DimensionlessConfig& config,
                                      const PhysicalParams& params);

RegimeReport validate_regime(const PhysicalParams& params, double T_seconds);

// Strict JSON loader: exactly the PhysicalParams field names, unknown keys
// rejected; c_light may be omitted and defaults to 2.99792458e8.
PhysicalParams load_physical_params_json(const std::string& json_text);
PhysicalParams load_physical_params_file(const std::string& path);

} // namespace lmem
