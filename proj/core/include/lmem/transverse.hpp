#pragma once

#include <complex>

namespace lmem {

// One transverse Fourier mode of the signal field.
struct TransverseMode {
    double qx = 0.0; // rad/m
    double qy = 0.0; // rad/m

    double q2() const { return qx * qx + qy * qy; }
};

enum class PhasePlacement {
    global,      // e^{-i q^2 L / (2 k_s)}: common factor on forward retrieval,
                 // compensable with a lens
    in_integral, // e^{-i q^2 z / k_s}: per-source-plane factor in backward
                 // retrieval
};

// Unit-modulus diffraction factor accumulated over propagation; z is the
// dimensional coordinate (the medium length L for global placement).
std::complex<double> diffraction_phase(const TransverseMode& mode, double z_meters,
                                       double k_signal, PhasePlacement placement);

// Paraxial bookkeeping: the retrieval phases are negligible when
// q^2 L / k_s stays well below 1.
bool paraxial_ok(const TransverseMode& mode, double L_meters, double k_signal);

// Geometric capacity bounds for storing a transverse image of grain size d
// in a cell of area S and length L at wavelength lambda.
struct CapacityReport {
    double fresnel = 0.0;        // F_N = S / (lambda L)
    double n_max_backward = 0.0; // = F_N
    double n_max_forward = 0.0;  // = F_N^2
    double grain_d = 0.0;        // input grain size (m)
    double output_grain_D = 0.0; // diffraction-spread grain L lambda / d (m)
    double naive_modes = 0.0;    // S / d^2 before any diffraction argument
};

CapacityReport mode_capacity(double area_S, double lambda, double length_L, double grain_d);

} // namespace lmem
