#include "lmem/transverse.hpp"

#include <cmath>
#include <stdexcept>

namespace lmem {

std::complex<double> diffraction_phase(const TransverseMode& mode, double z_meters,
                                       double k_signal, PhasePlacement placement) {
    if (!(k_signal > 0.0)) throw std::invalid_argument("k_signal must be positive");
    const double q2 = mode.q2();
    if (q2 == 0.0) return {1.0, 0.0};
    const double arg = placement == PhasePlacement::global
                           ? q2 * z_meters / (2.0 * k_signal)
                           : q2 * z_meters / k_signal;
    return {std::cos(arg), -std::sin(arg)};
}

bool paraxial_ok(const TransverseMode& mode, double L_meters, double k_signal) {
    if (!(k_signal > 0.0)) throw std::invalid_argument("k_signal must be positive");
    return mode.q2() * L_meters / k_signal <= 0.1;
}

CapacityReport mode_capacity(double area_S, double lambda, double length_L,
                             double grain_d) {
    if (!(area_S > 0.0) || !(lambda > 0.0) || !(length_L > 0.0) || !(grain_d > 0.0))
        throw std::invalid_argument("mode_capacity: all arguments must be positive");
    if (grain_d * grain_d > area_S)
        throw std::invalid_argument("mode_capacity: grain size exceeds the cell aperture");
    CapacityReport report;
    report.fresnel = area_S / (lambda * length_L);
    report.n_max_backward = report.fresnel;
    report.n_max_forward = report.fresnel * report.fresnel;
    report.grain_d = grain_d;
    report.output_grain_D = length_L * lambda / grain_d;
    report.naive_modes = area_S / (grain_d * grain_d);
    return report;
}

} // namespace lmem
