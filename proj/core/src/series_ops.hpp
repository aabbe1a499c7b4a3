#pragma once

// Internal trapezoid helpers shared by the writing and readout solvers.
// Everything runs on the uniform kernel-table grid, so convolutions reduce
// to index-shifted sums.

#include <complex>
#include <vector>

namespace lmem::detail {

// out[i] = \int_0^{i dt} f(i dt - s) g(s) ds by trapezoid:
//   dt * (0.5 f[i] g[0] + sum_{k=1}^{i-1} f[i-k] g[k] + 0.5 f[0] g[i])
inline void convolve_trapezoid(const double* f, const std::complex<double>* g, int n,
                               double dt, std::complex<double>* out) {
    out[0] = {0.0, 0.0};
    for (int i = 1; i < n; ++i) {
        double re = 0.5 * (f[i] * g[0].real() + f[0] * g[i].real());
        double im = 0.5 * (f[i] * g[0].imag() + f[0] * g[i].imag());
        for (int k = 1; k < i; ++k) {
            const double fk = f[i - k];
            re += fk * g[k].real();
            im += fk * g[k].imag();
        }
        out[i] = {dt * re, dt * im};
    }
}

// out[i] = \int_0^{i dt} g(s) ds by cumulative trapezoid
inline void cumtrapz(const std::complex<double>* g, int n, double dt,
                     std::complex<double>* out) {
    out[0] = {0.0, 0.0};
    for (int i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * dt * (g[i - 1] + g[i]);
}

inline double trapz_real(const std::vector<double>& v, double dt) {
    if (v.size() < 2) return 0.0;
    double acc = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
    return acc * dt;
}

} // namespace lmem::detail
