#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "lmem/kernel.hpp"
#include "lmem/params.hpp"

namespace lmem {

// Writing-stage solution for a flat input pulse, stored in the normalized
// units in which every figure-level statement is made: a_field in units of
// a_in, sigma12 in units of (-2 p a_in) so its maximum at (t = pi, z = 0)
// is exactly 1, sigma13 in units of (p a_in).
struct WriteSolution {
    DimensionlessConfig config;
    int rows = 0; // time samples, t = k*dt for k = 0..rows-1
    int cols = 0; // space samples, z = j*dz
    double dt = 0.0;
    double dz = 0.0;
    // z-major layout like KernelTable: field(k, j) = a_field[j*rows + k]
    std::vector<std::complex<double>> a_field;
    std::vector<std::complex<double>> sigma12;
    std::vector<std::complex<double>> sigma13;

    std::complex<double> a(int k, int j) const {
        return a_field[static_cast<std::size_t>(j) * rows + k];
    }
    std::complex<double> s12(int k, int j) const {
        return sigma12[static_cast<std::size_t>(j) * rows + k];
    }
    std::complex<double> s13(int k, int j) const {
        return sigma13[static_cast<std::size_t>(j) * rows + k];
    }
    // sigma12 across z at the final write instant: the stored profile the
    // readout stage consumes
    std::vector<std::complex<double>> stored_profile() const;
};

// Quadrature-free closed forms on the shared grid:
//   a(t, z)   = 1 + \int_0^t Dt(t', z) dt'
//   s12(t, z) = (1 - cos t + \int_0^t (1 - cos(t - t')) Dt(t', z) dt') / 2
//   s13(t, z) = sin t + \int_0^t sin(t - t') Dt(t', z) dt'
// The delta part of the kernel contributes the leading 1 / (1-cos)/2 / sin
// terms analytically.  Requires the table to cover Tw and match the grid.
WriteSolution solve_write(const KernelTable& table, const DimensionlessConfig& config);

// a(t, L) over the write window: what leaks out of the far face while the
// pulse is being stored.
std::vector<std::complex<double>> leakage_series(const WriteSolution& sol);

// Loss = 100 (1/Tw) \int_0^Tw |a(t, L)|^2 dt, percent of the input energy
// that escaped instead of being stored.
double write_loss(const WriteSolution& sol);

// |sigma12| over the (t, z) grid plus the location of its maximum along z
// at a fixed time row.
struct CoherenceMap {
    int rows = 0;
    int cols = 0;
    double dt = 0.0;
    double dz = 0.0;
    std::vector<double> magnitude; // z-major like WriteSolution

    double value(int k, int j) const {
        return magnitude[static_cast<std::size_t>(j) * rows + k];
    }
    // z position of max_j |sigma12(t, z_j)| for the row nearest to t
    double argmax_z(double t) const;
};
CoherenceMap coherence_map(const WriteSolution& sol);

// CSV dump, t-major rows: t_tilde,z_tilde,re_a,im_a,re_s12,im_s12,re_s13,im_s13
void export_csv(const WriteSolution& sol, std::ostream& out);

} // namespace lmem
