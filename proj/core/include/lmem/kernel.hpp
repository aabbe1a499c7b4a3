#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "lmem/params.hpp"

namespace lmem {

// The propagation kernel splits as D(t, z) = |Omega| [delta(t_tilde) +
// Dt(t_tilde, z_tilde)].  Everything here evaluates the regular part Dt:
//
//   Dt(t, z) = -cos(t) sqrt(z/t) J1(sqrt(z t))
//            + (z/4) \int_0^t dt' [e^{-i t'} J1(sqrt(z t'))/sqrt(t')]
//                                 [e^{ i (t-t')} J1(sqrt(z (t-t')))/sqrt(t-t')]
//
// The delta part is never sampled; convolution consumers add the identity
// contribution analytically (delta_weight records its coefficient, 1).

enum class KernelQuadRule {
    sin_sq_legendre,  // t' = t sin^2(theta), Gauss-Legendre in theta (default)
    chebyshev_weight, // Gauss-Chebyshev in t' against the 1/sqrt(t'(t-t')) weight
};

struct KernelPointOptions {
    KernelQuadRule rule = KernelQuadRule::sin_sq_legendre;
    // 0 = auto-refine: start at 64 nodes, double until the value moves
    // by < 1e-9, so the result carries quadrature error below 1e-8.
    int order = 0;
};

// Dt at a single point.  Rejects t <= 0 (the delta term is not part of Dt)
// and z < 0; z = 0 returns exactly 0.
std::complex<double> kernel_point(double t_tilde, double z_tilde,
                                  const KernelPointOptions& opts = {});

struct KernelTable {
    double L_tilde = 0.0;
    double T_max = 0.0;  // rows cover t = 0 .. T_max inclusive
    double dt = 0.0;
    double dz = 0.0;
    int rows = 0;  // time samples; row k is t = k*dt, row 0 holds the
                   // continuous t->0+ limit Dt = -z/2
    int cols = 0;  // space samples; column j is z = j*dz
    int order = 0; // frozen Gauss-Legendre order used for every sample
    double delta_weight = 1.0;
    std::vector<std::complex<double>> values; // z-major: values[j*rows + k]

    const std::complex<double>* column(int j) const {
        return values.data() + static_cast<std::size_t>(j) * rows;
    }
    std::complex<double> at(int k, int j) const {
        return values[static_cast<std::size_t>(j) * rows + k];
    }

    // Off-grid query: cubic interpolation along t, linear along z.
    std::complex<double> interpolate(double t, double z) const;

    // Map a coordinate to its grid index; throws std::invalid_argument if
    // the coordinate is off the grid by more than a rounding tolerance.
    int time_index(double t) const;
    int space_index(double z) const;
};

struct KernelBuildOptions {
    std::size_t memory_budget_bytes = std::size_t(2) << 30;
    std::string cache_dir; // empty: never read or write a cache file
    int initial_order = 64;
    int max_order = 4096;
};

// Tabulates Dt on the uniform grid implied by config (dt = 1/nt,
// dz = L_tilde/nz) up to T_max >= max(Tw, Tr).  The quadrature order is
// calibrated once by node doubling at probe points and then frozen, so the
// result is deterministic for fixed inputs.  If opts.cache_dir is set, the
// table is loaded from / stored to a binary cache keyed by
// (L_tilde, T_max, nt, nz, order).
KernelTable build_table(const DimensionlessConfig& config, double T_max,
                        const KernelBuildOptions& opts = {});

} // namespace lmem
