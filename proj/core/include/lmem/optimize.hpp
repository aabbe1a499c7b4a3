#pragma once

#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "lmem/kernel.hpp"

namespace lmem {

struct OptimizationReport {
    double L_tilde = 0.0;
    double Tw_opt = 0.0;
    double loss_opt = 0.0; // percent
    std::vector<std::pair<double, double>> scan; // coarse (Tw, Loss) samples
    bool converged = false;        // false if the minimum sat on the range edge
    bool multiple_minima = false;  // >1 coarse local minima within 0.2 points
};

struct OptimizeOptions {
    double scan_lo = std::numbers::pi / 2.0;
    double scan_hi = 3.0 * std::numbers::pi;
    double coarse_step = 0.1; // upper bound on the coarse grid spacing
    double refine_tol = 0.01; // final golden-section bracket width
    int nt = 200;
    int nz = 400;
    KernelBuildOptions build;
};

// Minimizes Loss(Tw) at fixed L by a coarse scan plus golden-section
// refinement.  One kernel table covers the whole scan: the leakage series
// a(t, L) does not depend on Tw, so Loss(Tw) is a windowed average of one
// precomputed intensity integral.  The scan range must cover [pi/2, 3 pi].
OptimizationReport optimize_write_duration(double L_tilde,
                                           const OptimizeOptions& opts = {});

struct LengthSweepPoint {
    double L_tilde = 0.0; // snapped to the shared table's z grid
    double loss = 0.0;    // percent
};

struct SweepOptions {
    int nt = 200;
    int nz = 400;
    KernelBuildOptions build;
};

// Loss at fixed Tw across medium lengths; one kernel table is built at the
// largest length and each requested L snaps to its nearest z column.
std::vector<LengthSweepPoint> sweep_loss_vs_length(double Tw_tilde, double L_lo,
                                                   double L_hi, int points,
                                                   const SweepOptions& opts = {});

std::string optimization_report_json(const OptimizationReport& report);
// CSV: Tw_tilde,loss_percent
void export_scan_csv(const OptimizationReport& report, std::ostream& out);

} // namespace lmem
