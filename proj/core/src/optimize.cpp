#include "lmem/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "series_ops.hpp"

namespace lmem {

namespace {

// cumulative \int_0^t |a(t', L)|^2 dt' on the table grid for one z column
std::vector<double> leaked_energy_prefix(const KernelTable& table, int column) {
    const int n = table.rows;
    std::vector<std::complex<double>> a(n);
    detail::cumtrapz(table.column(column), n, table.dt, a.data());
    std::vector<double> intensity(n);
    for (int k = 0; k < n; ++k) intensity[k] = std::norm(a[k] + 1.0);
    std::vector<double> prefix(n, 0.0);
    for (int k = 1; k < n; ++k)
        prefix[k] = prefix[k - 1] + 0.5 * table.dt * (intensity[k - 1] + intensity[k]);
    return prefix;
}

// cubic interpolation of a uniform-grid series (same stencil the kernel
// table uses for off-grid queries)
double interp_cubic(const std::vector<double>& v, double dt, double t) {
    const double s_raw = t / dt;
    const int n = static_cast<int>(v.size());
    if (n < 4) throw std::invalid_argument("series too short to interpolate");
    int i0 = std::clamp(static_cast<int>(s_raw) - 1, 0, n - 4);
    const double s = s_raw - i0;
    const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return v[i0] * l0 + v[i0 + 1] * l1 + v[i0 + 2] * l2 + v[i0 + 3] * l3;
}

} // namespace

OptimizationReport optimize_write_duration(double L_tilde, const OptimizeOptions& opts) {
    if (!(L_tilde > 0.0) || !std::isfinite(L_tilde))
        throw std::invalid_argument("optimize_write_duration: L_tilde must be > 0");
    constexpr double half_pi = std::numbers::pi / 2.0;
    constexpr double three_pi = 3.0 * std::numbers::pi;
    if (opts.scan_lo > half_pi + 1e-9 || opts.scan_hi < three_pi - 1e-9)
        throw std::invalid_argument(
            "optimize_write_duration: scan range must cover [pi/2, 3 pi]");
    if (!(opts.coarse_step > 0.0) || opts.coarse_step > 0.1 + 1e-12)
        throw std::invalid_argument("optimize_write_duration: coarse step must be <= 0.1");

    DimensionlessConfig config;
    config.L_tilde = L_tilde;
    config.Tw_tilde = opts.scan_hi;
    config.Tr_tilde = opts.scan_hi;
    config.p_coeff = 1.0;
    config.nt = opts.nt;
    config.nz = opts.nz;
    const KernelTable table = build_table(config, opts.scan_hi, opts.build);
    const auto prefix = leaked_energy_prefix(table, table.cols - 1);

    auto loss_at = [&](double Tw) {
        return 100.0 * interp_cubic(prefix, table.dt, Tw) / Tw;
    };

    OptimizationReport report;
    report.L_tilde = L_tilde;
    const int segments =
        static_cast<int>(std::ceil((opts.scan_hi - opts.scan_lo) / opts.coarse_step));
    report.scan.reserve(segments + 1);
    int best = 0;
    for (int i = 0; i <= segments; ++i) {
        const double Tw =
            opts.scan_lo + (opts.scan_hi - opts.scan_lo) * static_cast<double>(i) / segments;
        const double loss = loss_at(Tw);
        report.scan.emplace_back(Tw, loss);
        if (loss < report.scan[best].second) best = i;
    }

    // flag rival coarse minima: interior samples below both neighbours and
    // within 0.2 points of the best
    int rivals = 0;
    for (int i = 1; i + 1 <= segments; ++i)
        if (report.scan[i].second < report.scan[i - 1].second &&
            report.scan[i].second < report.scan[i + 1].second &&
            report.scan[i].second <= report.scan[best].second + 0.2)
            ++rivals;
    report.multiple_minima = rivals > 1;
    report.converged = best != 0 && best != segments;

    const double step = (opts.scan_hi - opts.scan_lo) / segments;
    double a = std::max(opts.scan_lo, report.scan[best].first - step);
    double b = std::min(opts.scan_hi, report.scan[best].first + step);
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = loss_at(x1), f2 = loss_at(x2);
    while (b - a > opts.refine_tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = loss_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = loss_at(x2);
        }
    }
    report.Tw_opt = 0.5 * (a + b);
    report.loss_opt = loss_at(report.Tw_opt);
    return report;
}

std::vector<LengthSweepPoint> sweep_loss_vs_length(double Tw_tilde, double L_lo,
                                                   double L_hi, int points,
                                                   const SweepOptions& opts) {
    if (!(Tw_tilde > 0.0)) throw std::invalid_argument("sweep: Tw_tilde must be > 0");
    if (!(L_lo >= 0.0) || !(L_hi > L_lo))
        throw std::invalid_argument("sweep: need 0 <= L_lo < L_hi");
    if (points < 2) throw std::invalid_argument("sweep: need at least 2 points");

    DimensionlessConfig config;
    config.L_tilde = L_hi;
    config.Tw_tilde = Tw_tilde;
    config.Tr_tilde = Tw_tilde;
    config.p_coeff = 1.0;
    config.nt = opts.nt;
    config.nz = opts.nz;
    const KernelTable table = build_table(config, Tw_tilde, opts.build);

    const int steps_w = table.rows - 1;
    const double window = steps_w * table.dt;

    std::vector<LengthSweepPoint> sweep;
    sweep.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double L_req = L_lo + (L_hi - L_lo) * static_cast<double>(i) / (points - 1);
        const int j = static_cast<int>(std::lround(L_req / table.dz));
        const auto prefix = leaked_energy_prefix(table, j);
        sweep.push_back({j * table.dz, 100.0 * prefix[steps_w] / window});
    }
    return sweep;
}

std::string optimization_report_json(const OptimizationReport& report) {
    char head[512];
    std::snprintf(head, sizeof head,
                  "{\n"
                  "  \"L_tilde\": %.17g,\n"
                  "  \"Tw_opt\": %.17g,\n"
                  "  \"loss_opt_percent\": %.17g,\n"
                  "  \"L_over_Tw\": %.17g,\n"
                  "  \"converged\": %s,\n"
                  "  \"multiple_minima\": %s,\n"
                  "  \"scan_points\": %zu\n"
                  "}\n",
                  report.L_tilde, report.Tw_opt, report.loss_opt,
                  report.L_tilde / report.Tw_opt, report.converged ? "true" : "false",
                  report.multiple_minima ? "true" : "false", report.scan.size());
    return head;
}

void export_scan_csv(const OptimizationReport& report, std::ostream& out) {
    out << "Tw_tilde,loss_percent\n";
    char line[80];
    for (const auto& [tw, loss] : report.scan) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", tw, loss);
        out << line;
    }
}

} // namespace lmem
