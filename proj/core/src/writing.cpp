#include "lmem/writing.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lmem/detail/parallel.hpp"
#include "series_ops.hpp"

namespace lmem {

namespace {

void check_grid_match(const KernelTable& table, const DimensionlessConfig& config,
                      double window) {
    if (std::abs(table.dt * config.nt - 1.0) > 1e-12)
        throw std::invalid_argument("kernel table was built for a different nt");
    if (table.cols != config.nz + 1 ||
        std::abs(table.L_tilde - config.L_tilde) > 1e-12 * std::max(1.0, config.L_tilde))
        throw std::invalid_argument("kernel table does not match the z grid");
    // Windows snap to the time grid, so coverage is a question of step
    // counts, not of the raw window value.
    if (std::lround(window * config.nt) > std::lround(table.T_max * config.nt))
        throw std::invalid_argument("kernel table does not cover the requested window");
}

} // namespace

WriteSolution solve_write(const KernelTable& table, const DimensionlessConfig& config) {
    if (config.nt < 2) throw std::invalid_argument("solve_write: nt must be >= 2");
    if (!(config.Tw_tilde > 0.0)) throw std::invalid_argument("solve_write: Tw must be > 0");
    check_grid_match(table, config, config.Tw_tilde);

    WriteSolution sol;
    sol.config = config;
    sol.dt = table.dt;
    sol.dz = table.dz;
    const long steps = std::lround(config.Tw_tilde * config.nt);
    if (steps < 1) throw std::invalid_argument("solve_write: Tw shorter than one time step");
    sol.rows = static_cast<int>(steps) + 1;
    sol.cols = table.cols;
    if (sol.rows > table.rows)
        throw std::invalid_argument("solve_write: kernel table does not cover Tw");

    const int n = sol.rows;
    const std::size_t total = static_cast<std::size_t>(n) * sol.cols;
    sol.a_field.resize(total);
    sol.sigma12.resize(total);
    sol.sigma13.resize(total);

    // time-sampled delta-term responses, shared across columns
    std::vector<double> one_minus_cos(n), sine(n);
    for (int k = 0; k < n; ++k) {
        const double t = k * sol.dt;
        one_minus_cos[k] = 1.0 - std::cos(t);
        sine[k] = std::sin(t);
    }

    detail::parallel_for(0, static_cast<std::size_t>(sol.cols), [&](std::size_t j) {
        const std::complex<double>* D = table.column(static_cast<int>(j));
        std::complex<double>* a = sol.a_field.data() + j * n;
        std::complex<double>* s12 = sol.sigma12.data() + j * n;
        std::complex<double>* s13 = sol.sigma13.data() + j * n;

        detail::cumtrapz(D, n, sol.dt, a);
        for (int k = 0; k < n; ++k) a[k] += 1.0;

        detail::convolve_trapezoid(one_minus_cos.data(), D, n, sol.dt, s12);
        for (int k = 0; k < n; ++k) s12[k] = 0.5 * (one_minus_cos[k] + s12[k]);

        detail::convolve_trapezoid(sine.data(), D, n, sol.dt, s13);
        for (int k = 0; k < n; ++k) s13[k] += sine[k];
    });
    return sol;
}

std::vector<std::complex<double>> WriteSolution::stored_profile() const {
    std::vector<std::complex<double>> profile(cols);
    for (int j = 0; j < cols; ++j) profile[j] = s12(rows - 1, j);
    return profile;
}

std::vector<std::complex<double>> leakage_series(const WriteSolution& sol) {
    const std::complex<double>* col = sol.a_field.data() +
                                      static_cast<std::size_t>(sol.cols - 1) * sol.rows;
    return std::vector<std::complex<double>>(col, col + sol.rows);
}

double write_loss(const WriteSolution& sol) {
    const auto leak = leakage_series(sol);
    std::vector<double> intensity(leak.size());
    for (std::size_t i = 0; i < leak.size(); ++i) intensity[i] = std::norm(leak[i]);
    const double window = (sol.rows - 1) * sol.dt;
    return 100.0 * detail::trapz_real(intensity, sol.dt) / window;
}

CoherenceMap coherence_map(const WriteSolution& sol) {
    CoherenceMap map;
    map.rows = sol.rows;
    map.cols = sol.cols;
    map.dt = sol.dt;
    map.dz = sol.dz;
    map.magnitude.resize(sol.sigma12.size());
    for (std::size_t i = 0; i < sol.sigma12.size(); ++i)
        map.magnitude[i] = std::abs(sol.sigma12[i]);
    return map;
}

double CoherenceMap::argmax_z(double t) const {
    const long k = std::lround(t / dt);
    if (k < 0 || k >= rows)
        throw std::invalid_argument("argmax_z: time outside the solution window");
    int best = 0;
    double best_val = value(static_cast<int>(k), 0);
    for (int j = 1; j < cols; ++j) {
        const double v = value(static_cast<int>(k), j);
        if (v > best_val) {
            best_val = v;
            best = j;
        }
    }
    return best * dz;
}

void export_csv(const WriteSolution& sol, std::ostream& out) {
    out << "t_tilde,z_tilde,re_a,im_a,re_s12,im_s12,re_s13,im_s13\n";
    char line[256];
    for (int k = 0; k < sol.rows; ++k)
        for (int j = 0; j < sol.cols; ++j) {
            const auto a = sol.a(k, j), s12 = sol.s12(k, j), s13 = sol.s13(k, j);
            std::snprintf(line, sizeof line,
                          "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k * sol.dt,
                          j * sol.dz, a.real(), a.imag(), s12.real(), s12.imag(),
                          s13.real(), s13.imag());
            out << line;
        }
}

} // namespace lmem
