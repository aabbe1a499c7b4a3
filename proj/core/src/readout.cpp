#include "lmem/readout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lmem/detail/parallel.hpp"
#include "series_ops.hpp"

namespace lmem {

namespace {

int read_steps(const KernelTable& table, const DimensionlessConfig& config) {
    if (!(config.Tr_tilde > 0.0)) throw std::invalid_argument("Tr_tilde must be > 0");
    if (std::abs(table.dt * config.nt - 1.0) > 1e-12)
        throw std::invalid_argument("kernel table was built for a different nt");
    const long steps = std::lround(config.Tr_tilde * config.nt);
    if (steps < 1) throw std::invalid_argument("Tr shorter than one time step");
    if (static_cast<int>(steps) + 1 > table.rows)
        throw std::invalid_argument("kernel table does not cover Tr");
    return static_cast<int>(steps);
}

void check_profile(const std::vector<std::complex<double>>& profile,
                   const KernelTable& table) {
    if (static_cast<int>(profile.size()) != table.cols)
        throw std::invalid_argument("profile is not sampled on the table's z grid");
}

// sine responses K(t, z_j) for every column, t-major per column
std::vector<std::complex<double>> sine_response_columns(const KernelTable& table, int n) {
    std::vector<double> sine(n);
    for (int k = 0; k < n; ++k) sine[k] = std::sin(k * table.dt);
    std::vector<std::complex<double>> K(static_cast<std::size_t>(table.cols) * n);
    detail::parallel_for(0, static_cast<std::size_t>(table.cols), [&](std::size_t j) {
        std::complex<double>* col = K.data() + j * n;
        detail::convolve_trapezoid(sine.data(), table.column(static_cast<int>(j)), n,
                                   table.dt, col);
        for (int k = 0; k < n; ++k) col[k] += sine[k];
    });
    return K;
}

} // namespace

RetrievalResult retrieve(const std::vector<std::complex<double>>& sigma12_profile,
                         const KernelTable& table, const DimensionlessConfig& config,
                         Direction direction, const QContext& q) {
    check_profile(sigma12_profile, table);
    const int steps = read_steps(table, config);
    const int n = steps + 1;
    const int nz = table.cols - 1;

    RetrievalResult result;
    result.direction = direction;
    result.q = q;
    result.dt = table.dt;
    result.Tw_tilde = config.Tw_tilde;
    result.Tr_tilde = steps * table.dt;

    const auto K = sine_response_columns(table, n);

    // z-trapezoid accumulation of profile against the matching kernel column.
    // For forward the source at z' radiates through depth L - z'; backward
    // pairs the same profile with depth z' and a per-plane phase.  The sums
    // run in fixed j order so results are deterministic.
    std::vector<std::complex<double>> series(n, {0.0, 0.0});
    const double qparam = q.q2_L_over_ks();
    if (direction == Direction::forward) {
        for (int j = 0; j <= nz; ++j) {
            const double w = (j == 0 || j == nz) ? 0.5 * table.dz : table.dz;
            const std::complex<double> amp = w * sigma12_profile[j];
            if (amp == std::complex<double>(0.0, 0.0)) continue;
            const std::complex<double>* col = K.data() + static_cast<std::size_t>(nz - j) * n;
            for (int k = 0; k < n; ++k) series[k] += amp * col[k];
        }
    } else {
        for (int j = 0; j <= nz; ++j) {
            const double w = (j == 0 || j == nz) ? 0.5 * table.dz : table.dz;
            const double frac = nz > 0 ? static_cast<double>(j) / nz : 0.0;
            const double arg = qparam * frac;
            const std::complex<double> phase{std::cos(arg), -std::sin(arg)};
            const std::complex<double> amp = w * phase * sigma12_profile[j];
            if (amp == std::complex<double>(0.0, 0.0)) continue;
            const std::complex<double>* col = K.data() + static_cast<std::size_t>(j) * n;
            for (int k = 0; k < n; ++k) series[k] += amp * col[k];
        }
    }

    result.intensity.resize(n);
    for (int k = 0; k < n; ++k) result.intensity[k] = std::norm(series[k]);

    result.out_field = std::move(series);
    if (direction == Direction::forward && qparam != 0.0) {
        const double arg = 0.5 * qparam;
        const std::complex<double> phase{std::cos(arg), -std::sin(arg)};
        for (auto& v : result.out_field) v *= phase;
    }

    result.efficiency = retrieval_efficiency(result, config.Tw_tilde);
    return result;
}

double retrieval_efficiency(const RetrievalResult& result, double Tw_tilde) {
    if (!(Tw_tilde > 0.0)) throw std::invalid_argument("Tw_tilde must be > 0");
    return 100.0 * detail::trapz_real(result.intensity, result.dt) / Tw_tilde;
}

ReadoutCoherences readout_coherences(const std::vector<std::complex<double>>& sigma12_profile,
                                     const KernelTable& table,
                                     const DimensionlessConfig& config,
                                     Direction direction) {
    check_profile(sigma12_profile, table);
    const int steps = read_steps(table, config);
    const int n = steps + 1;

    std::vector<std::complex<double>> profile = sigma12_profile;
    if (direction == Direction::backward) std::reverse(profile.begin(), profile.end());

    ReadoutCoherences out;
    out.config = config;
    out.rows = n;
    out.cols = table.cols;
    out.dt = table.dt;
    out.dz = table.dz;
    const std::size_t total = static_cast<std::size_t>(n) * table.cols;
    out.a_field.assign(total, {0.0, 0.0});
    out.sigma12.resize(total);
    out.sigma13.resize(total);

    const auto K = sine_response_columns(table, n);

    // a(t, z_m) = sum_j w_j s(z_j) K(t, z_{m-j}): trapezoid in z per row,
    // assembled column-by-column so each z column is an independent slot
    detail::parallel_for(0, static_cast<std::size_t>(table.cols), [&](std::size_t m) {
        std::complex<double>* a_col = out.a_field.data() + m * n;
        for (std::size_t j = 0; j <= m; ++j) {
            const double w = (j == 0 || j == m) ? 0.5 * table.dz : table.dz;
            const std::complex<double> amp = w * profile[j];
            if (m == 0) break; // z = 0: empty integral
            if (amp == std::complex<double>(0.0, 0.0)) continue;
            const std::complex<double>* k_col = K.data() + (m - j) * n;
            for (int k = 0; k < n; ++k) a_col[k] += amp * k_col[k];
        }
    });

    std::vector<double> sine(n), cosine(n);
    for (int k = 0; k < n; ++k) {
        sine[k] = std::sin(k * out.dt);
        cosine[k] = std::cos(k * out.dt);
    }

    detail::parallel_for(0, static_cast<std::size_t>(table.cols), [&](std::size_t j) {
        const std::complex<double>* a_col = out.a_field.data() + j * n;
        std::complex<double>* s12 = out.sigma12.data() + j * n;
        std::complex<double>* s13 = out.sigma13.data() + j * n;
        const std::complex<double> s0 = profile[j];

        detail::convolve_trapezoid(sine.data(), a_col, n, out.dt, s12);
        detail::convolve_trapezoid(cosine.data(), a_col, n, out.dt, s13);
        for (int k = 0; k < n; ++k) {
            s12[k] = s0 * cosine[k] + 0.5 * s12[k];
            s13[k] = s0 * sine[k] - 0.5 * s13[k];
        }
    });
    return out;
}

void export_csv(const RetrievalResult& result, std::ostream& out) {
    out << "t_tilde,re_a,im_a,intensity\n";
    char line[160];
    for (std::size_t k = 0; k < result.out_field.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", k * result.dt,
                      result.out_field[k].real(), result.out_field[k].imag(),
                      result.intensity[k]);
        out << line;
    }
}

std::string retrieval_summary_json(const RetrievalResult& result, double L_tilde,
                                   double loss_percent) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\n"
                  "  \"direction\": \"%s\",\n"
                  "  \"q2_L_over_ks\": %.17g,\n"
                  "  \"L_tilde\": %.17g,\n"
                  "  \"Tw_tilde\": %.17g,\n"
                  "  \"Tr_tilde\": %.17g,\n"
                  "  \"loss_percent\": %.17g,\n"
                  "  \"eff_percent\": %.17g\n"
                  "}\n",
                  result.direction == Direction::forward ? "forward" : "backward",
                  result.q.q2_L_over_ks(), L_tilde, result.Tw_tilde, result.Tr_tilde,
                  loss_percent, result.efficiency);
    return buf;
}

} // namespace lmem
