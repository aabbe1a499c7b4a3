#include "lmem/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "lmem/bessel.hpp"
#include "lmem/detail/parallel.hpp"
#include "lmem/errors.hpp"
#include "lmem/quadrature.hpp"

namespace lmem {

namespace {

// Gauss-Legendre rule mapped to theta in [0, pi/2] with the per-node
// trigonometry the transformed integrand needs, cached per order.
struct ThetaRule {
    std::vector<double> s;  // sin(theta)
    std::vector<double> c;  // cos(theta)
    std::vector<double> c2; // cos(2 theta)
    std::vector<double> w;  // quadrature weights including the pi/4 Jacobian
};

const ThetaRule& theta_rule(int order) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<ThetaRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) {
        const GaussLegendreRule& gl = gauss_legendre(order);
        auto rule = std::make_unique<ThetaRule>();
        rule->s.resize(order);
        rule->c.resize(order);
        rule->c2.resize(order);
        rule->w.resize(order);
        constexpr double quarter_pi = std::numbers::pi / 4.0;
        for (int i = 0; i < order; ++i) {
            const double theta = quarter_pi * (1.0 + gl.nodes[i]);
            rule->s[i] = std::sin(theta);
            rule->c[i] = std::cos(theta);
            rule->c2[i] = std::cos(2.0 * theta);
            rule->w[i] = quarter_pi * gl.weights[i];
        }
        it = cache.emplace(order, std::move(rule)).first;
    }
    return *it->second;
}

// Dt via the t' = t sin^2(theta) substitution:
//   Dt = -cos(t) z [J1(a)/a] + (z/2) \int_0^{pi/2} e^{i t cos 2theta}
//                                     J1(a sin theta) J1(a cos theta) dtheta
// with a = sqrt(z t).  The integrand maps to its own conjugate under
// theta -> pi/2 - theta, so the integral is real up to rounding.
std::complex<double> eval_sin_sq(double t, double z, int order) {
    const ThetaRule& rule = theta_rule(order);
    const double a = std::sqrt(z * t);
    const double term1 = -std::cos(t) * z * detail::j1_over_x(a);
    double acc_re = 0.0, acc_im = 0.0;
    for (int i = 0; i < order; ++i) {
        const double b = rule.w[i] * bessel_j1(a * rule.s[i]) * bessel_j1(a * rule.c[i]);
        const double ph = t * rule.c2[i];
        acc_re += b * std::cos(ph);
        acc_im += b * std::sin(ph);
    }
    return {term1 + 0.5 * z * acc_re, 0.5 * z * acc_im};
}

// Same integral by Gauss-Chebyshev against the weight 1/sqrt(t'(t-t')):
//   \int_0^t h(t')/sqrt(t'(t-t')) dt' = (pi/n) sum h(t_k),
//   t_k = (t/2)(1 + cos((2k-1) pi / (2n)))
// with h(t') = e^{i(t-2t')} J1(sqrt(z t')) J1(sqrt(z (t-t'))).  Kept as an
// independent cross-check of the default rule.
std::complex<double> eval_chebyshev(double t, double z, int order) {
    const double a = std::sqrt(z * t);
    const double term1 = -std::cos(t) * z * detail::j1_over_x(a);
    double acc_re = 0.0, acc_im = 0.0;
    for (int k = 1; k <= order; ++k) {
        const double tk = 0.5 * t * (1.0 + std::cos((2.0 * k - 1.0) * std::numbers::pi /
                                                    (2.0 * order)));
        const double h = bessel_j1(std::sqrt(z * tk)) * bessel_j1(std::sqrt(z * (t - tk)));
        const double ph = t - 2.0 * tk;
        acc_re += h * std::cos(ph);
        acc_im += h * std::sin(ph);
    }
    const double scale = 0.25 * z * std::numbers::pi / order;
    return {term1 + scale * acc_re, scale * acc_im};
}

std::complex<double> eval_fixed(double t, double z, KernelQuadRule rule, int order) {
    return rule == KernelQuadRule::sin_sq_legendre ? eval_sin_sq(t, z, order)
                                                   : eval_chebyshev(t, z, order);
}

int calibrate_order(double T_max, double L, KernelQuadRule rule, int initial, int max_order) {
    if (L <= 0.0) return initial;
    const double probes[][2] = {{T_max, L},
                                {0.95 * T_max, 0.6180339887 * L},
                                {0.37 * T_max, L},
                                {T_max, 0.13 * L},
                                {0.5 * T_max, 0.5 * L}};
    for (int n = initial; n <= max_order; n *= 2) {
        double worst = 0.0;
        for (const auto& p : probes)
            worst = std::max(worst, std::abs(eval_fixed(p[0], p[1], rule, 2 * n) -
                                             eval_fixed(p[0], p[1], rule, n)));
        if (worst < 1e-8) return n;
    }
    throw numerical_error("kernel quadrature did not converge below 1e-8 by order " +
                          std::to_string(max_order));
}

// ---- binary cache ---------------------------------------------------------
// Header: L_tilde (f64), T_max (f64), nt (i64), nz (i64), order (i64), all
// little-endian, followed by the samples row-major (t outer, z inner) as
// little-endian re/im f64 pairs.

constexpr std::size_t cache_header_bytes = 40;

std::string cache_path(const std::string& dir, double L, double T_max, int nt, int nz,
                       int order) {
    char name[160];
    std::snprintf(name, sizeof name, "kernel_%016llx_%016llx_%d_%d_%d.bin",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(L)),
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(T_max)), nt,
                  nz, order);
    return dir + "/" + name;
}

void pack_u64(unsigned char* out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint64_t unpack_u64(const unsigned char* in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    return v;
}

bool try_load_cache(const std::string& path, double L, double T_max, int nt, int nz,
                    int order, KernelTable& table) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    unsigned char header[cache_header_bytes];
    if (!in.read(reinterpret_cast<char*>(header), sizeof header)) return false;
    if (unpack_u64(header + 0) != std::bit_cast<std::uint64_t>(L)) return false;
    if (unpack_u64(header + 8) != std::bit_cast<std::uint64_t>(T_max)) return false;
    if (unpack_u64(header + 16) != static_cast<std::uint64_t>(nt)) return false;
    if (unpack_u64(header + 24) != static_cast<std::uint64_t>(nz)) return false;
    if (unpack_u64(header + 32) != static_cast<std::uint64_t>(order)) return false;
    const std::size_t count = static_cast<std::size_t>(table.rows) * table.cols;
    std::vector<unsigned char> payload(count * 16);
    if (!in.read(reinterpret_cast<char*>(payload.data()), payload.size())) return false;
    in.peek();
    if (!in.eof()) return false; // trailing garbage: treat as corrupt
    for (int k = 0; k < table.rows; ++k)
        for (int j = 0; j < table.cols; ++j) {
            const unsigned char* p = payload.data() +
                                     (static_cast<std::size_t>(k) * table.cols + j) * 16;
            const double re = std::bit_cast<double>(unpack_u64(p));
            const double im = std::bit_cast<double>(unpack_u64(p + 8));
            table.values[static_cast<std::size_t>(j) * table.rows + k] = {re, im};
        }
    return true;
}

void store_cache(const std::string& path, const KernelTable& table, int nt) {
    std::vector<unsigned char> buf(cache_header_bytes +
                                   static_cast<std::size_t>(table.rows) * table.cols * 16);
    pack_u64(buf.data() + 0, std::bit_cast<std::uint64_t>(table.L_tilde));
    pack_u64(buf.data() + 8, std::bit_cast<std::uint64_t>(table.T_max));
    pack_u64(buf.data() + 16, static_cast<std::uint64_t>(nt));
    pack_u64(buf.data() + 24, static_cast<std::uint64_t>(table.cols - 1));
    pack_u64(buf.data() + 32, static_cast<std::uint64_t>(table.order));
    for (int k = 0; k < table.rows; ++k)
        for (int j = 0; j < table.cols; ++j) {
            unsigned char* p = buf.data() + cache_header_bytes +
                               (static_cast<std::size_t>(k) * table.cols + j) * 16;
            const std::complex<double> v = table.at(k, j);
            pack_u64(p, std::bit_cast<std::uint64_t>(v.real()));
            pack_u64(p + 8, std::bit_cast<std::uint64_t>(v.imag()));
        }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return; // cache is best-effort; the computed table stands
        out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            return;
        }
    }
    std::rename(tmp.c_str(), path.c_str());
}

} // namespace

std::complex<double> kernel_point(double t_tilde, double z_tilde,
                                  const KernelPointOptions& opts) {
    if (!(t_tilde > 0.0) || !std::isfinite(t_tilde))
        throw std::invalid_argument("kernel_point: t_tilde must be > 0 (the delta part "
                                    "is handled by convolution consumers)");
    if (!(z_tilde >= 0.0) || !std::isfinite(z_tilde))
        throw std::invalid_argument("kernel_point: z_tilde must be >= 0");
    if (z_tilde == 0.0) return {0.0, 0.0};
    if (opts.order > 0) return eval_fixed(t_tilde, z_tilde, opts.rule, opts.order);
    std::complex<double> prev = eval_fixed(t_tilde, z_tilde, opts.rule, 64);
    for (int n = 128; n <= 16384; n *= 2) {
        const std::complex<double> next = eval_fixed(t_tilde, z_tilde, opts.rule, n);
        if (std::abs(next - prev) < 1e-9) return next;
        prev = next;
    }
    throw numerical_error("kernel_point did not converge at (" + std::to_string(t_tilde) +
                          ", " + std::to_string(z_tilde) + ")");
}

KernelTable build_table(const DimensionlessConfig& config, double T_max,
                        const KernelBuildOptions& opts) {
    if (config.nt < 2) throw std::invalid_argument("build_table: nt must be >= 2");
    if (config.nz < 2) throw std::invalid_argument("build_table: nz must be >= 2");
    if (!(config.L_tilde >= 0.0) || !std::isfinite(config.L_tilde))
        throw std::invalid_argument("build_table: L_tilde must be >= 0");
    if (!(T_max > 0.0) || !std::isfinite(T_max))
        throw std::invalid_argument("build_table: T_max must be > 0");
    if (T_max < std::max(config.Tw_tilde, config.Tr_tilde) * (1.0 - 1e-12))
        throw std::invalid_argument("build_table: T_max must cover both windows");

    KernelTable table;
    table.L_tilde = config.L_tilde;
    table.dt = 1.0 / config.nt;
    const long steps = std::lround(static_cast<double>(config.nt) * T_max);
    if (steps < 1)
        throw std::invalid_argument("build_table: T_max shorter than one time step");
    table.T_max = static_cast<double>(steps) * table.dt;
    table.rows = static_cast<int>(steps) + 1;
    table.cols = config.nz + 1;
    table.dz = config.L_tilde / config.nz;

    const std::size_t bytes = static_cast<std::size_t>(table.rows) * table.cols *
                              sizeof(std::complex<double>);
    if (bytes > opts.memory_budget_bytes)
        throw numerical_error("build_table: table of " + std::to_string(bytes) +
                              " bytes exceeds the memory budget of " +
                              std::to_string(opts.memory_budget_bytes));

    table.order = calibrate_order(table.T_max, table.L_tilde,
                                  KernelQuadRule::sin_sq_legendre, opts.initial_order,
                                  opts.max_order);
    table.values.assign(static_cast<std::size_t>(table.rows) * table.cols, {0.0, 0.0});

    const bool little_endian = std::endian::native == std::endian::little;
    std::string path;
    if (!opts.cache_dir.empty() && little_endian) {
        path = cache_path(opts.cache_dir, table.L_tilde, table.T_max, config.nt, config.nz,
                          table.order);
        if (try_load_cache(path, table.L_tilde, table.T_max, config.nt, config.nz,
                           table.order, table))
            return table;
    }

    if (table.L_tilde > 0.0) {
        // Phase factors e^{i t cos(2 theta)} depend on (row, node) only, so
        // they are shared by every z column; precompute when affordable.
        const ThetaRule& rule = theta_rule(table.order);
        const std::size_t trig_count = static_cast<std::size_t>(table.rows) * table.order;
        std::vector<double> trig_cos, trig_sin;
        const bool use_trig_cache = trig_count * 2 * sizeof(double) <= (std::size_t(256) << 20);
        if (use_trig_cache) {
            trig_cos.resize(trig_count);
            trig_sin.resize(trig_count);
            detail::parallel_for(1, static_cast<std::size_t>(table.rows), [&](std::size_t k) {
                const double t = static_cast<double>(k) * table.dt;
                for (int i = 0; i < table.order; ++i) {
                    const double ph = t * rule.c2[i];
                    trig_cos[k * table.order + i] = std::cos(ph);
                    trig_sin[k * table.order + i] = std::sin(ph);
                }
            });
        }

        detail::parallel_for(1, static_cast<std::size_t>(table.cols), [&](std::size_t j) {
            const double z = static_cast<double>(j) * table.dz;
            std::complex<double>* col = table.values.data() + j * table.rows;
            col[0] = {-0.5 * z, 0.0}; // continuous t->0+ limit
            for (int k = 1; k < table.rows; ++k) {
                const double t = static_cast<double>(k) * table.dt;
                const double a = std::sqrt(z * t);
                const double term1 = -std::cos(t) * z * detail::j1_over_x(a);
                double acc_re = 0.0, acc_im = 0.0;
                if (use_trig_cache) {
                    const double* tc = trig_cos.data() + static_cast<std::size_t>(k) * table.order;
                    const double* ts = trig_sin.data() + static_cast<std::size_t>(k) * table.order;
                    for (int i = 0; i < table.order; ++i) {
                        const double b = rule.w[i] * bessel_j1(a * rule.s[i]) *
                                         bessel_j1(a * rule.c[i]);
                        acc_re += b * tc[i];
                        acc_im += b * ts[i];
                    }
                } else {
                    for (int i = 0; i < table.order; ++i) {
                        const double b = rule.w[i] * bessel_j1(a * rule.s[i]) *
                                         bessel_j1(a * rule.c[i]);
                        const double ph = t * rule.c2[i];
                        acc_re += b * std::cos(ph);
                        acc_im += b * std::sin(ph);
                    }
                }
                col[k] = {term1 + 0.5 * z * acc_re, 0.5 * z * acc_im};
            }
        });

        double max_re = 0.0, max_im = 0.0;
        for (const auto& v : table.values) {
            max_re = std::max(max_re, std::abs(v.real()));
            max_im = std::max(max_im, std::abs(v.imag()));
        }
        if (max_re > 0.0 && max_im > 1e-8 * max_re)
            throw numerical_error("build_table: kernel imaginary part exceeds the realness "
                                  "bound; quadrature is not trustworthy at this order");
    }

    if (!path.empty()) store_cache(path, table, config.nt);
    return table;
}

std::complex<double> KernelTable::interpolate(double t, double z) const {
    if (!(t >= -1e-12) || !(t <= T_max + 1e-9) || !std::isfinite(t))
        throw std::invalid_argument("interpolate: t outside the table");
    if (!(z >= -1e-12) || !(z <= L_tilde + 1e-9) || !std::isfinite(z))
        throw std::invalid_argument("interpolate: z outside the table");
    t = std::clamp(t, 0.0, T_max);
    z = std::clamp(z, 0.0, L_tilde);
    if (L_tilde == 0.0) return {0.0, 0.0};

    const double zs = z / dz;
    const int j0 = std::min(static_cast<int>(zs), cols - 2);
    const double az = zs - j0;

    auto cubic_t = [&](int j) -> std::complex<double> {
        const std::complex<double>* col = column(j);
        if (rows < 4) { // degenerate tiny table: linear in t
            const double tsl = t / dt;
            const int k0l = std::min(static_cast<int>(tsl), rows - 2);
            const double atl = tsl - k0l;
            return col[k0l] * (1.0 - atl) + col[k0l + 1] * atl;
        }
        const double ts = t / dt;
        int i0 = static_cast<int>(ts) - 1;
        i0 = std::clamp(i0, 0, rows - 4);
        const double s = ts - i0;
        // 4-point Lagrange basis on offsets 0..3 of the uniform grid
        const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
        const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
        const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
        const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
        return col[i0] * l0 + col[i0 + 1] * l1 + col[i0 + 2] * l2 + col[i0 + 3] * l3;
    };

    return cubic_t(j0) * (1.0 - az) + cubic_t(j0 + 1) * az;
}

int KernelTable::time_index(double t) const {
    const double ks = t / dt;
    const long k = std::lround(ks);
    if (k < 0 || k >= rows || std::abs(ks - static_cast<double>(k)) > 1e-6)
        throw std::invalid_argument("time coordinate is not on the table grid");
    return static_cast<int>(k);
}

int KernelTable::space_index(double z) const {
    if (L_tilde == 0.0) {
        if (std::abs(z) > 1e-12)
            throw std::invalid_argument("space coordinate is not on the table grid");
        return 0;
    }
    const double js = z / dz;
    const long j = std::lround(js);
    if (j < 0 || j >= cols || std::abs(js - static_cast<double>(j)) > 1e-6)
        throw std::invalid_argument("space coordinate is not on the table grid");
    return static_cast<int>(j);
}

} // namespace lmem
