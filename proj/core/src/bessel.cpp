#include "lmem/bessel.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace lmem {

namespace {

// Chebyshev coefficients generated by tools/gen_bessel_coeffs.py (mpmath,
// 60 digits, rounded to double).  Small branch: J1(x) = x*G(x^2),
// J0(x) = F(x^2) with G, F fitted on u = x^2 in [0, 144].  Large branch:
// Jn(x) = sqrt(2/(pi x)) (P(w) cos chi - Qh(w)/x sin chi) with
// chi = x - (2n+1) pi/4 and w = (12/x)^2 fitted on [0, 1].  Verified
// against mpmath to <= 5.3e-16 envelope-relative on [0, 1000].

inline constexpr double j1_small_cheb[] = {
    0.049623975440286947, -0.11314165454218238, 0.09074195561964558,
    -0.10003334429410142, 0.08635136156818905, -0.04318556193078189,
    0.0135141116791064, -0.0028950530049081827, 0.0004531225292846263,
    -5.4283228207790835e-05, 5.151590173257203e-06, -3.9763775531925573e-07,
    2.5488795531111868e-08, -1.3799318838133046e-09, 6.398526583780772e-11,
    -2.571135441378459e-12, 9.043916136641152e-14, -2.808977921764443e-15,
    7.762432548264455e-17, -1.9213774026335195e-18,
};

inline constexpr double j0_small_cheb[] = {
    0.022693993532219042, -0.1531079146967097, 0.11797479223272866,
    -0.02634356430873913, 0.2558150206349379, -0.2622140996006976,
    0.12087152677762113, -0.033585400670970274, 0.006391731997575882,
    -0.0008959418782227382, 9.699406281444883e-05, -8.388165890824513e-06,
    5.943867351531636e-07, -3.520358344422562e-08, 1.770892390763905e-09,
    -7.667379201172956e-11, 2.8893672713887814e-12, -9.567692157274823e-14,
    2.8070565443618097e-15, -7.349823748387666e-17, 1.7284604675796342e-18,
};

inline constexpr double j1_p_cheb[] = {
    1.000404360185562, 0.00040352400343737034, -8.298620904601663e-07,
    6.222001401963975e-09, -9.555632547945888e-11, 2.3866129946290623e-12,
    -8.537898984159949e-14, 4.037454846783726e-15, -2.3889810728973015e-16,
    1.700203674723894e-17, -1.4130134999309306e-18,
};

inline constexpr double j1_q_cheb[] = {
    0.37464878810340535, -0.0003496338634215206, 1.5600848131452032e-06,
    -1.7581839653510936e-08, 3.5516281693806253e-10, -1.087453479290532e-11,
    4.565992512377905e-13, -2.4607288467617684e-14, 1.6247245285569749e-15,
    -1.2700960601243187e-16, 1.14545077476767e-17, -1.1680039466761874e-18,
};

inline constexpr double j0_p_cheb[] = {
    0.9997578311606748, -0.00024152065580431247, 6.428610747989827e-07,
    -5.236459835928338e-09, 8.376133190769839e-11, -2.142980690852616e-12,
    7.788792852142358e-14, -3.724727305019607e-15, 2.222402749344865e-16,
    -1.5918945900121743e-17, 1.3298273243156329e-18,
};

inline constexpr double j0_q_cheb[] = {
    -0.12474962684041029, 0.00024908642591559845, -1.2712515987205063e-06,
    1.515605597859565e-08, -3.157204951818091e-10, 9.85515773955944e-12,
    -4.192942922535506e-13, 2.281445594107124e-14, -1.5173527240538564e-15,
    1.1929612454363388e-16, -1.0808628024354963e-17, 1.106350173160847e-18,
};

template <std::size_t N>
inline double clenshaw01(const double (&c)[N], double s) {
    // Chebyshev sum on [0, 1]; s is the raw coordinate
    const double t = 2.0 * s - 1.0;
    const double t2 = 2.0 * t;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t i = N; i-- > 1;) {
        const double b0 = t2 * b1 - b2 + c[i];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

inline void check_arg(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("bessel argument must be finite and >= 0");
}

inline double large_branch(double x, const double (&p)[11], const double (&q)[12],
                           double chi_offset) {
    const double w = 144.0 / (x * x);
    const double chi = x - chi_offset;
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    return amp * (clenshaw01(p, w) * std::cos(chi) - clenshaw01(q, w) / x * std::sin(chi));
}

} // namespace

namespace detail {

double j1_small(double x) { return x * clenshaw01(j1_small_cheb, x * x / 144.0); }
double j1_over_x(double x) {
    return x <= 12.0 ? clenshaw01(j1_small_cheb, x * x / 144.0) : j1_large(x) / x;
}
double j0_small(double x) { return clenshaw01(j0_small_cheb, x * x / 144.0); }
double j1_large(double x) { return large_branch(x, j1_p_cheb, j1_q_cheb, 0.75 * std::numbers::pi); }
double j0_large(double x) { return large_branch(x, j0_p_cheb, j0_q_cheb, 0.25 * std::numbers::pi); }

} // namespace detail

double bessel_j1(double x) {
    check_arg(x);
    return x <= 12.0 ? detail::j1_small(x) : detail::j1_large(x);
}

double bessel_j0(double x) {
    check_arg(x);
    return x <= 12.0 ? detail::j0_small(x) : detail::j0_large(x);
}

BesselEval eval_j1(double x) { return BesselEval{x, bessel_j1(x)}; }

} // namespace lmem
