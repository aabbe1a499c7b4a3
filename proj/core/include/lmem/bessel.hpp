#pragma once

namespace lmem {

// J0, J1 for real x >= 0, used by the propagation kernel quadrature.
// Chebyshev fit of the even part on [0,12], amplitude-phase form with
// fitted modulus/phase-correction polynomials beyond; envelope-relative
// error is a few 1e-16 over [0, 1e3] (see tools/gen_bessel_coeffs.py).
// Throws std::invalid_argument for negative or non-finite x.
double bessel_j0(double x);
double bessel_j1(double x);

// Tight bound on max_x |J1(x)| (attained near x = 1.8412).
inline constexpr double bessel_j1_max = 0.58186522428159638;

struct BesselEval {
    double x = 0.0;
    double value = 0.0;
};
BesselEval eval_j1(double x);

namespace detail {
// Exposed for the branch-overlap test around the x = 12 switchover.
double j1_small(double x); // Chebyshev-in-x^2 branch, valid on [0, 12.6]
double j1_large(double x); // amplitude-phase branch, valid on x >= 11.4
double j0_small(double x);
double j0_large(double x);
// J1(x)/x without the removable 0/0 at x = 0 (limit 1/2); the kernel's
// first term -cos(t) sqrt(z/t) J1(sqrt(z t)) is z * j1_over_x(sqrt(z t))
// up to the cosine, finite down to t = 0.
double j1_over_x(double x);
} // namespace detail

} // namespace lmem
