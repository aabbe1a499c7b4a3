#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace lmem::oracle {

// Uniform space-time grid for a finite-difference run: rows() = t_steps + 1
// time levels at t = k*dt, cols() = z_steps + 1 stations at z = j*dz.
struct OracleGrid {
  std::size_t t_steps = 0;
  std::size_t z_steps = 0;
  double dt = 0.0;
  double dz = 0.0;

  void validate() const;
  std::size_t rows() const { return t_steps + 1; }
  std::size_t cols() const { return z_steps + 1; }
};

// Finite-difference solution of the reduced propagation system
//   da/dz = -s13/2,  ds13/dt = a - 2*s12,  ds12/dt = s13/2
// in the same normalized units as WriteSolution.  Arrays are z-major:
// value at (time k, station j) lives at index j*rows() + k.
struct OracleRun {
  OracleGrid grid;
  std::vector<std::complex<double>> a_field;
  std::vector<std::complex<double>> sigma13;
  std::vector<std::complex<double>> sigma12;
  std::vector<std::complex<double>> boundary;  // field at z = 0, per time level

  std::complex<double> a(std::size_t k, std::size_t j) const {
    return a_field[j * grid.rows() + k];
  }
  std::complex<double> s13(std::size_t k, std::size_t j) const {
    return sigma13[j * grid.rows() + k];
  }
  std::complex<double> s12(std::size_t k, std::size_t j) const {
    return sigma12[j * grid.rows() + k];
  }
};

// Marches sigma13/sigma12 in time with the classical 4th-order one-step
// scheme at every station, reconstructing the field at each stage from the
// boundary value and a trapezoidal integral of sigma13 in z.  The boundary
// is a callback evaluated at arbitrary times so the half-steps need no
// interpolation.  Initial profiles must have grid.cols() entries.  Nominal
// accuracy: O(dz^2) + O(dt^4).
OracleRun integrate(const std::function<std::complex<double>(double)>& boundary,
                    const std::vector<std::complex<double>>& sigma12_init,
                    const std::vector<std::complex<double>>& sigma13_init,
                    const OracleGrid& grid);

// Stored excitation at time level k, integrated over z by trapezoid:
//   E = integral of |s12|^2 + |s13|^2/4.
// For exact solutions dE/dt = (|a(t,0)|^2 - |a(t,L)|^2)/2, so the medium
// gains exactly what the field loses between the two faces.
double excitation(const OracleRun& run, std::size_t k);

}  // namespace lmem::oracle
