#include "lmem/oracle.hpp"

#include <stdexcept>
#include <string>

namespace lmem::oracle {

void OracleGrid::validate() const {
  if (t_steps < 1) throw std::invalid_argument("OracleGrid: t_steps must be >= 1");
  if (z_steps < 1) throw std::invalid_argument("OracleGrid: z_steps must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("OracleGrid: dt must be positive");
  if (!(dz > 0.0)) throw std::invalid_argument("OracleGrid: dz must be positive");
}

namespace {

using cplx = std::complex<double>;

// a(z_j) = a0 - (1/2) * cumulative trapezoid of s13 up to z_j.
void reconstruct_field(cplx a0, const std::vector<cplx>& s13, double dz,
                       std::vector<cplx>& a) {
  a[0] = a0;
  cplx acc{0.0, 0.0};
  for (std::size_t j = 1; j < s13.size(); ++j) {
    acc += 0.25 * dz * (s13[j - 1] + s13[j]);
    a[j] = a0 - acc;
  }
}

struct Slope {
  std::vector<cplx> d13;
  std::vector<cplx> d12;
};

void eval_rhs(const std::function<cplx(double)>& boundary, double t,
              const std::vector<cplx>& s13, const std::vector<cplx>& s12,
              double dz, std::vector<cplx>& a_scratch, Slope& out) {
  reconstruct_field(boundary(t), s13, dz, a_scratch);
  for (std::size_t j = 0; j < s13.size(); ++j) {
    out.d13[j] = a_scratch[j] - 2.0 * s12[j];
    out.d12[j] = 0.5 * s13[j];
  }
}

}  // namespace

OracleRun integrate(const std::function<cplx(double)>& boundary,
                    const std::vector<cplx>& sigma12_init,
                    const std::vector<cplx>& sigma13_init,
                    const OracleGrid& grid) {
  grid.validate();
  if (!boundary) throw std::invalid_argument("integrate: boundary callback is empty");
  const std::size_t rows = grid.rows();
  const std::size_t cols = grid.cols();
  if (sigma12_init.size() != cols || sigma13_init.size() != cols)
    throw std::invalid_argument("integrate: initial profiles must have " +
                                std::to_string(cols) + " entries");

  OracleRun run;
  run.grid = grid;
  run.a_field.assign(rows * cols, cplx{});
  run.sigma13.assign(rows * cols, cplx{});
  run.sigma12.assign(rows * cols, cplx{});
  run.boundary.assign(rows, cplx{});

  std::vector<cplx> s13 = sigma13_init;
  std::vector<cplx> s12 = sigma12_init;
  std::vector<cplx> y13(cols), y12(cols), a_scratch(cols);
  Slope k1{std::vector<cplx>(cols), std::vector<cplx>(cols)};
  Slope k2 = k1, k3 = k1, k4 = k1;

  auto store_level = [&](std::size_t k) {
    reconstruct_field(boundary(static_cast<double>(k) * grid.dt), s13, grid.dz, a_scratch);
    run.boundary[k] = a_scratch[0];
    for (std::size_t j = 0; j < cols; ++j) {
      run.a_field[j * rows + k] = a_scratch[j];
      run.sigma13[j * rows + k] = s13[j];
      run.sigma12[j * rows + k] = s12[j];
    }
  };

  store_level(0);
  const double h = grid.dt;
  for (std::size_t k = 0; k < grid.t_steps; ++k) {
    const double t = static_cast<double>(k) * h;

    eval_rhs(boundary, t, s13, s12, grid.dz, a_scratch, k1);
    for (std::size_t j = 0; j < cols; ++j) {
      y13[j] = s13[j] + 0.5 * h * k1.d13[j];
      y12[j] = s12[j] + 0.5 * h * k1.d12[j];
    }
    eval_rhs(boundary, t + 0.5 * h, y13, y12, grid.dz, a_scratch, k2);
    for (std::size_t j = 0; j < cols; ++j) {
      y13[j] = s13[j] + 0.5 * h * k2.d13[j];
      y12[j] = s12[j] + 0.5 * h * k2.d12[j];
    }
    eval_rhs(boundary, t + 0.5 * h, y13, y12, grid.dz, a_scratch, k3);
    for (std::size_t j = 0; j < cols; ++j) {
      y13[j] = s13[j] + h * k3.d13[j];
      y12[j] = s12[j] + h * k3.d12[j];
    }
    eval_rhs(boundary, t + h, y13, y12, grid.dz, a_scratch, k4);

    for (std::size_t j = 0; j < cols; ++j) {
      s13[j] += h / 6.0 * (k1.d13[j] + 2.0 * k2.d13[j] + 2.0 * k3.d13[j] + k4.d13[j]);
      s12[j] += h / 6.0 * (k1.d12[j] + 2.0 * k2.d12[j] + 2.0 * k3.d12[j] + k4.d12[j]);
    }
    store_level(k + 1);
  }
  return run;
}

double excitation(const OracleRun& run, std::size_t k) {
  const std::size_t rows = run.grid.rows();
  const std::size_t cols = run.grid.cols();
  if (k >= rows) throw std::invalid_argument("excitation: time index out of range");
  auto density = [&](std::size_t j) {
    return std::norm(run.sigma12[j * rows + k]) + 0.25 * std::norm(run.sigma13[j * rows + k]);
  };
  double sum = 0.5 * (density(0) + density(cols - 1));
  for (std::size_t j = 1; j + 1 < cols; ++j) sum += density(j);
  return sum * run.grid.dz;
}

}  // namespace lmem::oracle
