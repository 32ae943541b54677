#pragma once

#include "relcont/grid.hpp"
#include "relcont/tensor.hpp"

namespace relcont {

// chart conventions: schwarzschild / reissner_nordstrom use (t, r, theta, phi)
TensorValue minkowski_g(std::size_t dim);
TensorValue schwarzschild_g(const std::vector<double>& x, double M);
TensorValue reissner_nordstrom_g(const std::vector<double>& x, double M, double Q);

// closed-form connection for the schwarzschild chart, used as an FD oracle
TensorValue schwarzschild_christoffel(const std::vector<double>& x, double M);

// Coulomb potential of the reissner_nordstrom solution, A = (Q/r) dt
TensorValue reissner_nordstrom_potential(const std::vector<double>& x, double Q);

MetricField minkowski_field(const ChartGrid& grid);
MetricField schwarzschild_field(const ChartGrid& grid, double M);
MetricField reissner_nordstrom_field(const ChartGrid& grid, double M, double Q);

}  // namespace relcont
