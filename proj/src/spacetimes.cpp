#include "relcont/spacetimes.hpp"

#include <cmath>
#include <stdexcept>

namespace relcont {

TensorValue minkowski_g(std::size_t dim) {
    TensorValue g(dim, {Slot::Down, Slot::Down});
    g(0, 0) = -1.0;
    for (std::size_t i = 1; i < dim; ++i) g(i, i) = 1.0;
    return g;
}

TensorValue schwarzschild_g(const std::vector<double>& x, double M) {
    return reissner_nordstrom_g(x, M, 0.0);
}

TensorValue reissner_nordstrom_g(const std::vector<double>& x, double M, double Q) {
    if (x.size() != 4) throw std::invalid_argument("reissner_nordstrom_g: chart must have 4 coordinates");
    double r = x[1];
    double th = x[2];
    double f = 1.0 - 2.0 * M / r + Q * Q / (r * r);
    if (f <= 0.0) throw std::invalid_argument("reissner_nordstrom_g: chart point inside horizon");
    TensorValue g(4, {Slot::Down, Slot::Down});
    g(0, 0) = -f;
    g(1, 1) = 1.0 / f;
    g(2, 2) = r * r;
    g(3, 3) = r * r * std::sin(th) * std::sin(th);
    return g;
}

TensorValue schwarzschild_christoffel(const std::vector<double>& x, double M) {
    double r = x[1];
    double th = x[2];
    double f = 1.0 - 2.0 * M / r;
    double fp = 2.0 * M / (r * r);
    double st = std::sin(th), ct = std::cos(th);
    TensorValue gam(4, {Slot::Up, Slot::Down, Slot::Down});
    gam(0, 0, 1) = gam(0, 1, 0) = fp / (2.0 * f);
    gam(1, 0, 0) = f * fp / 2.0;
    gam(1, 1, 1) = -fp / (2.0 * f);
    gam(1, 2, 2) = -r * f;
    gam(1, 3, 3) = -r * f * st * st;
    gam(2, 1, 2) = gam(2, 2, 1) = 1.0 / r;
    gam(2, 3, 3) = -st * ct;
    gam(3, 1, 3) = gam(3, 3, 1) = 1.0 / r;
    gam(3, 2, 3) = gam(3, 3, 2) = ct / st;
    return gam;
}

TensorValue reissner_nordstrom_potential(const std::vector<double>& x, double Q) {
    TensorValue a(4, {Slot::Down});
    a(0) = Q / x[1];
    return a;
}

MetricField minkowski_field(const ChartGrid& grid) {
    TensorValue g = minkowski_g(grid.dim);
    return build_metric_field(grid, [&](const std::vector<double>&) { return g; });
}

MetricField schwarzschild_field(const ChartGrid& grid, double M) {
    return build_metric_field(grid, [&](const std::vector<double>& x) { return schwarzschild_g(x, M); });
}

MetricField reissner_nordstrom_field(const ChartGrid& grid, double M, double Q) {
    return build_metric_field(grid, [&](const std::vector<double>& x) { return reissner_nordstrom_g(x, M, Q); });
}

}  // namespace relcont
