#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "relcont/tensor.hpp"
#include "relcont/util.hpp"

namespace relcont {

// uniform tensor-product chart grid; endpoints included
struct ChartGrid {
  std::size_t dim = 0;
  std::vector<double> lo, hi;
  std::vector<std::size_t> shape;

  std::size_t num_points() const {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
  }
  double spacing(std::size_t axis) const {
    return (hi[axis] - lo[axis]) / static_cast<double>(shape[axis] - 1);
  }
  double coord(std::size_t axis, std::size_t i) const {
    return lo[axis] + spacing(axis) * static_cast<double>(i);
  }
  std::size_t flat(const std::size_t* midx) const {
    std::size_t f = 0;
    for (std::size_t a = 0; a < dim; ++a) f = f * shape[a] + midx[a];
    return f;
  }
  void unflat(std::size_t p, std::size_t* midx) const {
    for (std::size_t a = dim; a-- > 0;) {
      midx[a] = p % shape[a];
      p /= shape[a];
    }
  }
  std::vector<double> point(const std::size_t* midx) const {
    std::vector<double> x(dim);
    for (std::size_t a = 0; a < dim; ++a) x[a] = coord(a, midx[a]);
    return x;
  }
  bool interior(const std::size_t* midx, std::size_t margin) const {
    for (std::size_t a = 0; a < dim; ++a)
      if (midx[a] < margin || midx[a] + margin >= shape[a]) return false;
    return true;
  }
  bool interior(const std::size_t* midx, const std::size_t* margin) const {
    for (std::size_t a = 0; a < dim; ++a)
      if (midx[a] < margin[a] || midx[a] + margin[a] >= shape[a]) return false;
    return true;
  }
  // same bounds, N -> 2N-1 per axis
  ChartGrid refined() const {
    ChartGrid g = *this;
    for (std::size_t a = 0; a < dim; ++a) g.shape[a] = 2 * shape[a] - 1;
    return g;
  }
};

ChartGrid make_grid(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> shape);

inline std::vector<double> grid_point(const ChartGrid& g, std::size_t p) {
  std::vector<std::size_t> midx(g.dim);
  g.unflat(p, midx.data());
  return g.point(midx.data());
}

// per-point dense components over a chart grid, point-major layout
class TensorField {
 public:
  TensorField() = default;
  TensorField(ChartGrid grid, std::vector<Slot> slots)
      : grid_(std::move(grid)),
        slots_(std::move(slots)),
        comp_(ipow(grid_.dim, slots_.size())),
        data_(grid_.num_points() * comp_, 0.0) {}

  const ChartGrid& grid() const { return grid_; }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t rank() const { return slots_.size(); }
  std::size_t comp_size() const { return comp_; }
  std::size_t num_points() const { return grid_.num_points(); }
  bool empty() const { return data_.empty(); }

  double* point_data(std::size_t p) { return data_.data() + p * comp_; }
  const double* point_data(std::size_t p) const { return data_.data() + p * comp_; }

  TensorValue value(std::size_t p) const {
    TensorValue v(grid_.dim, slots_);
    const double* src = point_data(p);
    for (std::size_t c = 0; c < comp_; ++c) v[c] = src[c];
    return v;
  }
  void set_value(std::size_t p, const TensorValue& v) {
    double* dst = point_data(p);
    for (std::size_t c = 0; c < comp_; ++c) dst[c] = v[c];
  }

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  TensorField& operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
  }
  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(TensorField a, double s) { return a *= s; }
  friend TensorField operator*(double s, TensorField a) { return a *= s; }

 private:
  ChartGrid grid_;
  std::vector<Slot> slots_;
  std::size_t comp_ = 1;
  std::vector<double> data_;
};

// pointwise sampler; fn sees chart coordinates
TensorField sample_field(const ChartGrid& grid, std::vector<Slot> slots,
                         const std::function<TensorValue(const std::vector<double>&)>& fn);
TensorField sample_scalar(const ChartGrid& grid,
                          const std::function<double(const std::vector<double>&)>& fn);

// pointwise map over one or two fields
TensorField map_field(const TensorField& a, std::vector<Slot> out_slots,
                      const std::function<TensorValue(const TensorValue&)>& fn);
TensorField zip_fields(const TensorField& a, const TensorField& b, std::vector<Slot> out_slots,
                       const std::function<TensorValue(const TensorValue&, const TensorValue&)>& fn);

struct MetricField {
  TensorField g;     // Down Down
  TensorField ginv;  // Up Up
  std::vector<double> sqrt_abs_det;
  Orientation orient;

  const ChartGrid& grid() const { return g.grid(); }
  MetricValue value(std::size_t p) const;
};

MetricField build_metric_field(const ChartGrid& grid,
                               const std::function<TensorValue(const std::vector<double>&)>& g_fn,
                               Orientation o = {});

struct FieldNorms {
  double linf = 0.0;
  double l2 = 0.0;
  std::size_t worst_point = 0;
  std::size_t count = 0;
};

// norms over the margin-interior region; L2 is the RMS over points and components
FieldNorms field_norms(const TensorField& f, std::size_t margin);
FieldNorms diff_norms(const TensorField& a, const TensorField& b, std::size_t margin);

// per-axis margins, for refinement studies on symmetry-reduced grids where
// only some axes shrink their spacing
FieldNorms field_norms(const TensorField& f, const std::vector<std::size_t>& margins);
FieldNorms diff_norms(const TensorField& a, const TensorField& b,
                      const std::vector<std::size_t>& margins);

}  // namespace relcont
