#include "relcont/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace relcont {

ChartGrid make_grid(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> shape) {
  ChartGrid g;
  g.dim = shape.size();
  if (lo.size() != g.dim || hi.size() != g.dim) throw std::invalid_argument("grid spec mismatch");
  for (std::size_t a = 0; a < g.dim; ++a) {
    if (shape[a] < 5) throw std::invalid_argument("grid needs at least 5 points per axis");
    if (!(hi[a] > lo[a])) throw std::invalid_argument("grid bounds must be increasing");
  }
  g.lo = std::move(lo);
  g.hi = std::move(hi);
  g.shape = std::move(shape);
  return g;
}

TensorField& TensorField::operator+=(const TensorField& o) {
  if (slots_ != o.slots_ || data_.size() != o.data_.size())
    throw std::invalid_argument("field shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  if (slots_ != o.slots_ || data_.size() != o.data_.size())
    throw std::invalid_argument("field shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

TensorField sample_field(const ChartGrid& grid, std::vector<Slot> slots,
                         const std::function<TensorValue(const std::vector<double>&)>& fn) {
  TensorField f(grid, std::move(slots));
  std::size_t np = grid.num_points();
  parallel_for(np, [&](std::size_t b, std::size_t e) {
    std::vector<std::size_t> midx(grid.dim);
    for (std::size_t p = b; p < e; ++p) {
      grid.unflat(p, midx.data());
      f.set_value(p, fn(grid.point(midx.data())));
    }
  });
  return f;
}

TensorField sample_scalar(const ChartGrid& grid,
                          const std::function<double(const std::vector<double>&)>& fn) {
  return sample_field(grid, {}, [&](const std::vector<double>& x) {
    return scalar_value(grid.dim, fn(x));
  });
}

TensorField map_field(const TensorField& a, std::vector<Slot> out_slots,
                      const std::function<TensorValue(const TensorValue&)>& fn) {
  TensorField out(a.grid(), std::move(out_slots));
  parallel_for(a.num_points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) out.set_value(p, fn(a.value(p)));
  });
  return out;
}

TensorField zip_fields(const TensorField& a, const TensorField& b, std::vector<Slot> out_slots,
                       const std::function<TensorValue(const TensorValue&, const TensorValue&)>& fn) {
  TensorField out(a.grid(), std::move(out_slots));
  parallel_for(a.num_points(), [&](std::size_t bg, std::size_t e) {
    for (std::size_t p = bg; p < e; ++p) out.set_value(p, fn(a.value(p), b.value(p)));
  });
  return out;
}

MetricValue MetricField::value(std::size_t p) const {
  MetricValue m;
  m.dim = g.grid().dim;
  m.g = g.value(p);
  m.ginv = ginv.value(p);
  m.sqrt_abs_det = sqrt_abs_det[p];
  m.det = -m.sqrt_abs_det * m.sqrt_abs_det;  // Lorentzian sign
  return m;
}

MetricField build_metric_field(const ChartGrid& grid,
                               const std::function<TensorValue(const std::vector<double>&)>& g_fn,
                               Orientation o) {
  MetricField m;
  m.orient = o;
  m.g = TensorField(grid, {Slot::Down, Slot::Down});
  m.ginv = TensorField(grid, {Slot::Up, Slot::Up});
  m.sqrt_abs_det.assign(grid.num_points(), 0.0);
  std::size_t np = grid.num_points();
  parallel_for(np, [&](std::size_t b, std::size_t e) {
    std::vector<std::size_t> midx(grid.dim);
    for (std::size_t p = b; p < e; ++p) {
      grid.unflat(p, midx.data());
      MetricValue mv = make_metric(g_fn(grid.point(midx.data())));
      m.g.set_value(p, mv.g);
      m.ginv.set_value(p, mv.ginv);
      m.sqrt_abs_det[p] = mv.sqrt_abs_det;
    }
  });
  return m;
}

FieldNorms field_norms(const TensorField& f, std::size_t margin) {
  return field_norms(f, std::vector<std::size_t>(f.grid().dim, margin));
}

FieldNorms diff_norms(const TensorField& a, const TensorField& b, std::size_t margin) {
  return diff_norms(a, b, std::vector<std::size_t>(a.grid().dim, margin));
}

FieldNorms field_norms(const TensorField& f, const std::vector<std::size_t>& margins) {
  const ChartGrid& grid = f.grid();
  FieldNorms n;
  double sum2 = 0.0;
  std::vector<std::size_t> midx(grid.dim);
  std::size_t np = f.num_points();
  for (std::size_t p = 0; p < np; ++p) {
    grid.unflat(p, midx.data());
    if (!grid.interior(midx.data(), margins.data())) continue;
    const double* d = f.point_data(p);
    for (std::size_t c = 0; c < f.comp_size(); ++c) {
      double v = std::fabs(d[c]);
      if (v > n.linf) {
        n.linf = v;
        n.worst_point = p;
      }
      sum2 += d[c] * d[c];
    }
    ++n.count;
  }
  if (n.count > 0) n.l2 = std::sqrt(sum2 / (static_cast<double>(n.count) * f.comp_size()));
  return n;
}

FieldNorms diff_norms(const TensorField& a, const TensorField& b,
                      const std::vector<std::size_t>& margins) {
  TensorField d = a;
  d -= b;
  return field_norms(d, margins);
}

}  // namespace relcont
