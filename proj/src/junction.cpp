#include "relcont/junction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>

#include "relcont/calculus.hpp"

namespace relcont {

namespace {

std::vector<std::string> coord_names(std::size_t dim) {
  std::vector<std::string> names(dim);
  for (std::size_t a = 0; a < dim; ++a) names[a] = "x" + std::to_string(a);
  return names;
}

// level set with symbolic first and second partials, bound to x0..x{dim-1}
struct LevelSet {
  std::size_t dim = 0;
  BoundExpression phi;
  std::vector<BoundExpression> dphi;
  std::vector<BoundExpression> ddphi;  // row-major dim x dim
};

LevelSet bind_level_set(const Expression& phi, std::size_t dim) {
  std::vector<std::string> names = coord_names(dim);
  std::set<std::string> allowed(names.begin(), names.end());
  phi.check_variables(allowed);
  LevelSet ls;
  ls.dim = dim;
  ls.phi = BoundExpression(phi, names);
  ls.dphi.reserve(dim);
  ls.ddphi.reserve(dim * dim);
  std::vector<Expression> first;
  first.reserve(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    first.push_back(phi.derivative(names[a]));
    ls.dphi.emplace_back(first.back(), names);
  }
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b)
      ls.ddphi.emplace_back(first[a].derivative(names[b]), names);
  return ls;
}

std::vector<double> gradient_at(const LevelSet& ls, const std::vector<double>& x) {
  std::vector<double> g(ls.dim);
  for (std::size_t a = 0; a < ls.dim; ++a) g[a] = ls.dphi[a].eval(x.data());
  return g;
}

double euclid_norm(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

double value_norm(const TensorValue& v) { return euclid_norm(v.data(), v.size()); }

// per-axis 3-point stencil: one-sided planes along the axis most aligned with
// grad phi, nearest centered window tangentially
struct Stencil {
  std::vector<std::array<std::size_t, 3>> idx;
  std::vector<std::array<double, 3>> w;
};

Stencil one_sided_stencil(const ChartGrid& grid, const std::vector<double>& x, int region_sign,
                          const std::vector<double>& grad) {
  std::size_t dim = grid.dim;
  std::size_t dominant = 0;
  double best = -1.0;
  for (std::size_t a = 0; a < dim; ++a) {
    double score = std::fabs(grad[a]) * grid.spacing(a);
    if (score > best) {
      best = score;
      dominant = a;
    }
  }
  Stencil st;
  st.idx.resize(dim);
  st.w.resize(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    double h = grid.spacing(a);
    double r = (x[a] - grid.lo[a]) / h;
    std::size_t last = grid.shape[a] - 1;
    if (r < -1e-9 || r > static_cast<double>(last) + 1e-9)
      throw std::domain_error("interface sample outside the grid");
    if (a == dominant) {
      int dir = region_sign * (grad[a] > 0.0 ? 1 : -1);
      if (dir < 0) {
        double fl = std::floor(r + 1e-9);
        if (fl < 2.0) throw std::domain_error("interface band too thin for one-sided stencils");
        std::size_t top = static_cast<std::size_t>(fl);
        if (top > last) top = last;
        st.idx[a] = {top - 2, top - 1, top};
      } else {
        double cl = std::ceil(r - 1e-9);
        std::size_t bot = cl < 0.0 ? 0 : static_cast<std::size_t>(cl);
        if (bot + 2 > last)
          throw std::domain_error("interface band too thin for one-sided stencils");
        st.idx[a] = {bot, bot + 1, bot + 2};
      }
    } else {
      long j = std::lround(r);
      if (j < 1) j = 1;
      if (j > static_cast<long>(last) - 1) j = static_cast<long>(last) - 1;
      std::size_t m = static_cast<std::size_t>(j);
      st.idx[a] = {m - 1, m, m + 1};
    }
    for (std::size_t k = 0; k < 3; ++k) {
      double tk = grid.coord(a, st.idx[a][k]);
      double wk = 1.0;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j == k) continue;
        double tj = grid.coord(a, st.idx[a][j]);
        wk *= (x[a] - tj) / (tk - tj);
      }
      st.w[a][k] = wk;
    }
  }
  return st;
}

TensorValue stencil_value(const TensorField& f, const Stencil& st) {
  const ChartGrid& grid = f.grid();
  std::size_t dim = grid.dim;
  TensorValue out(dim, f.slots());
  std::size_t comp = f.comp_size();
  std::vector<std::size_t> midx(dim);
  std::size_t combos = ipow(3, dim);
  for (std::size_t c = 0; c < combos; ++c) {
    double wgt = 1.0;
    std::size_t cc = c;
    for (std::size_t a = 0; a < dim; ++a) {
      std::size_t k = cc % 3;
      cc /= 3;
      midx[a] = st.idx[a][k];
      wgt *= st.w[a][k];
    }
    const double* src = f.point_data(grid.flat(midx.data()));
    for (std::size_t i = 0; i < comp; ++i) out[i] += wgt * src[i];
  }
  return out;
}

// metric and stencil of one side at one sample
struct SideContext {
  Stencil st;
  MetricValue g;
};

SideContext side_context(const MetricField& m, const std::vector<double>& x, int region_sign,
                         const std::vector<double>& grad) {
  SideContext ctx;
  ctx.st = one_sided_stencil(m.grid(), x, region_sign, grad);
  ctx.g = make_metric(stencil_value(m.g, ctx.st));
  return ctx;
}

SurfacePoint geometry_from(const LevelSet& ls, const SideContext& ctx, const TensorField* gamma,
                           const std::vector<double>& x, double normal_sign, bool with_curvature,
                           bool with_frame) {
  std::size_t dim = ls.dim;
  const MetricValue& g = ctx.g;
  SurfacePoint out;
  out.x = x;

  std::vector<double> da(dim);
  for (std::size_t a = 0; a < dim; ++a) da[a] = ls.dphi[a].eval(x.data());
  double grad2 = 0.0;
  for (std::size_t a = 0; a < dim; ++a) grad2 += da[a] * da[a];
  if (grad2 < 1e-20)
    throw std::domain_error("level set gradient vanishes on the interface");
  double q = 0.0;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) q += g.ginv(a, b) * da[a] * da[b];
  if (std::fabs(q) < 1e-10 * grad2)
    throw std::domain_error("interface normal is null");
  out.eps = q > 0.0 ? 1.0 : -1.0;
  double nn = std::sqrt(std::fabs(q));

  out.n_down = TensorValue(dim, {Slot::Down});
  for (std::size_t a = 0; a < dim; ++a) out.n_down(a) = normal_sign * da[a] / nn;
  out.n_up = raise_index(out.n_down, 0, g);
  out.h = g.g - out.eps * tensor_product(out.n_down, out.n_down);

  if (with_frame) {
    for (std::size_t a = 0; a < dim && out.tangents.size() + 1 < dim; ++a) {
      TensorValue v = basis_vector(dim, a);
      double cn = 0.0;
      for (std::size_t m = 0; m < dim; ++m) cn += out.n_down(m) * v(m);
      v -= out.eps * cn * out.n_up;
      for (std::size_t t = 0; t < out.tangents.size(); ++t) {
        const TensorValue& tv = out.tangents[t];
        double ct = 0.0;
        for (std::size_t m = 0; m < dim; ++m)
          for (std::size_t n = 0; n < dim; ++n) ct += g.g(m, n) * tv(m) * v(n);
        v -= out.tangent_sign[t] * ct * tv;
      }
      double vv = 0.0;
      for (std::size_t m = 0; m < dim; ++m)
        for (std::size_t n = 0; n < dim; ++n) vv += g.g(m, n) * v(m) * v(n);
      if (std::fabs(vv) < 1e-10) continue;
      out.tangent_sign.push_back(vv > 0.0 ? 1.0 : -1.0);
      out.tangents.push_back(v * (1.0 / std::sqrt(std::fabs(vv))));
    }
    if (out.tangents.size() != dim - 1)
      throw std::domain_error("degenerate tangent frame on the interface");
  }

  if (with_curvature) {
    TensorValue gam = stencil_value(*gamma, ctx.st);
    std::vector<double> dda(dim * dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) dda[a * dim + b] = ls.ddphi[a * dim + b].eval(x.data());

    // metric derivatives recovered from the connection, dg_{lk,b}
    std::vector<double> dg(dim * dim * dim, 0.0);
    for (std::size_t l = 0; l < dim; ++l)
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t b = 0; b < dim; ++b) {
          double v = 0.0;
          for (std::size_t a = 0; a < dim; ++a)
            v += g.g(a, k) * gam(a, b, l) + g.g(l, a) * gam(a, b, k);
          dg[(l * dim + k) * dim + b] = v;
        }
    // dq_b = d_b(g^{rs}) phi_r phi_s + 2 g^{rs} phi_{rb} phi_s
    std::vector<double> dq(dim, 0.0);
    for (std::size_t b = 0; b < dim; ++b) {
      double v = 0.0;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t s = 0; s < dim; ++s) {
          double dginv = 0.0;
          for (std::size_t l = 0; l < dim; ++l)
            for (std::size_t k = 0; k < dim; ++k)
              dginv -= g.ginv(r, l) * g.ginv(s, k) * dg[(l * dim + k) * dim + b];
          v += dginv * da[r] * da[s] + 2.0 * g.ginv(r, s) * dda[r * dim + b] * da[s];
        }
      dq[b] = v;
    }

    TensorValue kraw(dim, {Slot::Down, Slot::Down});
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) {
        double dnorm = out.eps * dq[b] / (2.0 * nn);
        double dn = normal_sign * (dda[a * dim + b] / nn - da[a] * dnorm / (nn * nn));
        double conn = 0.0;
        for (std::size_t l = 0; l < dim; ++l) conn += gam(l, a, b) * out.n_down(l);
        kraw(a, b) = dn - conn;
      }
    out.K = TensorValue(dim, {Slot::Down, Slot::Down});
    for (std::size_t m = 0; m < dim; ++m)
      for (std::size_t n = 0; n < dim; ++n) {
        double v = 0.0;
        for (std::size_t a = 0; a < dim; ++a)
          for (std::size_t b = 0; b < dim; ++b) {
            double pa = (a == m ? 1.0 : 0.0) - out.eps * out.n_up(a) * out.n_down(m);
            double pb = (b == n ? 1.0 : 0.0) - out.eps * out.n_up(b) * out.n_down(n);
            v += pa * pb * kraw(a, b);
          }
        out.K(m, n) = v;
      }
    out.k = 0.0;
    for (std::size_t m = 0; m < dim; ++m)
      for (std::size_t n = 0; n < dim; ++n) out.k += g.ginv(m, n) * out.K(m, n);
  }
  return out;
}

// parallel loop over samples that carries worker exceptions back to the caller
void for_each_sample(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr err = nullptr;
  std::mutex mu;
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    try {
      for (std::size_t i = b; i < e; ++i) body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);
}

JumpEntry make_entry(std::string name, std::vector<double> vals) {
  JumpEntry e;
  e.name = std::move(name);
  e.per_point = std::move(vals);
  double s2 = 0.0;
  for (double v : e.per_point) {
    e.linf = std::max(e.linf, std::fabs(v));
    s2 += v * v;
  }
  e.l2 = e.per_point.empty() ? 0.0 : std::sqrt(s2 / static_cast<double>(e.per_point.size()));
  return e;
}

bool grids_equal(const ChartGrid& a, const ChartGrid& b) {
  return a.dim == b.dim && a.lo == b.lo && a.hi == b.hi && a.shape == b.shape;
}

void check_on_grid(const TensorField& f, const ChartGrid& grid, std::vector<Slot> slots,
                   const char* what) {
  if (!grids_equal(f.grid(), grid) || f.slots() != slots)
    throw std::invalid_argument(std::string(what) + " field has wrong shape");
}

double check_side(int side) {
  if (side != -1 && side != 1) throw std::invalid_argument("side must be -1 or +1");
  return side == -1 ? 1.0 : -1.0;  // outward normal sign along grad phi
}

void validate_solution(const TwoSidedSolution& sol) {
  std::size_t dim = sol.iface.dim;
  if (dim < 3) throw std::invalid_argument("junction evaluation needs dim >= 3");
  if (sol.iface.samples.empty()) throw std::invalid_argument("interface has no samples");
  if (sol.g_minus.grid().dim != dim || sol.g_plus.grid().dim != dim)
    throw std::invalid_argument("solution grids do not match the interface dimension");
  const ChartGrid& gm = sol.g_minus.grid();
  const ChartGrid& gp = sol.g_plus.grid();
  check_on_grid(sol.a_minus, gm, {Slot::Down}, "interior potential");
  check_on_grid(sol.a_plus, gp, {Slot::Down}, "exterior potential");
  check_on_grid(sol.u, gm, {Slot::Up}, "velocity");
  check_on_grid(sol.rho, gm, {}, "density");
  check_on_grid(sol.s, gm, {}, "entropy");
  if (!sol.c_tensor.empty())
    check_on_grid(sol.c_tensor, gm, {Slot::Down, Slot::Down}, "strain");
  if (!(sol.c > 0.0)) throw std::invalid_argument("light speed must be positive");
}

}  // namespace

Interface sample_interface(const Expression& phi, const std::vector<double>& lo,
                           const std::vector<double>& hi,
                           const std::vector<std::size_t>& shape) {
  std::size_t dim = lo.size();
  if (dim == 0 || hi.size() != dim || shape.size() != dim)
    throw std::invalid_argument("sampling box spec mismatch");
  for (std::size_t a = 0; a < dim; ++a) {
    if (!(hi[a] > lo[a])) throw std::invalid_argument("sampling box bounds must be increasing");
    if (shape[a] < 2) throw std::invalid_argument("sampling lattice needs at least 2 points per axis");
  }
  LevelSet ls = bind_level_set(phi, dim);

  ChartGrid lat;
  lat.dim = dim;
  lat.lo = lo;
  lat.hi = hi;
  lat.shape = shape;
  std::size_t np = lat.num_points();
  std::vector<double> vals(np);
  std::vector<std::size_t> midx(dim);
  for (std::size_t p = 0; p < np; ++p) {
    lat.unflat(p, midx.data());
    std::vector<double> x = lat.point(midx.data());
    vals[p] = ls.phi.eval(x.data());
  }

  Interface out;
  out.phi = phi;
  out.dim = dim;

  auto polish = [&](std::vector<double> x) {
    std::vector<double> grad = gradient_at(ls, x);
    double g2 = 0.0;
    for (double v : grad) g2 += v * v;
    if (g2 < 1e-20) throw std::domain_error("level set gradient vanishes on the interface");
    double f = ls.phi.eval(x.data());
    for (std::size_t a = 0; a < dim; ++a) x[a] -= f * grad[a] / g2;
    double check = ls.phi.eval(x.data());
    if (std::fabs(check) > 1e-8 * (1.0 + std::sqrt(g2)))
      throw std::runtime_error("interface projection failed to converge");
    out.samples.push_back(std::move(x));
  };

  for (std::size_t p = 0; p < np; ++p)
    if (vals[p] == 0.0) {
      lat.unflat(p, midx.data());
      polish(lat.point(midx.data()));
    }

  for (std::size_t axis = 0; axis < dim; ++axis) {
    for (std::size_t p = 0; p < np; ++p) {
      lat.unflat(p, midx.data());
      if (midx[axis] + 1 >= lat.shape[axis]) continue;
      std::size_t base = lat.flat(midx.data());
      midx[axis] += 1;
      std::size_t next = lat.flat(midx.data());
      midx[axis] -= 1;
      double f0 = vals[base], f1 = vals[next];
      if (!(f0 * f1 < 0.0)) continue;
      std::vector<double> x = lat.point(midx.data());
      double t0 = 0.0, t1 = 1.0;
      double h = lat.spacing(axis);
      std::vector<double> xt = x;
      for (int it = 0; it < 48; ++it) {
        double tm = 0.5 * (t0 + t1);
        xt[axis] = x[axis] + tm * h;
        double fm = ls.phi.eval(xt.data());
        if (fm == 0.0) {
          t0 = t1 = tm;
          break;
        }
        if ((fm > 0.0) == (f0 > 0.0))
          t0 = tm;
        else
          t1 = tm;
      }
      xt[axis] = x[axis] + 0.5 * (t0 + t1) * h;
      polish(xt);
    }
  }

  if (out.samples.empty())
    throw std::invalid_argument("interface does not intersect the sampling box");
  return out;
}

std::vector<SurfacePoint> interface_geometry(const Interface& iface, const MetricField& m,
                                             int side) {
  double normal_sign = check_side(side);
  if (iface.dim != m.grid().dim)
    throw std::invalid_argument("metric grid does not match the interface dimension");
  if (iface.samples.empty()) throw std::invalid_argument("interface has no samples");
  LevelSet ls = bind_level_set(iface.phi, iface.dim);
  TensorField gamma = christoffel(m);
  std::vector<SurfacePoint> out(iface.samples.size());
  for_each_sample(out.size(), [&](std::size_t i) {
    const std::vector<double>& x = iface.samples[i];
    std::vector<double> grad = gradient_at(ls, x);
    SideContext ctx = side_context(m, x, side, grad);
    out[i] = geometry_from(ls, ctx, &gamma, x, normal_sign, true, true);
  });
  return out;
}

bool JumpReport::has(const std::string& name) const {
  for (const JumpEntry& e : entries)
    if (e.name == name) return true;
  return false;
}

const JumpEntry& JumpReport::entry(const std::string& name) const {
  for (const JumpEntry& e : entries)
    if (e.name == name) return e;
  throw std::invalid_argument("no jump entry named " + name);
}

void JumpReport::push(JumpEntry e) {
  if (has(e.name)) throw std::logic_error("duplicate jump entry " + e.name);
  entries.push_back(std::move(e));
}

JumpReport preliminary_jumps(const TwoSidedSolution& sol, int side) {
  double normal_sign = check_side(side);
  validate_solution(sol);
  LevelSet ls = bind_level_set(sol.iface.phi, sol.iface.dim);
  std::size_t ns = sol.iface.samples.size();
  std::vector<double> rg(ns), ra(ns);
  for_each_sample(ns, [&](std::size_t i) {
    const std::vector<double>& x = sol.iface.samples[i];
    std::vector<double> grad = gradient_at(ls, x);
    SideContext cm = side_context(sol.g_minus, x, -1, grad);
    SideContext cp = side_context(sol.g_plus, x, +1, grad);
    SurfacePoint geo = geometry_from(ls, cm, nullptr, x, normal_sign, false, true);
    TensorValue dgv = stencil_value(sol.g_plus.g, cp.st) - stencil_value(sol.g_minus.g, cm.st);
    TensorValue dav = stencil_value(sol.a_plus, cp.st) - stencil_value(sol.a_minus, cm.st);
    std::size_t dim = sol.iface.dim;
    double sg = 0.0, sa = 0.0;
    for (std::size_t ti = 0; ti + 1 < dim; ++ti) {
      double ca = 0.0;
      for (std::size_t mu = 0; mu < dim; ++mu) ca += geo.tangents[ti](mu) * dav(mu);
      sa += ca * ca;
      for (std::size_t tj = 0; tj + 1 < dim; ++tj) {
        double cg = 0.0;
        for (std::size_t mu = 0; mu < dim; ++mu)
          for (std::size_t nu = 0; nu < dim; ++nu)
            cg += geo.tangents[ti](mu) * geo.tangents[tj](nu) * dgv(mu, nu);
        sg += cg * cg;
      }
    }
    rg[i] = std::sqrt(sg);
    ra[i] = std::sqrt(sa);
  });
  JumpReport rep;
  rep.push(make_entry("tangential_metric", std::move(rg)));
  rep.push(make_entry("tangential_potential", std::move(ra)));
  return rep;
}

JumpReport israel_darmois(const TwoSidedSolution& sol, int side) {
  double normal_sign = check_side(side);
  validate_solution(sol);
  LevelSet ls = bind_level_set(sol.iface.phi, sol.iface.dim);
  TensorField gamma_m = christoffel(sol.g_minus);
  TensorField gamma_p = christoffel(sol.g_plus);
  std::size_t ns = sol.iface.samples.size();
  std::vector<double> rk(ns);
  for_each_sample(ns, [&](std::size_t i) {
    const std::vector<double>& x = sol.iface.samples[i];
    std::vector<double> grad = gradient_at(ls, x);
    SideContext cm = side_context(sol.g_minus, x, -1, grad);
    SideContext cp = side_context(sol.g_plus, x, +1, grad);
    // shared orientation: both sides use the interior outward normal
    SurfacePoint gm = geometry_from(ls, cm, &gamma_m, x, normal_sign, true, true);
    SurfacePoint gp = geometry_from(ls, cp, &gamma_p, x, normal_sign, true, false);
    std::size_t dim = sol.iface.dim;
    for (std::size_t ti = 0; ti + 1 < dim; ++ti) {
      double c = 0.0;
      for (std::size_t mu = 0; mu < dim; ++mu) c += gp.n_down(mu) * gm.tangents[ti](mu);
      if (std::fabs(c) > 1e-8 * (1.0 + value_norm(gp.n_down) * value_norm(gm.tangents[ti])))
        throw std::domain_error("tangent frame misaligned across the interface");
    }
    TensorValue dk = gp.K - gm.K;
    double s = 0.0;
    for (std::size_t ti = 0; ti + 1 < dim; ++ti)
      for (std::size_t tj = 0; tj + 1 < dim; ++tj) {
        double c = 0.0;
        for (std::size_t mu = 0; mu < dim; ++mu)
          for (std::size_t nu = 0; nu < dim; ++nu)
            c += gm.tangents[ti](mu) * gm.tangents[tj](nu) * dk(mu, nu);
        s += c * c;
      }
    rk[i] = std::sqrt(s);
  });
  JumpReport rep;
  rep.push(make_entry("extrinsic_curvature", std::move(rk)));
  return rep;
}

JumpReport em_jumps(const TwoSidedSolution& sol, int side) {
  double normal_sign = check_side(side);
  validate_solution(sol);
  if (sol.model.kind.empty()) throw std::invalid_argument("missing interior constitutive model");
  LevelSet ls = bind_level_set(sol.iface.phi, sol.iface.dim);
  TensorField f_minus = exterior_derivative(sol.a_minus);
  TensorField f_plus = exterior_derivative(sol.a_plus);
  Orientation o = sol.g_minus.orient;
  std::size_t ns = sol.iface.samples.size();
  std::size_t dim = sol.iface.dim;
  std::vector<double> r_vel(ns), r_stress(ns), r_te(ns), r_nb(ns), r_nd(ns), r_th(ns), r_s(ns);
  for_each_sample(ns, [&](std::size_t i) {
    const std::vector<double>& x = sol.iface.samples[i];
    std::vector<double> grad = gradient_at(ls, x);
    SideContext cm = side_context(sol.g_minus, x, -1, grad);
    SideContext cp = side_context(sol.g_plus, x, +1, grad);
    SurfacePoint geo = geometry_from(ls, cm, nullptr, x, normal_sign, false, false);
    const MetricValue& g = cm.g;

    TensorValue uv = stencil_value(sol.u, cm.st);
    double rho = stencil_value(sol.rho, cm.st)[0];
    double s = stencil_value(sol.s, cm.st)[0];
    std::optional<TensorValue> copt;
    if (!sol.c_tensor.empty()) copt = stencil_value(sol.c_tensor, cm.st);
    ObserverFrame fr{uv, sol.c};

    FormValue fm = FormValue::from_tensor(stencil_value(f_minus, cm.st));
    FormValue fp = FormValue::from_tensor(stencil_value(f_plus, cp.st));
    EMSplit ebm = eb_decompose(fm, fr, g, o);
    EMSplit ebp = eb_decompose(fp, fr, g, o);

    ConstitutiveSplit split = evaluate_split_raw(sol.model, rho, s, ebm.E, ebm.B, copt, g);
    FormValue dm = flat(split.total.deps_dE, g) * -1.0;
    FormValue hm = flat(split.total.deps_dB, g);
    MatterState ms;
    ms.rho = rho;
    ms.s = s;
    ms.E = ebm.E;
    ms.B = ebm.B;
    ms.c_tensor = copt;
    ms.g = g;
    ms.frame = fr;
    double pm = pressure_and_energy(split.total, ms).p;
    TensorValue tm = -1.0 * tensor_product(split.total.deps_dE, ebm.E.tensor());
    if (ebm.B.degree() >= 1) tm += trace_tensor_product(sharp(ebm.B, g), hm);
    if (split.total.deps_dc && copt) tm += elastic_stress(split.total, ms);

    double pp = 0.5 * (form_inner(ebp.E, ebp.E, g) + form_inner(ebp.B, ebp.B, g));
    TensorValue tp = tensor_product(sharp(ebp.E, g), ebp.E.tensor());
    if (ebp.B.degree() >= 1) tp += trace_tensor_product(sharp(ebp.B, g), ebp.B);

    double vel = 0.0;
    for (std::size_t a = 0; a < dim; ++a) vel += geo.n_down(a) * uv(a);
    r_vel[i] = std::fabs(vel);

    TensorValue tl = lower_index(tp, 0, g) - lower_index(tm, 0, g);
    TensorValue res(dim, {Slot::Down});
    for (std::size_t mu = 0; mu < dim; ++mu) {
      double v = 0.0;
      for (std::size_t nu = 0; nu < dim; ++nu) v += tl(mu, nu) * geo.n_up(nu);
      res(mu) = v - (pp - pm) * geo.n_down(mu);
    }
    r_stress[i] = value_norm(res);

    FormValue de = ebp.E - ebm.E;
    r_te[i] = value_norm(
        interior_product(geo.n_up, interior_product(uv, hodge_star(de, g, o))).tensor());
    FormValue db = ebp.B - ebm.B;
    r_nb[i] = db.degree() >= 1 ? value_norm(interior_product(geo.n_up, db).tensor()) : 0.0;
    FormValue dd = ebp.E - dm;
    r_nd[i] = value_norm(interior_product(geo.n_up, dd).tensor());
    FormValue dh = ebp.B - hm;
    r_th[i] = value_norm(
        interior_product(geo.n_up, interior_product(uv, hodge_star(dh, g, o))).tensor());

    FormValue sm = poynting(ebm.E, hm, fr, g, o);
    FormValue sp = poynting(ebp.E, ebp.B, fr, g, o);
    double sn = 0.0;
    for (std::size_t a = 0; a < dim; ++a) sn += geo.n_up(a) * (sp(a) - sm(a));
    r_s[i] = std::fabs(sn);
  });
  JumpReport rep;
  rep.push(make_entry("velocity_normal", std::move(r_vel)));
  rep.push(make_entry("stress_balance", std::move(r_stress)));
  rep.push(make_entry("tangential_e", std::move(r_te)));
  rep.push(make_entry("normal_b", std::move(r_nb)));
  rep.push(make_entry("normal_d", std::move(r_nd)));
  rep.push(make_entry("tangential_h", std::move(r_th)));
  rep.push(make_entry("poynting_normal", std::move(r_s)));
  return rep;
}

JumpReport obrien_synge(const TwoSidedSolution& sol, int side) {
  double normal_sign = check_side(side);
  validate_solution(sol);
  LevelSet ls = bind_level_set(sol.iface.phi, sol.iface.dim);
  TensorField ein_m = einstein_tensor(sol.g_minus);
  TensorField ein_p = einstein_tensor(sol.g_plus);
  std::size_t ns = sol.iface.samples.size();
  std::size_t dim = sol.iface.dim;
  std::vector<double> rr(ns);
  for_each_sample(ns, [&](std::size_t i) {
    const std::vector<double>& x = sol.iface.samples[i];
    std::vector<double> grad = gradient_at(ls, x);
    SideContext cm = side_context(sol.g_minus, x, -1, grad);
    SideContext cp = side_context(sol.g_plus, x, +1, grad);
    SurfacePoint geo = geometry_from(ls, cm, nullptr, x, normal_sign, false, true);
    TensorValue dein = stencil_value(ein_p, cp.st) - stencil_value(ein_m, cm.st);
    double s = 0.0;
    for (std::size_t ti = 0; ti + 1 < dim; ++ti) {
      double c = 0.0;
      for (std::size_t mu = 0; mu < dim; ++mu)
        for (std::size_t nu = 0; nu < dim; ++nu)
          c += geo.tangents[ti](mu) * dein(mu, nu) * geo.n_up(nu);
      s += c * c;
    }
    rr[i] = std::sqrt(s);
  });
  JumpReport rep;
  rep.push(make_entry("obrien_synge", std::move(rr)));
  return rep;
}

JumpReport junction_report(const TwoSidedSolution& sol, int side) {
  JumpReport rep;
  for (JumpEntry& e : preliminary_jumps(sol, side).entries) rep.push(std::move(e));
  for (JumpEntry& e : israel_darmois(sol, side).entries) rep.push(std::move(e));
  for (JumpEntry& e : em_jumps(sol, side).entries) rep.push(std::move(e));
  for (JumpEntry& e : obrien_synge(sol, side).entries) rep.push(std::move(e));
  return rep;
}

TensorField einstein_residual(const MetricField& m, const TensorField& sem, double chi) {
  TensorField ein = einstein_tensor(m);
  if (sem.empty()) return ein;
  if (!grids_equal(sem.grid(), m.grid()) ||
      sem.slots() != std::vector<Slot>{Slot::Up, Slot::Down})
    throw std::invalid_argument("stress tensor field has wrong shape");
  TensorField out = ein;
  parallel_for(m.grid().num_points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      MetricValue g = m.value(p);
      out.set_value(p, ein.value(p) - chi * lower_index(sem.value(p), 0, g));
    }
  });
  return out;
}

}  // namespace relcont
