#include "relcont/em.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace relcont {

namespace {

double metric_dot(const TensorValue& a, const TensorValue& b, const MetricValue& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.dim; ++i)
    for (std::size_t j = 0; j < g.dim; ++j) s += g.g(i, j) * a[i] * b[j];
  return s;
}

double max_abs(const TensorValue& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t[i]));
  return m;
}

void check_vector(const TensorValue& v, const char* what) {
  if (v.rank() != 1 || v.slots()[0] != Slot::Up)
    throw std::invalid_argument(std::string(what) + " must be a contravariant vector");
}

void check_frame(const ObserverFrame& frame, const MetricValue& g) {
  check_vector(frame.u, "observer velocity");
  if (frame.u.dim() != g.dim) throw std::invalid_argument("frame dimension mismatch");
  if (!(frame.c > 0.0)) throw std::invalid_argument("c must be positive");
}

// i_u of a 0-form is identically zero, so scalars pass by construction
void check_transverse(const FormValue& a, const ObserverFrame& frame, const char* what) {
  if (a.degree() == 0) return;
  FormValue iu = interior_product(frame.u, a);
  double scale = 1.0 + max_abs(a.tensor()) * max_abs(frame.u);
  if (max_abs(iu.tensor()) > 1e-8 * scale)
    throw std::invalid_argument(std::string(what) + " is not transverse to u");
}

}  // namespace

ObserverFrame normalize_velocity(const TensorValue& w, const MetricValue& g, double c) {
  check_vector(w, "velocity");
  if (w.dim() != g.dim) throw std::invalid_argument("velocity dimension mismatch");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  double ww = metric_dot(w, w, g);
  if (!(ww < 0.0)) throw std::domain_error("velocity is not timelike");
  ObserverFrame f;
  f.u = w * (c / std::sqrt(-ww));
  f.c = c;
  return f;
}

Projection projection_tensor(const ObserverFrame& frame, const MetricValue& g) {
  check_frame(frame, g);
  std::size_t n = g.dim;
  double ic2 = 1.0 / (frame.c * frame.c);
  TensorValue ub = lower_index(frame.u, 0, g);
  Projection pr;
  pr.P = delta_tensor(n);
  pr.p = g.g;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      pr.P(i, j) += ic2 * frame.u[i] * ub[j];
      pr.p(i, j) += ic2 * ub[i] * ub[j];
    }
  return pr;
}

EMSplit eb_decompose(const FormValue& F, const ObserverFrame& frame, const MetricValue& g,
                     Orientation o) {
  check_frame(frame, g);
  if (F.degree() != 2) throw std::invalid_argument("field strength must be a 2-form");
  if (g.dim < 3) throw std::invalid_argument("observer split needs dimension >= 3");
  double ic = 1.0 / frame.c;
  EMSplit s;
  s.E = (-ic) * interior_product(frame.u, F);
  s.B = (-ic) * interior_product(frame.u, hodge_star(F, g, o));
  return s;
}

FormValue eb_reconstruct(const EMSplit& split, const ObserverFrame& frame, const MetricValue& g,
                         Orientation o) {
  check_frame(frame, g);
  if (split.E.degree() != 1 || split.B.degree() != g.dim - 3)
    throw std::invalid_argument("split degrees must be (1, dim-3)");
  check_transverse(split.E, frame, "electric part");
  check_transverse(split.B, frame, "magnetic part");
  double ic = 1.0 / frame.c;
  FormValue ub = flat(frame.u, g);
  return ic * wedge(ub, split.E) - ic * hodge_star(wedge(ub, split.B), g, o);
}

DHSplit dh_extract(const FormValue& theta, const ObserverFrame& frame, const MetricValue& g,
                   Orientation o) {
  check_frame(frame, g);
  if (theta.degree() != g.dim - 2)
    throw std::invalid_argument("lagrangian derivative must be a (dim-2)-form");
  if (g.dim < 3) throw std::invalid_argument("observer split needs dimension >= 3");
  double ic = 1.0 / frame.c;
  DHSplit s;
  s.D = (-ic) * interior_product(frame.u, hodge_star(theta, g, o));
  s.H = ic * interior_product(frame.u, theta);
  return s;
}

FormValue dh_assemble(const DHSplit& split, const ObserverFrame& frame, const MetricValue& g,
                      Orientation o) {
  check_frame(frame, g);
  if (split.D.degree() != 1 || split.H.degree() != g.dim - 3)
    throw std::invalid_argument("split degrees must be (1, dim-3)");
  check_transverse(split.D, frame, "displacement part");
  check_transverse(split.H, frame, "intensity part");
  double ic = 1.0 / frame.c;
  FormValue ub = flat(frame.u, g);
  return (-ic) * hodge_star(wedge(ub, split.D), g, o) - ic * wedge(ub, split.H);
}

FormValue poynting(const FormValue& E, const FormValue& X, const ObserverFrame& frame,
                   const MetricValue& g, Orientation o) {
  check_frame(frame, g);
  if (E.degree() != 1) throw std::invalid_argument("electric part must be a 1-form");
  if (X.degree() != g.dim - 3) throw std::invalid_argument("companion must be a (dim-3)-form");
  double sign = (g.dim % 2 == 0) ? -1.0 : 1.0;  // (-1)^(dim-1)
  FormValue s2 = interior_product(frame.u, hodge_star(X, g, o));
  FormValue s1 = interior_product(sharp(E, g), s2);
  return (sign / frame.c) * s1;
}

double maxwell_lagrangian(const FormValue& F, const MetricValue& g, Orientation) {
  if (F.degree() != 2) throw std::invalid_argument("field strength must be a 2-form");
  return -0.5 * form_inner(F, F, g);
}

TensorValue maxwell_sem(const FormValue& F, const MetricValue& g, Orientation) {
  if (F.degree() != 2) throw std::invalid_argument("field strength must be a 2-form");
  TensorValue t = delta_tensor(g.dim);
  t *= -0.5 * form_inner(F, F, g);
  t += trace_tensor_product(sharp(F, g), F);
  return t;
}

TensorValue maxwell_sem_eb(const FormValue& F, const ObserverFrame& frame, const MetricValue& g,
                           Orientation o) {
  EMSplit s = eb_decompose(F, frame, g, o);
  FormValue S = poynting(s.E, s.B, frame, g, o);
  Projection pr = projection_tensor(frame, g);
  std::size_t n = g.dim;
  double c = frame.c;
  double eng = 0.5 * (form_inner(s.E, s.E, g) + form_inner(s.B, s.B, g));
  TensorValue ub = lower_index(frame.u, 0, g);
  TensorValue es = sharp(s.E, g);
  TensorValue ss = sharp(S, g);
  // the magnetic block degenerates to zero when B is a scalar
  TensorValue bb(n, {Slot::Up, Slot::Down});
  if (s.B.degree() >= 1) bb = trace_tensor_product(sharp(s.B, g), s.B);
  TensorValue t(n, {Slot::Up, Slot::Down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      t(i, j) = eng / (c * c) * frame.u[i] * ub[j] + frame.u[i] * S.tensor()[j] / c +
                ss[i] * ub[j] / c - es[i] * s.E.tensor()[j] - bb(i, j) + eng * pr.P(i, j);
  return t;
}

TensorValue dlldf_multivector(const DHSplit& split, const ObserverFrame& frame,
                              const MetricValue& g, Orientation o) {
  check_frame(frame, g);
  if (split.D.degree() != 1 || split.H.degree() != g.dim - 3)
    throw std::invalid_argument("split degrees must be (1, dim-3)");
  double ic = 1.0 / frame.c;
  TensorValue ud = wedge_multivector(frame.u, sharp(split.D, g));
  TensorValue uh = wedge_multivector(frame.u, sharp(split.H, g));
  return (-ic) * ud + ic * multivector_star(uh, g, o);
}

TensorField normalize_velocity_field(const TensorField& w, const MetricField& g, double c) {
  TensorField out(w.grid(), {Slot::Up});
  for (std::size_t p = 0; p < w.num_points(); ++p) {
    TensorValue wp = w.value(p);
    MetricValue gp = g.value(p);
    double ww = metric_dot(wp, wp, gp);
    if (!(ww < 0.0)) {
      std::vector<double> x = grid_point(w.grid(), p);
      std::ostringstream msg;
      msg << "velocity is not timelike at point (";
      for (std::size_t a = 0; a < x.size(); ++a) msg << (a ? ", " : "") << x[a];
      msg << ")";
      throw std::domain_error(msg.str());
    }
    out.set_value(p, wp * (c / std::sqrt(-ww)));
  }
  return out;
}

TensorField maxwell_sem_field(const TensorField& F, const MetricField& g) {
  TensorField out(F.grid(), {Slot::Up, Slot::Down});
  parallel_for(F.num_points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      FormValue f;
      f.raw() = F.value(p);
      out.set_value(p, maxwell_sem(f, g.value(p)));
    }
  });
  return out;
}

EMSplitField eb_decompose_field(const TensorField& F, const TensorField& u, double c,
                                const MetricField& g) {
  std::size_t n = F.grid().dim;
  EMSplitField out;
  out.E = TensorField(F.grid(), {Slot::Down});
  out.B = TensorField(F.grid(), std::vector<Slot>(n - 3, Slot::Down));
  parallel_for(F.num_points(), [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      FormValue f;
      f.raw() = F.value(p);
      ObserverFrame frame{u.value(p), c};
      EMSplit s = eb_decompose(f, frame, g.value(p), g.orient);
      out.E.set_value(p, s.E.tensor());
      out.B.set_value(p, s.B.tensor());
    }
  });
  return out;
}

}  // namespace relcont
