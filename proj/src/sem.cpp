#include "relcont/sem.hpp"

#include <cmath>
#include <stdexcept>

namespace relcont {

namespace {

double metric_dot(const TensorValue& a, const TensorValue& b, const MetricValue& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.dim; ++i)
    for (std::size_t j = 0; j < g.dim; ++j) acc += g.g(i, j) * a(i) * b(j);
  return acc;
}

// t_el with the first index raised: -2 W^{lam mu} c_{lam nu}
TensorValue elastic_term(const TensorValue& w, const TensorValue& c) {
  std::size_t dim = c.dim();
  TensorValue t(dim, {Slot::Up, Slot::Down});
  for (std::size_t mu = 0; mu < dim; ++mu)
    for (std::size_t nu = 0; nu < dim; ++nu) {
      double acc = 0.0;
      for (std::size_t lam = 0; lam < dim; ++lam) acc += w(lam, mu) * c(lam, nu);
      t(mu, nu) = -2.0 * acc;
    }
  return t;
}

void validate_material(const MaterialState& ms) {
  std::size_t dim = ms.g.dim;
  if (dim < 3) throw std::invalid_argument("material state needs dim >= 3");
  if (!(ms.varrho > 0.0)) throw std::invalid_argument("varrho must be positive");
  if (ms.A.dim() != dim || ms.A.degree() != 1)
    throw std::invalid_argument("A must be a 1-form");
  if (ms.F.dim() != dim || ms.F.degree() != 2)
    throw std::invalid_argument("F must be a 2-form");
}

}  // namespace

// the recurring observer-split bracket, fed one energy part at a time:
//   (eps - dE.E)(1/c^2) u (x) u_flat + (1/c)(u (x) S + S# (x) u_flat)
//   + dE (x) E - B# (x)tr (dB)_flat + (rho drho + s ds + dB:B - eps) P
//   - t_el
TensorValue sem_eb_raw(const ConstitutiveEval& ev, const MatterState& st,
                       Orientation o) {
  const MetricValue& g = st.g;
  const ObserverFrame& fr = st.frame;
  double c = fr.c;
  TensorValue ub = lower_index(fr.u, 0, g);

  double uu_coef = ev.eps - contract_full(ev.deps_dE, st.E);
  TensorValue T = tensor_product(fr.u, ub);
  T *= uu_coef / (c * c);

  FormValue hb = flat(ev.deps_dB, g);
  FormValue S = poynting(st.E, hb, fr, g, o);
  T += (1.0 / c) * (tensor_product(fr.u, S.tensor()) +
                    tensor_product(sharp(S, g), ub));

  T += tensor_product(ev.deps_dE, st.E.tensor());
  if (st.B.degree() >= 1) T -= trace_tensor_product(sharp(st.B, g), hb);

  double pcoef = st.rho * ev.deps_drho + st.s * ev.deps_ds +
                 contract_full(ev.deps_dB, st.B) - ev.eps;
  T += pcoef * projection_tensor(fr, g).P;

  if (ev.deps_dc && st.c_tensor) T -= elastic_term(*ev.deps_dc, *st.c_tensor);
  return T;
}

SEMTensor sem_eb(const ModelSpec& model, const MatterState& state, Orientation o) {
  ConstitutiveSplit split = evaluate_split(model, state);
  return {sem_eb_raw(split.total, state, o), "eb_form"};
}

SEMTensor sem_faraday(const ModelSpec& model, double rho, double s,
                      const ObserverFrame& frame, const FormValue& F,
                      const std::optional<TensorValue>& c_tensor,
                      const MetricValue& g, Orientation o) {
  FaradayEval fe = faraday_eval(model, rho, s, frame, F, c_tensor, g, o);
  double c = frame.c;
  TensorValue ub = lower_index(frame.u, 0, g);
  double edotu = 0.0;
  for (std::size_t lam = 0; lam < g.dim; ++lam)
    edotu += fe.de_du(lam) * frame.u(lam);

  TensorValue T = tensor_product(frame.u, ub);
  T *= (fe.e - edotu) / (c * c);
  T -= tensor_product(frame.u, fe.de_du.tensor());
  T += trace_tensor_product(fe.de_dF, F);
  T += (rho * fe.de_drho + s * fe.de_ds - fe.e) * projection_tensor(frame, g).P;
  if (fe.de_dc && c_tensor) T -= elastic_term(*fe.de_dc, *c_tensor);
  return {T, "faraday_form"};
}

MatterState material_to_proper(const MaterialState& ms) {
  validate_material(ms);
  MatterState st;
  st.g = ms.g;
  st.frame = normalize_velocity(ms.w, ms.g, ms.c);
  double sqw = std::sqrt(-metric_dot(ms.w, ms.w, ms.g));
  st.rho = sqw * ms.varrho / ms.c;
  st.s = sqw * ms.varsigma / ms.c;
  EMSplit eb = eb_decompose(ms.F, st.frame, ms.g, ms.o);
  st.E = eb.E;
  st.B = eb.B;
  st.c_tensor = ms.c_tensor;
  return st;
}

double material_lagrangian(const ModelSpec& model, const MaterialState& ms) {
  MatterState st = material_to_proper(ms);
  double eps = evaluate_split_raw(model, st.rho, st.s, st.E, st.B, st.c_tensor,
                                  ms.g)
                   .total.eps;
  double aw = interior_product(ms.w, ms.A)[0];
  return -eps - ms.q * ms.varrho * aw;
}

SEMTensor sem_material(const ModelSpec& model, const MaterialState& ms) {
  MatterState st = material_to_proper(ms);
  const MetricValue& g = ms.g;
  std::size_t dim = g.dim;
  double c = ms.c;
  double sqw = std::sqrt(-metric_dot(ms.w, ms.w, g));
  FaradayEval fe =
      faraday_eval(model, st.rho, st.s, st.frame, ms.F, ms.c_tensor, g, ms.o);
  double aw = interior_product(ms.w, ms.A)[0];

  double lhat = -fe.e - ms.q * ms.varrho * aw;
  double dl_dvarrho = -(sqw / c) * fe.de_drho - ms.q * aw;
  double dl_dvarsigma = -(sqw / c) * fe.de_ds;

  TensorValue ub = lower_index(st.frame.u, 0, g);
  TensorValue P = projection_tensor(st.frame, g).P;
  FormValue dl_dw(dim, 1);
  for (std::size_t lam = 0; lam < dim; ++lam) {
    double dup = 0.0;
    for (std::size_t mu = 0; mu < dim; ++mu) dup += fe.de_du(mu) * P(mu, lam);
    dl_dw.raw()[lam] = (ub(lam) / (c * sqw)) *
                           (st.rho * fe.de_drho + st.s * fe.de_ds) -
                       (c / sqw) * dup - ms.q * ms.varrho * ms.A(lam);
  }

  TensorValue T = delta_tensor(dim);
  T *= lhat - ms.varrho * dl_dvarrho - ms.varsigma * dl_dvarsigma;
  T += tensor_product(ms.w, dl_dw.tensor());
  // -dl_dA (x) A with dl_dA = -q varrho w
  T += ms.q * ms.varrho * tensor_product(ms.w, ms.A.tensor());
  // -dl_dF (x)tr F with dl_dF = -de_dF
  T += trace_tensor_product(fe.de_dF, ms.F);
  if (fe.de_dc && ms.c_tensor) T -= elastic_term(*fe.de_dc, *ms.c_tensor);
  return {T, "phi_form"};
}

SEMTensor sem_material_fd(const ModelSpec& model, const MaterialState& ms,
                          double step) {
  validate_material(ms);
  std::size_t dim = ms.g.dim;
  double h = step;
  auto lof = [&](const MaterialState& m) { return material_lagrangian(model, m); };
  double lhat = lof(ms);

  MaterialState up = ms, dn = ms;
  up.varrho += h;
  dn.varrho -= h;
  double dl_dvarrho = (lof(up) - lof(dn)) / (2 * h);
  up = ms;
  dn = ms;
  up.varsigma += h;
  dn.varsigma -= h;
  double dl_dvarsigma = (lof(up) - lof(dn)) / (2 * h);

  FormValue dl_dw(dim, 1);
  for (std::size_t lam = 0; lam < dim; ++lam) {
    up = ms;
    dn = ms;
    up.w(lam) += h;
    dn.w(lam) -= h;
    dl_dw.raw()[lam] = (lof(up) - lof(dn)) / (2 * h);
  }

  TensorValue dl_dA(dim, {Slot::Up});
  for (std::size_t lam = 0; lam < dim; ++lam) {
    FormValue d = basis_form(dim, {lam});
    up = ms;
    dn = ms;
    up.A += d * h;
    dn.A -= d * h;
    dl_dA(lam) = (lof(up) - lof(dn)) / (2 * h);
  }

  TensorValue dl_dF(dim, {Slot::Up, Slot::Up});
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b) {
      FormValue d = basis_form(dim, {a, b});
      up = ms;
      dn = ms;
      up.F += d * h;
      dn.F -= d * h;
      dl_dF(a, b) = (lof(up) - lof(dn)) / (2 * h);
      dl_dF(b, a) = -dl_dF(a, b);
    }

  TensorValue T = delta_tensor(dim);
  T *= lhat - ms.varrho * dl_dvarrho - ms.varsigma * dl_dvarsigma;
  T += tensor_product(ms.w, dl_dw.tensor());
  T -= tensor_product(dl_dA, ms.A.tensor());
  T -= trace_tensor_product(dl_dF, ms.F);
  if (ms.c_tensor) {
    MatterState st = material_to_proper(ms);
    ConstitutiveSplit split = evaluate_split_raw(model, st.rho, st.s, st.E,
                                                 st.B, st.c_tensor, ms.g);
    if (split.total.deps_dc)
      T -= elastic_term(*split.total.deps_dc, *ms.c_tensor);
  }
  return {T, "phi_form"};
}

SEMSplitTensors sem_split_ours(const ModelSpec& model, const MatterState& state,
                               Orientation o) {
  ConstitutiveSplit split = evaluate_split(model, state);
  SEMSplitTensors out;
  out.matter = sem_eb_raw(split.matter, state, o);
  out.maxwell = sem_eb_raw(split.maxwell, state, o);
  return out;
}

SEMSplitTensors sem_split_erma(const ModelSpec& model, const MatterState& state,
                               Orientation o) {
  ConstitutiveSplit split = evaluate_split(model, state);
  const MetricValue& g = state.g;
  const ObserverFrame& fr = state.frame;
  double c = fr.c;
  TensorValue ub = lower_index(fr.u, 0, g);
  TensorValue P = projection_tensor(fr, g).P;

  // matter: rest energy and fluid pressure only
  double m_uu = split.matter.eps - contract_full(split.matter.deps_dE, state.E);
  TensorValue mt = tensor_product(fr.u, ub);
  mt *= m_uu / (c * c);
  double m_p = state.rho * split.matter.deps_drho +
               state.s * split.matter.deps_ds - split.matter.eps;
  mt += m_p * P;
  if (split.matter.deps_dc && state.c_tensor)
    mt -= elastic_term(*split.matter.deps_dc, *state.c_tensor);

  // field block: every electromagnetic term, with the mixed couplings of the
  // full energy in the flux and stress groups
  double f_uu = split.maxwell.eps - contract_full(split.maxwell.deps_dE, state.E);
  TensorValue ft = tensor_product(fr.u, ub);
  ft *= f_uu / (c * c);
  FormValue hb = flat(split.total.deps_dB, g);
  FormValue S = poynting(state.E, hb, fr, g, o);
  ft += (1.0 / c) * (tensor_product(fr.u, S.tensor()) +
                     tensor_product(sharp(S, g), ub));
  ft += tensor_product(split.total.deps_dE, state.E.tensor());
  if (state.B.degree() >= 1)
    ft -= trace_tensor_product(sharp(state.B, g), hb);
  double f_p = contract_full(split.total.deps_dB, state.B) - split.maxwell.eps;
  ft += f_p * P;

  return {mt, ft};
}

}  // namespace relcont
