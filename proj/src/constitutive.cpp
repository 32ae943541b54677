#include "relcont/constitutive.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace relcont {

namespace {

double factorial(std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 2; i <= k; ++i) r *= double(i);
  return r;
}

double max_abs(const TensorValue& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::fabs(t[i]) > m) m = std::fabs(t[i]);
  return m;
}

double metric_dot(const TensorValue& a, const TensorValue& b, const MetricValue& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.dim; ++i)
    for (std::size_t j = 0; j < g.dim; ++j) acc += g.g(i, j) * a(i) * b(j);
  return acc;
}

void check_frame(const ObserverFrame& frame, const MetricValue& g) {
  if (frame.u.rank() != 1 || frame.u.slots()[0] != Slot::Up || frame.u.dim() != g.dim)
    throw std::invalid_argument("frame velocity must be a vector");
  if (!(frame.c > 0.0)) throw std::invalid_argument("frame c must be positive");
  double uu = metric_dot(frame.u, frame.u, g);
  if (uu >= 0.0) throw std::domain_error("frame velocity is not timelike");
  if (std::fabs(uu + frame.c * frame.c) > 1e-8 * frame.c * frame.c)
    throw std::invalid_argument("frame velocity is not normalized");
}

void check_transverse(const FormValue& a, const ObserverFrame& frame,
                      const char* what) {
  if (a.degree() == 0) return;
  FormValue ia = interior_product(frame.u, a);
  double tol = 1e-10 * (1.0 + max_abs(a.tensor()) * max_abs(frame.u));
  if (max_abs(ia.tensor()) > tol)
    throw std::invalid_argument(std::string(what) + " is not transverse to u");
}

// susceptibilities and their (rho, s) partials at the given state
struct ChiValues {
  double e = 0.0, b = 0.0;
  double e_rho = 0.0, e_s = 0.0, b_rho = 0.0, b_s = 0.0;
};

ChiValues chi_at(const ModelSpec& model, double rho, double s) {
  ChiValues v;
  if (!model.chi_variable) {
    v.e = model.chi_e;
    v.b = model.chi_b;
  } else {
    std::map<std::string, double> env = {{"rho", rho}, {"s", s}};
    v.e = model.chi_e_expr.eval(env);
    v.b = model.chi_b_expr.eval(env);
    v.e_rho = model.chi_e_rho.eval(env);
    v.e_s = model.chi_e_s.eval(env);
    v.b_rho = model.chi_b_rho.eval(env);
    v.b_s = model.chi_b_s.eval(env);
  }
  if (!(1.0 - v.b > 0.0))
    throw std::domain_error("chi_b out of validity range: 1 - chi_b must be positive");
  return v;
}

ConstitutiveEval empty_eval(std::size_t dim, bool with_c) {
  ConstitutiveEval ev;
  ev.deps_dE = TensorValue(dim, {Slot::Up});
  ev.deps_dB = TensorValue(dim, std::vector<Slot>(dim - 3, Slot::Up));
  if (with_c) ev.deps_dc = TensorValue(dim, {Slot::Up, Slot::Up});
  return ev;
}

ConstitutiveEval add_evals(const ConstitutiveEval& a, const ConstitutiveEval& b) {
  ConstitutiveEval out = a;
  out.eps += b.eps;
  out.deps_drho += b.deps_drho;
  out.deps_ds += b.deps_ds;
  out.deps_dE += b.deps_dE;
  out.deps_dB += b.deps_dB;
  if (out.deps_dc) *out.deps_dc += *b.deps_dc;
  return out;
}

ConstitutiveEval maxwell_part(const FormValue& E, const FormValue& B,
                              const MetricValue& g, bool with_c) {
  ConstitutiveEval ev = empty_eval(g.dim, with_c);
  ev.eps = -0.5 * form_inner(E, E, g) + 0.5 * form_inner(B, B, g);
  ev.deps_dE = -sharp(E, g);
  ev.deps_dB = sharp(B, g);
  return ev;
}

ConstitutiveEval matter_part(const ModelSpec& model, double rho, double s,
                             const FormValue& E, const FormValue& B,
                             const std::optional<TensorValue>& c_tensor,
                             const MetricValue& g) {
  std::size_t dim = g.dim;
  bool with_c = c_tensor.has_value();
  ConstitutiveEval ev = empty_eval(dim, with_c);
  std::map<std::string, double> env = {{"rho", rho}, {"s", s}};

  if (model.kind == "maxwell") return ev;

  if (model.kind == "euler_maxwell" || model.kind == "linear" ||
      model.kind == "elastic") {
    ev.eps = model.eps0.eval(env);
    ev.deps_drho = model.eps0_rho.eval(env);
    ev.deps_ds = model.eps0_s.eval(env);
    if (model.kind != "euler_maxwell") {
      ChiValues chi = chi_at(model, rho, s);
      double ee = form_inner(E, E, g), bb = form_inner(B, B, g);
      ev.eps += -0.5 * chi.e * ee - 0.5 * chi.b * bb;
      ev.deps_drho += -0.5 * chi.e_rho * ee - 0.5 * chi.b_rho * bb;
      ev.deps_ds += -0.5 * chi.e_s * ee - 0.5 * chi.b_s * bb;
      ev.deps_dE += -chi.e * sharp(E, g);
      ev.deps_dB += -chi.b * sharp(B, g);
    }
    if (model.kind == "elastic") {
      if (!c_tensor)
        throw std::invalid_argument("elastic model requires a Cauchy tensor");
      const TensorValue& c = *c_tensor;
      TensorValue craised = raise_all(c, g);
      double tr = 0.0, c2 = 0.0;
      for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
          tr += g.ginv(a, b) * c(a, b);
          c2 += c(a, b) * craised(a, b);
        }
      ev.eps += 0.5 * model.lambda_e * tr * tr + 0.5 * model.mu_e * c2;
      for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
          (*ev.deps_dc)(a, b) +=
              model.lambda_e * tr * g.ginv(a, b) + model.mu_e * craised(a, b);
    }
    return ev;
  }

  if (model.kind == "nonlinear_invariants") {
    bool b_is_one_form = B.degree() == 1;
    if (!b_is_one_form && model.f.variables().count("I3"))
      throw std::invalid_argument("I3 needs a one-form B (four spacetime dimensions)");
    env["I1"] = form_inner(E, E, g);
    env["I2"] = form_inner(B, B, g);
    env["I3"] = b_is_one_form ? form_inner(E, B, g) : 0.0;
    ev.eps = model.f.eval(env);
    ev.deps_drho = model.f_rho.eval(env);
    ev.deps_ds = model.f_s.eval(env);
    double f1 = model.f_i1.eval(env);
    double f2 = model.f_i2.eval(env);
    double f3 = b_is_one_form ? model.f_i3.eval(env) : 0.0;
    ev.deps_dE = 2.0 * f1 * sharp(E, g);
    ev.deps_dB = 2.0 * f2 * sharp(B, g);
    if (b_is_one_form) {
      ev.deps_dE += f3 * sharp(B, g);
      ev.deps_dB += f3 * sharp(E, g);
    }
    return ev;
  }

  if (model.kind == "nonlinear_ed")
    throw std::invalid_argument("nonlinear_ed models evaluate through nonlinear_ed_eval");
  throw std::invalid_argument("unknown model kind '" + model.kind + "'");
}

Expression checked(const Expression& e, std::set<std::string> allowed) {
  e.check_variables(allowed);
  return e;
}

}  // namespace

ModelSpec maxwell_model() {
  ModelSpec m;
  m.kind = "maxwell";
  return m;
}

ModelSpec euler_maxwell_model(const Expression& eps0) {
  ModelSpec m;
  m.kind = "euler_maxwell";
  m.eps0 = checked(eps0, {"rho", "s"});
  m.eps0_rho = m.eps0.derivative("rho");
  m.eps0_s = m.eps0.derivative("s");
  return m;
}

ModelSpec linear_model(const Expression& eps0, double chi_e, double chi_b) {
  if (!(chi_b < 1.0))
    throw std::invalid_argument("chi_b out of validity range: need chi_b < 1");
  ModelSpec m = euler_maxwell_model(eps0);
  m.kind = "linear";
  m.chi_e = chi_e;
  m.chi_b = chi_b;
  return m;
}

ModelSpec linear_variable_model(const Expression& eps0, const Expression& chi_e,
                                const Expression& chi_b) {
  ModelSpec m = euler_maxwell_model(eps0);
  m.kind = "linear";
  m.chi_variable = true;
  m.chi_e_expr = checked(chi_e, {"rho", "s"});
  m.chi_b_expr = checked(chi_b, {"rho", "s"});
  m.chi_e_rho = m.chi_e_expr.derivative("rho");
  m.chi_e_s = m.chi_e_expr.derivative("s");
  m.chi_b_rho = m.chi_b_expr.derivative("rho");
  m.chi_b_s = m.chi_b_expr.derivative("s");
  return m;
}

ModelSpec nonlinear_invariants_model(const Expression& f) {
  ModelSpec m;
  m.kind = "nonlinear_invariants";
  m.f = checked(f, {"rho", "s", "I1", "I2", "I3"});
  m.f_rho = m.f.derivative("rho");
  m.f_s = m.f.derivative("s");
  m.f_i1 = m.f.derivative("I1");
  m.f_i2 = m.f.derivative("I2");
  m.f_i3 = m.f.derivative("I3");
  return m;
}

ModelSpec elastic_model(const Expression& eps0, double lambda_e, double mu_e,
                        double chi_e, double chi_b) {
  ModelSpec m = linear_model(eps0, chi_e, chi_b);
  m.kind = "elastic";
  m.lambda_e = lambda_e;
  m.mu_e = mu_e;
  return m;
}

ModelSpec nonlinear_ed_model(const Expression& eps_nl) {
  ModelSpec m;
  m.kind = "nonlinear_ed";
  m.eps_nl = checked(eps_nl, {"alpha", "beta"});
  m.eps_nl_a = m.eps_nl.derivative("alpha");
  m.eps_nl_b = m.eps_nl.derivative("beta");
  return m;
}

void validate_state(const MatterState& state) {
  std::size_t dim = state.g.dim;
  if (dim < 3) throw std::invalid_argument("state needs dim >= 3");
  check_frame(state.frame, state.g);
  if (!(state.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (state.E.dim() != dim || state.E.degree() != 1)
    throw std::invalid_argument("E must be a 1-form");
  if (state.B.dim() != dim || state.B.degree() != dim - 3)
    throw std::invalid_argument("B must be a (dim-3)-form");
  check_transverse(state.E, state.frame, "E");
  check_transverse(state.B, state.frame, "B");
  if (state.c_tensor) {
    const TensorValue& c = *state.c_tensor;
    if (c.dim() != dim || c.rank() != 2 || c.slots()[0] != Slot::Down ||
        c.slots()[1] != Slot::Down)
      throw std::invalid_argument("c_tensor must be a (0,2) tensor");
    double scale = 1.0 + max_abs(c);
    double cu = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < dim; ++b) {
        acc += c(a, b) * state.frame.u(b);
        if (std::fabs(c(a, b) - c(b, a)) > 1e-10 * scale)
          throw std::invalid_argument("c_tensor must be symmetric");
      }
      cu = std::max(cu, std::fabs(acc));
    }
    if (cu > 1e-10 * scale * (1.0 + max_abs(state.frame.u)))
      throw std::invalid_argument("c_tensor is not transverse to u");
  }
}

ConstitutiveSplit evaluate_split(const ModelSpec& model, const MatterState& state) {
  validate_state(state);
  return evaluate_split_raw(model, state.rho, state.s, state.E, state.B, state.c_tensor,
                   state.g);
}

ConstitutiveEval evaluate(const ModelSpec& model, const MatterState& state) {
  return evaluate_split(model, state).total;
}

ConstitutiveSplit evaluate_split_raw(const ModelSpec& model, double rho, double s,
                                     const FormValue& E, const FormValue& B,
                                     const std::optional<TensorValue>& c_tensor,
                                     const MetricValue& g) {
  ConstitutiveSplit out;
  out.matter = matter_part(model, rho, s, E, B, c_tensor, g);
  out.maxwell = maxwell_part(E, B, g, c_tensor.has_value());
  out.total = add_evals(out.matter, out.maxwell);
  return out;
}

DerivedFields derived_fields(const ConstitutiveSplit& split, const MatterState& state) {
  DerivedFields out;
  out.D = -flat(split.total.deps_dE, state.g);
  out.H = flat(split.total.deps_dB, state.g);
  out.P = -flat(split.matter.deps_dE, state.g);
  out.M = -flat(split.matter.deps_dB, state.g);
  return out;
}

PressureEnergy pressure_and_energy(const ConstitutiveEval& eval,
                                   const MatterState& state) {
  PressureEnergy out;
  out.eps_tot = eval.eps - contract_full(eval.deps_dE, state.E);
  out.p = state.rho * eval.deps_drho + state.s * eval.deps_ds +
          contract_full(eval.deps_dB, state.B) - eval.eps;
  return out;
}

TensorValue elastic_stress(const ConstitutiveEval& eval, const MatterState& state) {
  if (!eval.deps_dc || !state.c_tensor)
    throw std::invalid_argument("missing Cauchy tensor");
  std::size_t dim = state.g.dim;
  const TensorValue& w = *eval.deps_dc;
  const TensorValue& c = *state.c_tensor;
  TensorValue t(dim, {Slot::Up, Slot::Down});
  for (std::size_t mu = 0; mu < dim; ++mu)
    for (std::size_t nu = 0; nu < dim; ++nu) {
      double acc = 0.0;
      for (std::size_t lam = 0; lam < dim; ++lam) acc += w(lam, mu) * c(lam, nu);
      t(mu, nu) = -2.0 * acc;
    }
  return t;
}

TensorValue elastic_stress_projected(const ConstitutiveEval& eval,
                                     const MatterState& state) {
  if (!eval.deps_dc || !state.c_tensor)
    throw std::invalid_argument("missing Cauchy tensor");
  std::size_t dim = state.g.dim;
  const TensorValue& w = *eval.deps_dc;
  const TensorValue& c = *state.c_tensor;
  TensorValue pr = projection_tensor(state.frame, state.g).P;
  TensorValue t(dim, {Slot::Up, Slot::Down});
  for (std::size_t mu = 0; mu < dim; ++mu)
    for (std::size_t nu = 0; nu < dim; ++nu) {
      double acc = 0.0;
      for (std::size_t lam = 0; lam < dim; ++lam)
        for (std::size_t al = 0; al < dim; ++al)
          acc += pr(mu, al) * w(lam, al) * c(lam, nu);
      t(mu, nu) = -2.0 * acc;
    }
  return t;
}

namespace {

struct FdRecorder {
  FdReport report;
  double rel_tol, abs_floor;
  void record(const std::string& name, double analytic, double fd) {
    double err = std::fabs(analytic - fd);
    double tol = abs_floor + rel_tol * std::max(std::fabs(analytic), std::fabs(fd));
    if (err > tol) {
      report.pass = false;
      report.failures.push_back({name, analytic, fd, err});
    }
    if (tol > 0.0) report.worst = std::max(report.worst, err / tol);
  }
};

// strictly increasing index tuples of length k
void increasing_tuples(std::size_t dim, std::size_t k,
                       const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                          std::size_t start) {
    if (pos == k) {
      fn(idx);
      return;
    }
    for (std::size_t a = start; a < dim; ++a) {
      idx[pos] = a;
      rec(pos + 1, a + 1);
    }
  };
  rec(0, 0);
}

FormValue basis_form_idx(std::size_t dim, const std::vector<std::size_t>& idx) {
  TensorValue t(dim, std::vector<Slot>(idx.size(), Slot::Down));
  if (idx.empty()) {
    t[0] = 1.0;
    return FormValue::from_tensor(t);
  }
  t.at(idx.data()) = 1.0;
  return FormValue::from_tensor(t) * factorial(idx.size());
}

}  // namespace

FdReport fd_check_partials(const ModelSpec& model, const MatterState& state,
                           double step, double rel_tol, double abs_floor) {
  FdRecorder rec{{}, rel_tol, abs_floor};
  std::size_t dim = state.g.dim;
  auto eps_of = [&](double rho, double s, const FormValue& E, const FormValue& B,
                    const std::optional<TensorValue>& c) {
    return evaluate_split_raw(model, rho, s, E, B, c, state.g).total.eps;
  };
  ConstitutiveEval base =
      evaluate_split_raw(model, state.rho, state.s, state.E, state.B, state.c_tensor, state.g)
          .total;

  double h = step;
  rec.record("rho",
             base.deps_drho,
             (eps_of(state.rho + h, state.s, state.E, state.B, state.c_tensor) -
              eps_of(state.rho - h, state.s, state.E, state.B, state.c_tensor)) /
                 (2 * h));
  rec.record("s",
             base.deps_ds,
             (eps_of(state.rho, state.s + h, state.E, state.B, state.c_tensor) -
              eps_of(state.rho, state.s - h, state.E, state.B, state.c_tensor)) /
                 (2 * h));
  for (std::size_t a = 0; a < dim; ++a) {
    FormValue da = basis_form_idx(dim, {a});
    double fd = (eps_of(state.rho, state.s, state.E + h * da, state.B, state.c_tensor) -
                 eps_of(state.rho, state.s, state.E - h * da, state.B, state.c_tensor)) /
                (2 * h);
    rec.record("E_" + std::to_string(a), base.deps_dE(a), fd);
  }
  increasing_tuples(dim, dim - 3, [&](const std::vector<std::size_t>& idx) {
    FormValue db = basis_form_idx(dim, idx);
    double fd = (eps_of(state.rho, state.s, state.E, state.B + h * db, state.c_tensor) -
                 eps_of(state.rho, state.s, state.E, state.B - h * db, state.c_tensor)) /
                (2 * h);
    std::string name = "B_";
    for (std::size_t a : idx) name += std::to_string(a);
    rec.record(name, idx.empty() ? base.deps_dB[0] : base.deps_dB.at(idx.data()), fd);
  });
  if (state.c_tensor && base.deps_dc) {
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = a; b < dim; ++b) {
        TensorValue delta(dim, {Slot::Down, Slot::Down});
        delta(a, b) += 1.0;
        delta(b, a) += 1.0;
        if (a == b) delta(a, a) = 1.0;
        std::optional<TensorValue> up = *state.c_tensor, dn = *state.c_tensor;
        *up += h * delta;
        *dn -= h * delta;
        double fd = (eps_of(state.rho, state.s, state.E, state.B, up) -
                     eps_of(state.rho, state.s, state.E, state.B, dn)) /
                    (2 * h);
        double analytic = (a == b ? 1.0 : 2.0) * (*base.deps_dc)(a, b);
        rec.record("c_" + std::to_string(a) + std::to_string(b), analytic, fd);
      }
  }
  return rec.report;
}

namespace {

// raw electric/magnetic split without frame validation, for FD probes
void raw_split(const TensorValue& u, double c, const FormValue& F,
               const MetricValue& g, Orientation o, FormValue& E, FormValue& B,
               FormValue& SF) {
  SF = hodge_star(F, g, o);
  E = (-1.0 / c) * interior_product(u, F);
  B = (-1.0 / c) * interior_product(u, SF);
}

}  // namespace

FaradayEval faraday_eval(const ModelSpec& model, double rho, double s,
                         const ObserverFrame& frame, const FormValue& F,
                         const std::optional<TensorValue>& c_tensor,
                         const MetricValue& g, Orientation o) {
  if (F.dim() != g.dim || F.degree() != 2)
    throw std::invalid_argument("F must be a 2-form");
  check_frame(frame, g);
  std::size_t dim = g.dim;
  std::size_t k = dim - 3;
  double c = frame.c;
  FormValue E, B, SF;
  raw_split(frame.u, c, F, g, o, E, B, SF);
  ConstitutiveSplit split = evaluate_split_raw(model, rho, s, E, B, c_tensor, g);

  FaradayEval out;
  out.e = split.total.eps;
  out.de_drho = split.total.deps_drho;
  out.de_ds = split.total.deps_ds;
  out.de_dc = split.total.deps_dc;

  // chain rule through E = -(1/c) i_u F and B = -(1/c) i_u (*F)
  out.de_du = FormValue(dim, 1);
  std::size_t inner = ipow(dim, k);
  for (std::size_t lam = 0; lam < dim; ++lam) {
    double t1 = 0.0;
    for (std::size_t a = 0; a < dim; ++a) t1 += F(lam, a) * split.total.deps_dE(a);
    double t2 = 0.0;
    for (std::size_t t = 0; t < inner; ++t)
      t2 += split.total.deps_dB[t] * SF.tensor()[lam * inner + t];
    t2 /= factorial(k);
    out.de_du.raw()[lam] = (-1.0 / c) * (t1 + t2);
  }

  out.de_dF = (-1.0 / c) * wedge_multivector(frame.u, split.total.deps_dE) -
              (1.0 / c) *
                  multivector_star(wedge_multivector(frame.u, split.total.deps_dB),
                                   g, o);
  return out;
}

FdReport fd_check_faraday(const ModelSpec& model, double rho, double s,
                          const ObserverFrame& frame, const FormValue& F,
                          const std::optional<TensorValue>& c_tensor,
                          const MetricValue& g, Orientation o, double step,
                          double rel_tol, double abs_floor) {
  FdRecorder rec{{}, rel_tol, abs_floor};
  std::size_t dim = g.dim;
  double h = step;
  auto e_of = [&](const TensorValue& u, const FormValue& f2, double rho_, double s_,
                  const std::optional<TensorValue>& c_) {
    FormValue E, B, SF;
    raw_split(u, frame.c, f2, g, o, E, B, SF);
    return evaluate_split_raw(model, rho_, s_, E, B, c_, g).total.eps;
  };
  FaradayEval base = faraday_eval(model, rho, s, frame, F, c_tensor, g, o);

  rec.record("rho", base.de_drho,
             (e_of(frame.u, F, rho + h, s, c_tensor) -
              e_of(frame.u, F, rho - h, s, c_tensor)) /
                 (2 * h));
  rec.record("s", base.de_ds,
             (e_of(frame.u, F, rho, s + h, c_tensor) -
              e_of(frame.u, F, rho, s - h, c_tensor)) /
                 (2 * h));
  for (std::size_t lam = 0; lam < dim; ++lam) {
    TensorValue up = frame.u, dn = frame.u;
    up(lam) += h;
    dn(lam) -= h;
    double fd = (e_of(up, F, rho, s, c_tensor) - e_of(dn, F, rho, s, c_tensor)) /
                (2 * h);
    rec.record("u_" + std::to_string(lam), base.de_du(lam), fd);
  }
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b) {
      FormValue df = basis_form_idx(dim, {a, b});
      double fd = (e_of(frame.u, F + h * df, rho, s, c_tensor) -
                   e_of(frame.u, F - h * df, rho, s, c_tensor)) /
                  (2 * h);
      rec.record("F_" + std::to_string(a) + std::to_string(b), base.de_dF(a, b), fd);
    }
  if (c_tensor && base.de_dc) {
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = a; b < dim; ++b) {
        TensorValue delta(dim, {Slot::Down, Slot::Down});
        delta(a, b) += 1.0;
        delta(b, a) += 1.0;
        if (a == b) delta(a, a) = 1.0;
        std::optional<TensorValue> up = *c_tensor, dn = *c_tensor;
        *up += h * delta;
        *dn -= h * delta;
        double fd = (e_of(frame.u, F, rho, s, up) - e_of(frame.u, F, rho, s, dn)) /
                    (2 * h);
        double analytic = (a == b ? 1.0 : 2.0) * (*base.de_dc)(a, b);
        rec.record("c_" + std::to_string(a) + std::to_string(b), analytic, fd);
      }
  }
  return rec.report;
}

NonlinearEdResult nonlinear_ed_eval(const FormValue& F, const MetricValue& g,
                                    Orientation o, const ModelSpec& model) {
  if (model.kind != "nonlinear_ed")
    throw std::invalid_argument("model kind must be nonlinear_ed");
  if (g.dim != 4)
    throw std::invalid_argument("nonlinear electrodynamics needs four spacetime dimensions");
  if (F.dim() != 4 || F.degree() != 2)
    throw std::invalid_argument("F must be a 2-form");

  NonlinearEdResult out;
  out.alpha = 0.5 * form_inner(F, F, g);
  FormValue ff = wedge(F, F);
  FormValue mu = volume_form(g, o);
  out.beta = 0.5 * ff(0, 1, 2, 3) / mu(0, 1, 2, 3);

  std::map<std::string, double> env = {{"alpha", out.alpha}, {"beta", out.beta}};
  double e = model.eps_nl.eval(env);
  double da = model.eps_nl_a.eval(env);
  double db = model.eps_nl_b.eval(env);
  out.lagrangian = -e;
  out.sem = da * maxwell_sem(F, g, o) +
            (da * out.alpha + db * out.beta - e) * delta_tensor(4);
  return out;
}

}  // namespace relcont
