#include "relcont/balance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "relcont/em.hpp"

namespace relcont {

namespace {

void check_fields(const FieldState& st, bool need_stencil) {
  const ChartGrid& grid = st.metric.grid();
  std::size_t dim = grid.dim;
  if (dim < 3) throw std::invalid_argument("field state needs dim >= 3");
  if (need_stencil) {
    for (std::size_t a = 0; a < dim; ++a) {
      if (grid.shape[a] < 5)
        throw std::invalid_argument("grid too small for second-order stencils");
    }
  }
  auto match = [&](const TensorField& f, std::size_t rank, const char* what) {
    if (f.num_points() != grid.num_points() || f.rank() != rank)
      throw std::invalid_argument(std::string(what) + " field has wrong shape");
  };
  match(st.u, 1, "velocity");
  match(st.rho, 0, "density");
  match(st.s, 0, "entropy");
  match(st.F, 2, "faraday");
  if (!st.c_tensor.empty()) match(st.c_tensor, 2, "cauchy");
  if (!(st.c > 0.0)) throw std::invalid_argument("c must be positive");
}

void check_normalized(const TensorValue& u, const MetricValue& g, double c) {
  double uu = 0.0;
  for (std::size_t m = 0; m < g.dim; ++m)
    for (std::size_t n = 0; n < g.dim; ++n) uu += g.g(m, n) * u[m] * u[n];
  if (std::fabs(uu + c * c) > 1e-6 * c * c)
    throw std::domain_error("velocity field is not normalized to g(u,u) = -c^2");
}

// all pointwise (derivative-free) ingredients of the balance system
struct Algebra {
  TensorField t_full;      // Up Down, full stress tensor
  TensorField t_ec;        // Up Down, field + elastic stress block
  TensorField t_c;         // Up Down, convective block
  TensorField s_eq;        // Down, c-scaled energy flux form
  TensorField energy_flux; // Up, eps_tot u + sharp(s_eq)
  TensorField qq;          // Up Down, sharp(s_eq) (x) u_flat + u (x) s_eq
  TensorField p;           // scalar
  TensorField eps_tot;     // scalar
  TensorField ub;          // Down
  TensorField proj;        // Up Down
  TensorField rho_u;       // Up
  TensorField s_u;         // Up
  TensorField g_form;      // Down Down, lowered field derivative of the energy
  TensorField u_omega;     // Up Down, u (x) omega_m
  TensorField dedf_m;      // Up Up, matter part of the same derivative
  TensorField rho_q_ub;    // Down
  TensorField qrho_iuf;    // Down
  TensorField qrho_iumu;   // Down x (dim-1)
};

Algebra eval_algebra(const ModelSpec& model, const FieldState& st) {
  const ChartGrid& grid = st.metric.grid();
  std::size_t dim = grid.dim;
  Orientation o = st.metric.orient;
  bool with_c = !st.c_tensor.empty();
  double c = st.c;

  std::vector<Slot> ud = {Slot::Up, Slot::Down};
  std::vector<Slot> top(dim - 1, Slot::Down);
  Algebra a;
  a.t_full = TensorField(grid, ud);
  a.t_ec = TensorField(grid, ud);
  a.t_c = TensorField(grid, ud);
  a.s_eq = TensorField(grid, {Slot::Down});
  a.energy_flux = TensorField(grid, {Slot::Up});
  a.qq = TensorField(grid, ud);
  a.p = TensorField(grid, {});
  a.eps_tot = TensorField(grid, {});
  a.ub = TensorField(grid, {Slot::Down});
  a.proj = TensorField(grid, ud);
  a.rho_u = TensorField(grid, {Slot::Up});
  a.s_u = TensorField(grid, {Slot::Up});
  a.g_form = TensorField(grid, {Slot::Down, Slot::Down});
  a.u_omega = TensorField(grid, ud);
  a.dedf_m = TensorField(grid, {Slot::Up, Slot::Up});
  a.rho_q_ub = TensorField(grid, {Slot::Down});
  a.qrho_iuf = TensorField(grid, {Slot::Down});
  a.qrho_iumu = TensorField(grid, top);

  for (std::size_t pnt = 0; pnt < grid.num_points(); ++pnt) {
    MetricValue g = st.metric.value(pnt);
    TensorValue uv = st.u.value(pnt);
    check_normalized(uv, g, c);
    ObserverFrame fr{uv, c};
    double rho = st.rho.value(pnt)[0];
    double s = st.s.value(pnt)[0];
    FormValue ff = FormValue::from_tensor(st.F.value(pnt));
    EMSplit eb = eb_decompose(ff, fr, g, o);
    std::optional<TensorValue> copt;
    if (with_c) copt = st.c_tensor.value(pnt);
    ConstitutiveSplit split = evaluate_split_raw(model, rho, s, eb.E, eb.B, copt, g);

    MatterState ms;
    ms.rho = rho;
    ms.s = s;
    ms.E = eb.E;
    ms.B = eb.B;
    ms.c_tensor = copt;
    ms.g = g;
    ms.frame = fr;

    a.t_full.set_value(pnt, sem_eb_raw(split.total, ms, o));

    PressureEnergy pe = pressure_and_energy(split.total, ms);
    TensorValue ubv = lower_index(uv, 0, g);
    Projection pr = projection_tensor(fr, g);

    FormValue hb = flat(split.total.deps_dB, g);
    FormValue seq = poynting(eb.E, hb, fr, g, o) * c;
    a.s_eq.set_value(pnt, seq.tensor());
    TensorValue seq_up = sharp(seq, g);
    a.energy_flux.set_value(pnt, uv * pe.eps_tot + seq_up);
    a.qq.set_value(pnt,
                   tensor_product(seq_up, ubv) + tensor_product(uv, seq.tensor()));

    a.p.set_value(pnt, scalar_value(dim, pe.p));
    a.eps_tot.set_value(pnt, scalar_value(dim, pe.eps_tot));
    a.ub.set_value(pnt, ubv);
    a.proj.set_value(pnt, pr.P);
    a.rho_u.set_value(pnt, uv * rho);
    a.s_u.set_value(pnt, uv * s);

    TensorValue tec =
        -1.0 * tensor_product(split.total.deps_dE, eb.E.tensor());
    if (eb.B.degree() >= 1)
      tec += trace_tensor_product(sharp(eb.B, g), hb);
    if (with_c && split.total.deps_dc) tec += elastic_stress(split.total, ms);
    a.t_ec.set_value(pnt, tec);

    double p_m = rho * split.matter.deps_drho + s * split.matter.deps_ds -
                 split.matter.eps;
    TensorValue tc = tensor_product(uv, ubv) * (split.matter.eps / (c * c)) +
                     pr.P * p_m;
    if (with_c && split.matter.deps_dc) tc -= elastic_stress(split.matter, ms);
    a.t_c.set_value(pnt, tc);

    FormValue pol = flat(split.matter.deps_dE, g) * -1.0;
    FormValue mag = flat(split.matter.deps_dB, g) * -1.0;
    FormValue om =
        (poynting(pol, eb.B, fr, g, o) + poynting(eb.E, mag, fr, g, o)) *
        (1.0 / c);
    a.u_omega.set_value(pnt, tensor_product(uv, om.tensor()));

    TensorValue dedf =
        wedge_multivector(uv, split.total.deps_dE) * (-1.0 / c) -
        multivector_star(wedge_multivector(uv, split.total.deps_dB), g, o) *
            (1.0 / c);
    a.g_form.set_value(pnt, lower_all(dedf, g));
    TensorValue dedfm =
        wedge_multivector(uv, split.matter.deps_dE) * (-1.0 / c) -
        multivector_star(wedge_multivector(uv, split.matter.deps_dB), g, o) *
            (1.0 / c);
    a.dedf_m.set_value(pnt, dedfm);

    double qrho = st.q * rho;
    a.rho_q_ub.set_value(pnt, ubv * qrho);
    a.qrho_iuf.set_value(pnt, interior_product(uv, ff).tensor() * qrho);
    a.qrho_iumu.set_value(
        pnt, interior_product(uv, volume_form(g, o)).tensor() * qrho);
  }
  return a;
}

}  // namespace

BalanceResiduals balance_residuals(const ModelSpec& model, const FieldState& st) {
  check_fields(st, true);
  Algebra a = eval_algebra(model, st);
  const ChartGrid& grid = st.metric.grid();
  std::size_t dim = grid.dim;
  double c2 = st.c * st.c;

  TensorField gamma = christoffel(st.metric);
  TensorField grad_u = covariant_derivative(st.u, gamma);
  TensorField div_flux = covariant_divergence(a.energy_flux, gamma, 0);
  TensorField div_u = covariant_divergence(st.u, gamma, 0);
  TensorField div_tec = covariant_divergence(a.t_ec, gamma, 0);
  TensorField div_qq = covariant_divergence(a.qq, gamma, 0);
  TensorField grad_p = partial_all(a.p);
  TensorField div_tfull = covariant_divergence(a.t_full, gamma, 0);

  BalanceResiduals out;
  out.energy = TensorField(grid, {});
  out.momentum = TensorField(grid, {Slot::Down});
  out.u_projection = TensorField(grid, {});
  out.p_projection = TensorField(grid, {Slot::Down});

  for (std::size_t pnt = 0; pnt < grid.num_points(); ++pnt) {
    MetricValue g = st.metric.value(pnt);
    TensorValue uv = st.u.value(pnt);
    TensorValue gu = grad_u.value(pnt);  // (nu, mu) = nabla_mu u^nu
    TensorValue tec = a.t_ec.value(pnt);
    TensorValue ubv = a.ub.value(pnt);
    TensorValue prv = a.proj.value(pnt);
    TensorValue seq = a.s_eq.value(pnt);
    double pval = a.p.value(pnt)[0];
    double etot = a.eps_tot.value(pnt)[0];

    TensorValue acc(dim, {Slot::Up});
    for (std::size_t nu = 0; nu < dim; ++nu) {
      double v = 0.0;
      for (std::size_t mu = 0; mu < dim; ++mu) v += uv[mu] * gu(nu, mu);
      acc(nu) = v;
    }
    double tgrad = 0.0;
    for (std::size_t mu = 0; mu < dim; ++mu)
      for (std::size_t nu = 0; nu < dim; ++nu) tgrad += tec(mu, nu) * gu(nu, mu);
    double sacc = 0.0;
    for (std::size_t nu = 0; nu < dim; ++nu) sacc += seq[nu] * acc(nu);

    double en = div_flux.value(pnt)[0] + sacc / c2 - tgrad +
                pval * div_u.value(pnt)[0];
    out.energy.set_value(pnt, scalar_value(dim, en));

    TensorValue accb = lower_index(acc, 0, g);
    TensorValue dqq = div_qq.value(pnt);
    TensorValue dtec = div_tec.value(pnt);
    TensorValue gp = grad_p.value(pnt);
    TensorValue mom(dim, {Slot::Down});
    for (std::size_t nu = 0; nu < dim; ++nu) {
      double pdq = 0.0, pgp = 0.0;
      for (std::size_t m = 0; m < dim; ++m) {
        pdq += dqq[m] * prv(m, nu);
        pgp += gp[m] * prv(m, nu);
      }
      mom(nu) = (etot + pval) / c2 * accb[nu] + pdq / c2 +
                ubv[nu] * tgrad / c2 - dtec[nu] + pgp;
    }
    out.momentum.set_value(pnt, mom);

    TensorValue dtf = div_tfull.value(pnt);
    double upj = 0.0;
    for (std::size_t nu = 0; nu < dim; ++nu) upj -= dtf[nu] * uv[nu];
    out.u_projection.set_value(pnt, scalar_value(dim, upj));
    TensorValue ppj(dim, {Slot::Down});
    for (std::size_t nu = 0; nu < dim; ++nu) {
      double v = 0.0;
      for (std::size_t m = 0; m < dim; ++m) v += dtf[m] * prv(m, nu);
      ppj(nu) = v;
    }
    out.p_projection.set_value(pnt, ppj);
  }

  out.unprojected = std::move(div_tfull);
  out.continuity_mass = covariant_divergence(a.rho_u, gamma, 0);
  out.continuity_entropy = covariant_divergence(a.s_u, gamma, 0);
  if (!st.c_tensor.empty())
    out.cauchy_advection = lie_derivative(st.u, st.c_tensor);
  out.maxwell_matter =
      codifferential(a.g_form, st.metric) * -1.0 - a.rho_q_ub;
  return out;
}

PonderomotiveResiduals ponderomotive_residuals(const ModelSpec& model,
                                               const FieldState& st) {
  check_fields(st, true);
  Algebra a = eval_algebra(model, st);
  const ChartGrid& grid = st.metric.grid();
  std::size_t dim = grid.dim;
  Orientation o = st.metric.orient;

  TensorField gamma = christoffel(st.metric);
  TensorField div_tc = covariant_divergence(a.t_c, gamma, 0);
  TensorField div_uom = covariant_divergence(a.u_omega, gamma, 0);
  TensorField grad_f = covariant_derivative(st.F, gamma);

  TensorField gstar = hodge_star_field(a.g_form, st.metric);
  TensorField r2 = exterior_derivative(gstar) + a.qrho_iumu;

  PonderomotiveResiduals out;
  out.force = TensorField(grid, {Slot::Down});
  out.residual = TensorField(grid, {Slot::Down});
  out.maxwell_gap = TensorField(grid, {Slot::Down});
  out.unprojected = covariant_divergence(a.t_full, gamma, 0);

  std::vector<std::size_t> topidx(dim);
  for (std::size_t i = 0; i < dim; ++i) topidx[i] = i;

  for (std::size_t pnt = 0; pnt < grid.num_points(); ++pnt) {
    TensorValue dedfm = a.dedf_m.value(pnt);
    TensorValue gf = grad_f.value(pnt);  // (a, b, lam) = nabla_lam F_ab
    TensorValue lor = a.qrho_iuf.value(pnt);
    TensorValue duo = div_uom.value(pnt);
    TensorValue fo(dim, {Slot::Down});
    for (std::size_t lam = 0; lam < dim; ++lam) {
      double contr = 0.0;
      for (std::size_t m = 0; m < dim; ++m)
        for (std::size_t n = 0; n < dim; ++n)
          contr += dedfm(m, n) * gf(m, n, lam);
      fo(lam) = duo[lam] - 0.5 * contr + lor[lam];
    }
    out.force.set_value(pnt, fo);
    out.residual.set_value(pnt, div_tc.value(pnt) - fo);

    MetricValue g = st.metric.value(pnt);
    double mu_top = o.sign * g.sqrt_abs_det;
    FormValue ff = FormValue::from_tensor(st.F.value(pnt));
    FormValue r2f = FormValue::from_tensor(r2.value(pnt));
    TensorValue gap(dim, {Slot::Down});
    for (std::size_t lam = 0; lam < dim; ++lam) {
      FormValue ilf = interior_product(basis_vector(dim, lam), ff);
      FormValue w = wedge(ilf, r2f);
      gap(lam) = w.tensor().at(topidx.data()) / mu_top;
    }
    out.maxwell_gap.set_value(pnt, gap);
  }
  return out;
}

MaxwellMatterResiduals maxwell_matter_residual(const ModelSpec& model,
                                               const FieldState& st) {
  check_fields(st, true);
  Algebra a = eval_algebra(model, st);
  const ChartGrid& grid = st.metric.grid();
  std::size_t dim = grid.dim;
  Orientation o = st.metric.orient;

  MaxwellMatterResiduals out;
  out.one_form = codifferential(a.g_form, st.metric) * -1.0 - a.rho_q_ub;
  TensorField gstar = hodge_star_field(a.g_form, st.metric);
  out.top_form = exterior_derivative(gstar) + a.qrho_iumu;

  double sign = (dim - 1) % 2 == 0 ? 1.0 : -1.0;
  out.star_relation = TensorField(grid, {Slot::Down});
  for (std::size_t pnt = 0; pnt < grid.num_points(); ++pnt) {
    MetricValue g = st.metric.value(pnt);
    FormValue tf = FormValue::from_tensor(out.top_form.value(pnt));
    TensorValue rel =
        out.one_form.value(pnt) - hodge_star(tf, g, o).tensor() * sign;
    out.star_relation.set_value(pnt, rel);
  }
  return out;
}

std::vector<FaceResidual> boundary_face_residuals(const ModelSpec& model,
                                                  const FieldState& st,
                                                  std::size_t axis, bool upper) {
  check_fields(st, false);
  const ChartGrid& grid = st.metric.grid();
  std::size_t dim = grid.dim;
  if (axis >= dim) throw std::invalid_argument("face axis out of range");
  Orientation o = st.metric.orient;
  bool with_c = !st.c_tensor.empty();
  double c = st.c;
  std::size_t edge = upper ? grid.shape[axis] - 1 : 0;

  std::vector<FaceResidual> out;
  std::vector<std::size_t> midx(dim);
  for (std::size_t pnt = 0; pnt < grid.num_points(); ++pnt) {
    grid.unflat(pnt, midx.data());
    if (midx[axis] != edge) continue;

    MetricValue g = st.metric.value(pnt);
    double gaa = g.ginv(axis, axis);
    if (!(gaa > 0.0))
      throw std::domain_error("face conormal is not spacelike");
    TensorValue nb(dim, {Slot::Down});
    nb(axis) = (upper ? 1.0 : -1.0) / std::sqrt(gaa);
    TensorValue nv = raise_index(nb, 0, g);

    TensorValue uv = st.u.value(pnt);
    check_normalized(uv, g, c);
    ObserverFrame fr{uv, c};
    FormValue ff = FormValue::from_tensor(st.F.value(pnt));
    EMSplit eb = eb_decompose(ff, fr, g, o);
    std::optional<TensorValue> copt;
    if (with_c) copt = st.c_tensor.value(pnt);
    ConstitutiveSplit split =
        evaluate_split_raw(model, st.rho.value(pnt)[0], st.s.value(pnt)[0],
                           eb.E, eb.B, copt, g);
    MatterState ms;
    ms.rho = st.rho.value(pnt)[0];
    ms.s = st.s.value(pnt)[0];
    ms.E = eb.E;
    ms.B = eb.B;
    ms.c_tensor = copt;
    ms.g = g;
    ms.frame = fr;
    PressureEnergy pe = pressure_and_energy(split.total, ms);

    FormValue hb = flat(split.total.deps_dB, g);
    TensorValue tec =
        -1.0 * tensor_product(split.total.deps_dE, eb.E.tensor());
    if (eb.B.degree() >= 1)
      tec += trace_tensor_product(sharp(eb.B, g), hb);
    if (with_c && split.total.deps_dc) tec += elastic_stress(split.total, ms);

    FaceResidual fres;
    fres.point = pnt;
    double un = 0.0;
    for (std::size_t m = 0; m < dim; ++m) un += nb[m] * uv[m];
    fres.velocity_normal = un;

    TensorValue tlow = lower_index(tec, 0, g);
    TensorValue sb(dim, {Slot::Down});
    for (std::size_t m = 0; m < dim; ++m) {
      double v = 0.0;
      for (std::size_t n = 0; n < dim; ++n) v += tlow(m, n) * nv[n];
      sb(m) = v - pe.p * nb[m];
    }
    fres.stress_balance = sb;

    FormValue dd = flat(split.total.deps_dE, g) * -1.0;
    fres.normal_d = interior_product(nv, dd)[0];
    fres.tangential_h =
        interior_product(nv, interior_product(uv, hodge_star(hb, g, o)))
            .tensor();
    out.push_back(std::move(fres));
  }
  return out;
}

}  // namespace relcont
