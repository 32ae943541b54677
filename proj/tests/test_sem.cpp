#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "matter_helpers.hpp"
#include "relcont/sem.hpp"

using namespace relcont;
using namespace relcont::testing;

namespace {

double lowered_asymmetry(const TensorValue& t, const MetricValue& g) {
  TensorValue low = lower_index(t, 0, g);
  double m = 0.0;
  for (std::size_t a = 0; a < g.dim; ++a)
    for (std::size_t b = 0; b < g.dim; ++b)
      m = std::max(m, std::fabs(low(a, b) - low(b, a)));
  return m;
}

}  // namespace

TEST_CASE("eb form reproduces the vacuum maxwell tensor") {
  std::mt19937 rng(601);
  for (std::size_t dim = 3; dim <= 4; ++dim)
    for (double c : {1.0, 2.0}) {
      MatterState st = random_matter_state(rng, dim, false, c);
      SEMTensor T = sem_eb(maxwell_model(), st);
      CHECK(T.form == "eb_form");
      FormValue F = eb_reconstruct({st.E, st.B}, st.frame, st.g);
      CHECK(max_abs_diff(T.T, maxwell_sem(F, st.g)) < 1e-12);
    }
}

TEST_CASE("eb form separates into fluid and field blocks for the euler model") {
  std::mt19937 rng(602);
  ModelSpec m = euler_maxwell_model(parse_expression("rho*(1 + 0.2*s)"));
  for (std::size_t dim = 3; dim <= 4; ++dim) {
    MatterState st = random_matter_state(rng, dim, false);
    double c = st.frame.c;
    double eps0 = st.rho * (1.0 + 0.2 * st.s);
    double p0 = st.rho * (1.0 + 0.2 * st.s) + st.s * 0.2 * st.rho - eps0;
    TensorValue expected = tensor_product(st.frame.u, lower_index(st.frame.u, 0, st.g));
    expected *= eps0 / (c * c);
    expected += p0 * projection_tensor(st.frame, st.g).P;
    FormValue F = eb_reconstruct({st.E, st.B}, st.frame, st.g);
    expected += maxwell_sem(F, st.g);
    CHECK(max_abs_diff(sem_eb(m, st).T, expected) < 1e-12);
  }
}

TEST_CASE("linear model tensor matches its printed block form") {
  std::mt19937 rng(603);
  double chi_e = 0.5, chi_b = 0.25;
  ModelSpec m = linear_model(parse_expression("rho"), chi_e, chi_b);
  MatterState st = random_matter_state(rng, 4, false);
  const MetricValue& g = st.g;
  double c = st.frame.c;
  double ee = form_inner(st.E, st.E, g), bb = form_inner(st.B, st.B, g);
  double eps0 = st.rho, p0 = 0.0;

  TensorValue uu = tensor_product(st.frame.u, lower_index(st.frame.u, 0, g));
  double eps_tot = eps0 + 0.5 * (1 + chi_e) * ee + 0.5 * (1 - chi_b) * bb;
  TensorValue expected = (eps_tot / (c * c)) * uu;
  // Poynting flux scaled by the inverse permeability 1 - chi_b
  FormValue S = poynting(st.E, st.B, st.frame, g) * (1.0 - chi_b);
  expected += (1.0 / c) * (tensor_product(st.frame.u, S.tensor()) +
                           tensor_product(sharp(S, g), lower_index(st.frame.u, 0, g)));
  expected -= (1 + chi_e) * tensor_product(sharp(st.E, g), st.E.tensor());
  expected -= (1 - chi_b) * trace_tensor_product(sharp(st.B, g), st.B);
  double p = p0 + 0.5 * (1 + chi_e) * ee + 0.5 * (1 - chi_b) * bb;
  expected += p * projection_tensor(st.frame, g).P;

  CHECK(max_abs_diff(sem_eb(m, st).T, expected) < 1e-12);
}

TEST_CASE("the three assemblies of the stress tensor agree") {
  std::mt19937 rng(604);
  struct Entry {
    ModelSpec model;
    bool with_c;
    bool dim4_only;
  };
  Entry entries[] = {
      {euler_maxwell_model(parse_expression("rho*(1 + 0.3*rho + 0.2*s)")), false,
       false},
      {linear_model(parse_expression("rho + 0.5*s^2"), 0.4, 0.3), false, false},
      {nonlinear_invariants_model(
           parse_expression("rho*s + 0.3*I1*I2 + 0.2*I3^2")),
       false, true},
      {elastic_model(parse_expression("rho"), 0.6, 0.8, 0.2, 0.1), true, false},
  };
  double cvals[] = {1.0, 2.0, 0.5};
  for (const Entry& e : entries)
    for (int trial = 0; trial < 30; ++trial) {
      std::size_t dim = e.dim4_only ? 4 : ((trial % 2) ? 3 : 4);
      double c = cvals[trial % 3];
      MaterialState ms =
          random_material_state(rng, dim, e.with_c, runif(rng, -1.0, 1.0), c);
      MatterState st = material_to_proper(ms);

      SEMTensor t_mat = sem_material(e.model, ms);
      SEMTensor t_eb = sem_eb(e.model, st);
      SEMTensor t_far = sem_faraday(e.model, st.rho, st.s, st.frame, ms.F,
                                    ms.c_tensor, ms.g);
      SEMTensor t_fd = sem_material_fd(e.model, ms);
      CHECK(t_mat.form == "phi_form");
      CHECK(t_far.form == "faraday_form");
      CHECK(max_abs_diff(t_mat.T, t_eb.T) < 1e-10);
      CHECK(max_abs_diff(t_far.T, t_eb.T) < 1e-10);
      CHECK(max_abs_diff(t_fd.T, t_eb.T) < 1e-5);
      CHECK(lowered_asymmetry(t_eb.T, ms.g) < 1e-10);
    }
}

TEST_CASE("material form is gauge invariant") {
  std::mt19937 rng(605);
  ModelSpec m = linear_model(parse_expression("rho"), 0.3, 0.2);
  for (int trial = 0; trial < 5; ++trial) {
    std::size_t dim = (trial % 2) ? 3 : 4;
    MaterialState ms = random_material_state(rng, dim, false, 0.8);
    MaterialState shifted = ms;
    shifted.A += random_form(rng, dim, 1);  // any shift, not only exact ones
    CHECK(max_abs_diff(sem_material(m, ms).T, sem_material(m, shifted).T) <
          1e-12);
    CHECK(max_abs_diff(sem_material_fd(m, ms).T, sem_material_fd(m, shifted).T) <
          1e-8);
  }

  // with q = 0 the potential decouples entirely
  MaterialState ms = random_material_state(rng, 4, false, 0.0);
  MaterialState stripped = ms;
  stripped.A = FormValue(4, 1);
  CHECK(max_abs_diff(sem_material(m, ms).T, sem_material(m, stripped).T) == 0.0);
}

TEST_CASE("splits add back to the full tensor and specialize correctly") {
  std::mt19937 rng(606);

  // maxwell only: the matter block vanishes
  MatterState vac = random_matter_state(rng, 4, false);
  SEMSplitTensors ours = sem_split_ours(maxwell_model(), vac);
  SEMSplitTensors erma = sem_split_erma(maxwell_model(), vac);
  CHECK(max_abs(ours.matter) < 1e-14);
  CHECK(max_abs(erma.matter) < 1e-14);
  CHECK(max_abs_diff(ours.maxwell, sem_eb(maxwell_model(), vac).T) < 1e-12);

  // euler: both decompositions coincide on the fluid block
  ModelSpec fluid = euler_maxwell_model(parse_expression("rho*(1 + 0.2*s)"));
  for (std::size_t dim = 3; dim <= 4; ++dim) {
    MatterState st = random_matter_state(rng, dim, false);
    SEMSplitTensors a = sem_split_ours(fluid, st);
    SEMSplitTensors b = sem_split_erma(fluid, st);
    TensorValue total = sem_eb(fluid, st).T;
    CHECK(max_abs_diff(a.matter + a.maxwell, total) < 1e-12);
    CHECK(max_abs_diff(b.matter + b.maxwell, total) < 1e-12);
    CHECK(max_abs_diff(a.matter, b.matter) < 1e-12);
  }

  // linear model: the field blocks differ by the printed mixed terms
  double chi_e = 0.4, chi_b = 0.3;
  ModelSpec lin = linear_model(parse_expression("rho"), chi_e, chi_b);
  for (std::size_t dim = 3; dim <= 4; ++dim) {
    MatterState st = random_matter_state(rng, dim, false);
    const MetricValue& g = st.g;
    double c = st.frame.c;
    SEMSplitTensors a = sem_split_ours(lin, st);
    SEMSplitTensors b = sem_split_erma(lin, st);
    TensorValue total = sem_eb(lin, st).T;
    CHECK(max_abs_diff(a.matter + a.maxwell, total) < 1e-12);
    CHECK(max_abs_diff(b.matter + b.maxwell, total) < 1e-12);

    double bb = form_inner(st.B, st.B, g);
    FormValue s_eb = poynting(st.E, st.B, st.frame, g);
    TensorValue diff = (-chi_b / c) *
                       (tensor_product(st.frame.u, s_eb.tensor()) +
                        tensor_product(sharp(s_eb, g), lower_index(st.frame.u, 0, g)));
    diff -= chi_e * tensor_product(sharp(st.E, g), st.E.tensor());
    if (dim > 3) diff += chi_b * trace_tensor_product(sharp(st.B, g), st.B);
    diff -= chi_b * bb * projection_tensor(st.frame, g).P;
    CHECK(max_abs_diff(b.maxwell - a.maxwell, diff) < 1e-12);
  }

  // elastic stress stays in the matter block
  ModelSpec el = elastic_model(parse_expression("rho"), 0.5, 0.6);
  MatterState st = random_matter_state(rng, 4, true);
  SEMSplitTensors a = sem_split_ours(el, st);
  SEMSplitTensors b = sem_split_erma(el, st);
  TensorValue total = sem_eb(el, st).T;
  CHECK(max_abs_diff(a.matter + a.maxwell, total) < 1e-12);
  CHECK(max_abs_diff(b.matter + b.maxwell, total) < 1e-12);
  ConstitutiveEval ev = evaluate(el, st);
  TensorValue t_el = elastic_stress(ev, st);
  CHECK(max_abs(t_el) > 1e-3);  // the sample actually exercises it
  CHECK(max_abs_diff(a.maxwell, sem_split_ours(linear_model(parse_expression("rho"), 0, 0), st).maxwell) < 1e-12);
}

TEST_CASE("the speed of light factors cancel where they must") {
  std::mt19937 rng(607);
  // a pure field tensor knows nothing about c
  for (double c : {0.5, 1.0, 3.0}) {
    MatterState st = random_matter_state(rng, 4, false, c);
    FormValue F = eb_reconstruct({st.E, st.B}, st.frame, st.g);
    CHECK(max_abs_diff(sem_eb(maxwell_model(), st).T, maxwell_sem(F, st.g)) <
          1e-12);
  }
}

TEST_CASE("material state validation") {
  std::mt19937 rng(608);
  ModelSpec m = euler_maxwell_model(parse_expression("rho"));
  MaterialState ms = random_material_state(rng, 4, false, 0.5);
  CHECK_NOTHROW(sem_material(m, ms));

  MaterialState bad = ms;
  bad.w = basis_vector(4, 2);
  CHECK_THROWS_AS(sem_material(m, bad), std::domain_error);
  bad = ms;
  bad.varrho = -0.2;
  CHECK_THROWS_AS(sem_material(m, bad), std::invalid_argument);
  bad = ms;
  bad.A = random_form(rng, 4, 2);
  CHECK_THROWS_AS(sem_material(m, bad), std::invalid_argument);
  bad = ms;
  bad.F = random_form(rng, 4, 1);
  CHECK_THROWS_AS(sem_material(m, bad), std::invalid_argument);
}
