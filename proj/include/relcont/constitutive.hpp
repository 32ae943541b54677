#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relcont/em.hpp"
#include "relcont/expression.hpp"
#include "relcont/tensor.hpp"

namespace relcont {

// local thermodynamic/electromagnetic state of the medium, split against the
// observer frame: E is a 1-form, B a (dim-3)-form, both transverse to u
struct MatterState {
  double rho = 1.0;  // proper mass density
  double s = 0.0;    // proper entropy density
  FormValue E;
  FormValue B;
  std::optional<TensorValue> c_tensor;  // Cauchy tensor, Down Down, u-transverse
  MetricValue g;
  ObserverFrame frame;
};

// energy density and its partial derivatives; deps_dE is a vector (equals
// -D#), deps_dB a (dim-3)-multivector (equals H#), deps_dc symmetric Up Up
// paired with symmetric variations of the Cauchy tensor
struct ConstitutiveEval {
  double eps = 0.0;
  double deps_drho = 0.0;
  double deps_ds = 0.0;
  TensorValue deps_dE;
  TensorValue deps_dB;
  std::optional<TensorValue> deps_dc;
};

// matter + maxwell parts along with their sum
struct ConstitutiveSplit {
  ConstitutiveEval matter;
  ConstitutiveEval maxwell;
  ConstitutiveEval total;
};

struct DerivedFields {
  FormValue D, H;  // from the total energy
  FormValue P, M;  // polarization / magnetization, from the matter part
};

struct PressureEnergy {
  double p = 0.0;
  double eps_tot = 0.0;
};

// energy model; build through the factory functions below, which enforce the
// declared validity ranges at construction
struct ModelSpec {
  std::string kind;  // maxwell | euler_maxwell | linear | nonlinear_invariants
                     // | elastic | nonlinear_ed
  // fluid state equation eps0(rho, s) and its partials
  Expression eps0, eps0_rho, eps0_s;
  // linear susceptibilities, constant or functions of (rho, s)
  bool chi_variable = false;
  double chi_e = 0.0, chi_b = 0.0;
  Expression chi_e_expr, chi_e_rho, chi_e_s;
  Expression chi_b_expr, chi_b_rho, chi_b_s;
  // invariant energy f(rho, s, I1, I2, I3)
  Expression f, f_rho, f_s, f_i1, f_i2, f_i3;
  // elastic moduli for 0.5*lambda_e*tr(c)^2 + 0.5*mu_e*tr(c.c)
  double lambda_e = 0.0, mu_e = 0.0;
  // nonlinear electrodynamics density eps_nl(alpha, beta)
  Expression eps_nl, eps_nl_a, eps_nl_b;
};

ModelSpec maxwell_model();
ModelSpec euler_maxwell_model(const Expression& eps0);
ModelSpec linear_model(const Expression& eps0, double chi_e, double chi_b);
ModelSpec linear_variable_model(const Expression& eps0, const Expression& chi_e,
                                const Expression& chi_b);
ModelSpec nonlinear_invariants_model(const Expression& f);
ModelSpec elastic_model(const Expression& eps0, double lambda_e, double mu_e,
                        double chi_e = 0.0, double chi_b = 0.0);
ModelSpec nonlinear_ed_model(const Expression& eps_nl);

// throws on malformed states: rho <= 0, wrong degrees, non-transverse E/B/c
void validate_state(const MatterState& state);

ConstitutiveSplit evaluate_split(const ModelSpec& model, const MatterState& state);
ConstitutiveEval evaluate(const ModelSpec& model, const MatterState& state);

// evaluation without state validation; finite-difference probes and field
// loops that already checked their input go through here
ConstitutiveSplit evaluate_split_raw(const ModelSpec& model, double rho, double s,
                                     const FormValue& E, const FormValue& B,
                                     const std::optional<TensorValue>& c_tensor,
                                     const MetricValue& g);

DerivedFields derived_fields(const ConstitutiveSplit& split, const MatterState& state);
PressureEnergy pressure_and_energy(const ConstitutiveEval& eval,
                                   const MatterState& state);

// (t_el)^mu_nu = -2 (deps_dc)^{lam mu} c_{lam nu}; the projected variant
// applies the rest-space projector on the contravariant slot first
TensorValue elastic_stress(const ConstitutiveEval& eval, const MatterState& state);
TensorValue elastic_stress_projected(const ConstitutiveEval& eval,
                                     const MatterState& state);

// central-difference oracle for every analytic partial
struct FdEntry {
  std::string name;
  double analytic = 0.0;
  double fd = 0.0;
  double error = 0.0;  // |analytic - fd|
};
struct FdReport {
  bool pass = true;
  double worst = 0.0;  // largest error after tolerance scaling
  std::vector<FdEntry> failures;
};
FdReport fd_check_partials(const ModelSpec& model, const MatterState& state,
                           double step = 1e-5, double rel_tol = 1e-5,
                           double abs_floor = 1e-9);

// energy as a function of (rho, s, u, F, g) with partials obtained from the
// (E, B) model by the chain rule; de_du pairs with vector variations of u,
// de_dF is the 2-multivector paired as (1/2) X^{ab} dF_{ab}
struct FaradayEval {
  double e = 0.0;
  double de_drho = 0.0;
  double de_ds = 0.0;
  FormValue de_du;
  TensorValue de_dF;
  std::optional<TensorValue> de_dc;
};
FaradayEval faraday_eval(const ModelSpec& model, double rho, double s,
                         const ObserverFrame& frame, const FormValue& F,
                         const std::optional<TensorValue>& c_tensor,
                         const MetricValue& g, Orientation o = {});
FdReport fd_check_faraday(const ModelSpec& model, double rho, double s,
                          const ObserverFrame& frame, const FormValue& F,
                          const std::optional<TensorValue>& c_tensor,
                          const MetricValue& g, Orientation o = {},
                          double step = 1e-5, double rel_tol = 1e-5,
                          double abs_floor = 1e-9);

// nonlinear electrodynamics in four spacetime dimensions: the lagrangian
// density -eps_nl(alpha, beta) with alpha mu = (1/2) F ^ *F and
// beta mu = (1/2) F ^ F, and its stress tensor
struct NonlinearEdResult {
  double lagrangian = 0.0;  // coefficient of mu(g)
  double alpha = 0.0;
  double beta = 0.0;
  TensorValue sem;  // Up Down
};
NonlinearEdResult nonlinear_ed_eval(const FormValue& F, const MetricValue& g,
                                    Orientation o, const ModelSpec& model);

}  // namespace relcont
