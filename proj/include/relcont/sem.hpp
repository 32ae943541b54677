#pragma once

#include <string>

#include "relcont/constitutive.hpp"

namespace relcont {

// material-frame state: unnormalized timelike velocity w, mass and entropy
// coefficients relative to the metric volume (rho = sqrt(-g(w,w)) varrho / c),
// potential and field strength taken as independent values
struct MaterialState {
  TensorValue w;          // Up, timelike
  double varrho = 1.0;    // mass coefficient
  double varsigma = 0.0;  // entropy coefficient
  FormValue A;            // 1-form potential
  FormValue F;            // 2-form field strength
  double q = 0.0;         // charge coupling
  std::optional<TensorValue> c_tensor;  // Cauchy tensor, u-transverse
  MetricValue g;
  double c = 1.0;
  Orientation o;
};

// stress tensor factor (Up Down) multiplying the volume form, tagged with the
// variable set it was assembled from
struct SEMTensor {
  TensorValue T;
  std::string form;  // phi_form | eb_form | faraday_form
};

// observer-split assembly from (rho, s, E, B)
SEMTensor sem_eb(const ModelSpec& model, const MatterState& state,
                 Orientation o = {});

// the same bracket fed a single pre-computed energy part, no validation;
// field loops that evaluate the model once per point reuse it
TensorValue sem_eb_raw(const ConstitutiveEval& eval, const MatterState& state,
                       Orientation o = {});

// assembly from (rho, s, u, F) through the chain rule
SEMTensor sem_faraday(const ModelSpec& model, double rho, double s,
                      const ObserverFrame& frame, const FormValue& F,
                      const std::optional<TensorValue>& c_tensor,
                      const MetricValue& g, Orientation o = {});

// assembly from the transported variables (w, varrho, varsigma, A, F); the
// potential cancels pointwise, which makes this form gauge invariant
SEMTensor sem_material(const ModelSpec& model, const MaterialState& state);
// same bracket with every Lagrangian derivative taken by central differences
SEMTensor sem_material_fd(const ModelSpec& model, const MaterialState& state,
                          double step = 1e-6);

// weight-1 Lagrangian coefficient lhat = -eps - q varrho A(w)
double material_lagrangian(const ModelSpec& model, const MaterialState& state);

// proper-variable view of a material state
MatterState material_to_proper(const MaterialState& state);

// additive decompositions of the eb-form tensor
struct SEMSplitTensors {
  TensorValue matter;   // Up Down
  TensorValue maxwell;  // Up Down
};
// both blocks follow the full assembly pattern, each fed its own energy part
SEMSplitTensors sem_split_ours(const ModelSpec& model, const MatterState& state,
                               Orientation o = {});
// matter keeps only its rest energy and pressure; every field term, including
// the mixed polarization couplings, moves to the field block
SEMSplitTensors sem_split_erma(const ModelSpec& model, const MatterState& state,
                               Orientation o = {});

}  // namespace relcont
