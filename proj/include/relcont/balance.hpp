#pragma once

#include <cstddef>
#include <vector>

#include "relcont/calculus.hpp"
#include "relcont/constitutive.hpp"
#include "relcont/grid.hpp"
#include "relcont/sem.hpp"

namespace relcont {

// matter and field data over a chart grid; u is the normalized world
// velocity (g(u,u) = -c^2 at every point), F the Faraday 2-form
struct FieldState {
  MetricField metric;
  TensorField u;    // Up
  TensorField rho;  // scalar
  TensorField s;    // scalar
  TensorField F;    // Down Down, antisymmetric
  double q = 0.0;
  double c = 1.0;
  TensorField c_tensor;  // Down Down, u-transverse; leave empty when unused
};

// residual fields of the projected balance system; derivative entries are
// second-order accurate on the margin-2 interior, one-sided near edges
struct BalanceResiduals {
  TensorField energy;              // scalar
  TensorField momentum;            // Down
  TensorField continuity_mass;     // scalar, div(rho u)
  TensorField continuity_entropy;  // scalar, div(s u)
  TensorField cauchy_advection;    // Down Down, lie_u c; empty without c_tensor
  TensorField maxwell_matter;      // Down
  TensorField unprojected;         // Down, divergence of the full stress tensor
  TensorField u_projection;        // scalar, -(unprojected . u)
  TensorField p_projection;        // Down, unprojected composed with P
};

BalanceResiduals balance_residuals(const ModelSpec& model, const FieldState& st);

// div t_c - force, with the force assembled from its convective, field
// gradient and charge pieces; on states satisfying the matter Maxwell
// equation the residual equals the unprojected divergence, and maxwell_gap
// carries the defect term for states that do not
struct PonderomotiveResiduals {
  TensorField force;        // Down
  TensorField residual;     // Down
  TensorField unprojected;  // Down
  TensorField maxwell_gap;  // Down
};

PonderomotiveResiduals ponderomotive_residuals(const ModelSpec& model,
                                               const FieldState& st);

// the two writings of the matter Maxwell equation as residual fields
struct MaxwellMatterResiduals {
  TensorField one_form;       // Down
  TensorField top_form;       // Down x (dim - 1)
  TensorField star_relation;  // Down: one_form - (-1)^(dim-1) star(top_form)
};

MaxwellMatterResiduals maxwell_matter_residual(const ModelSpec& model,
                                               const FieldState& st);

// pointwise boundary-condition residuals on a coordinate face, evaluated
// against the outward unit conormal; all entries vanish on a matched face
struct FaceResidual {
  std::size_t point = 0;         // flat grid index of the face point
  double velocity_normal = 0.0;  // g(u, n)
  TensorValue stress_balance;    // Down: t_ec(., n) - p n_flat
  double normal_d = 0.0;         // i_n D
  TensorValue tangential_h;      // form components of i_n i_u (star H)
};

std::vector<FaceResidual> boundary_face_residuals(const ModelSpec& model,
                                                  const FieldState& st,
                                                  std::size_t axis, bool upper);

}  // namespace relcont
