#pragma once

#include <string>
#include <vector>

#include "relcont/constitutive.hpp"
#include "relcont/em.hpp"
#include "relcont/expression.hpp"
#include "relcont/grid.hpp"
#include "relcont/tensor.hpp"

namespace relcont {

// matching surface {phi = 0}; phi reads the chart coordinates as x0..x{dim-1};
// the interior region is phi < 0, the exterior phi > 0
struct Interface {
  Expression phi;
  std::size_t dim = 0;
  std::vector<std::vector<double>> samples;  // chart coordinates, on phi = 0
};

// seeds a regular lattice over the box, brackets phi = 0 along lattice edges,
// refines each crossing by bisection along the edge and polishes with one
// Newton step along grad phi; sample density follows the lattice shape.
// throws when phi uses unknown variables or no edge crosses the surface
Interface sample_interface(const Expression& phi, const std::vector<double>& lo,
                           const std::vector<double>& hi,
                           const std::vector<std::size_t>& shape);

// pointwise geometry of the surface as seen from one side
struct SurfacePoint {
  std::vector<double> x;
  TensorValue n_up;    // outward unit normal of the requested side
  TensorValue n_down;
  double eps = 1.0;    // g(n,n), +1 timelike surface, -1 spacelike
  std::vector<TensorValue> tangents;  // dim-1 orthonormal tangent vectors, Up
  std::vector<double> tangent_sign;   // g(t_i, t_i) = +-1
  TensorValue h;   // Down Down pullback of g, h = g - eps n_flat (x) n_flat
  TensorValue K;   // Down Down extrinsic curvature, tangentially projected
  double k = 0.0;  // h-trace of K
};

// side -1 evaluates with the normal pointing out of the interior (toward
// phi > 0), side +1 the reverse; field data is extrapolated one-sidedly from
// that side's region. throws on null normals and degenerate tangent frames
std::vector<SurfacePoint> interface_geometry(const Interface& iface, const MetricField& m,
                                             int side);

// interior solution (metric, potential 1-form, matter fields, model) and
// exterior vacuum solution (metric, potential); both grids must extend a few
// spacings past the surface on their own side
struct TwoSidedSolution {
  Interface iface;
  MetricField g_minus;
  TensorField a_minus;
  TensorField u, rho, s;  // interior matter fields
  TensorField c_tensor;   // optional strain state; empty when unused
  ModelSpec model;
  double c = 1.0;
  MetricField g_plus;
  TensorField a_plus;
  double chi = 2.0;  // Einstein coupling, fixed by the Reissner-Nordstrom oracle
};

struct JumpEntry {
  std::string name;
  std::vector<double> per_point;  // residual norm at each interface sample
  double linf = 0.0;
  double l2 = 0.0;
};

struct JumpReport {
  std::vector<JumpEntry> entries;
  bool has(const std::string& name) const;
  const JumpEntry& entry(const std::string& name) const;  // throws if absent
  void push(JumpEntry e);                                 // throws on duplicates
};

// tangential pullbacks of [g] and [A]; entries "tangential_metric",
// "tangential_potential"
JumpReport preliminary_jumps(const TwoSidedSolution& sol, int side = -1);

// [K] componentwise in the shared interior-built tangent frame, with the
// normal orientation shared across the sides; entry "extrinsic_curvature"
JumpReport israel_darmois(const TwoSidedSolution& sol, int side = -1);

// electromagnetic matching residuals, all evaluated in the interior metric
// and the extrapolated interior frame:
//   velocity_normal   g(u, n)
//   stress_balance    [t](., n_flat) - [p] n_flat, interior stress from the
//                     constitutive model, exterior the vacuum expressions
//   tangential_e      i_n i_u star[E]
//   normal_b          i_n [B]
//   normal_d          i_n [D]
//   tangential_h      i_n i_u star[H]
//   poynting_normal   i_n [S]; follows from tangential_e and tangential_h,
//                     reported as a diagnostic
JumpReport em_jumps(const TwoSidedSolution& sol, int side = -1);

// tangential part of [Ein](., n); implied by the curvature matching; entry
// "obrien_synge"
JumpReport obrien_synge(const TwoSidedSolution& sol, int side = -1);

// every junction entry in one report, each exactly once
JumpReport junction_report(const TwoSidedSolution& sol, int side = -1);

// Ein(g) - chi * t with t the mixed stress tensor lowered by g; an empty sem
// field means vacuum
TensorField einstein_residual(const MetricField& m, const TensorField& sem, double chi);

}  // namespace relcont
