#pragma once

#include "relcont/grid.hpp"
#include "relcont/tensor.hpp"

namespace relcont {

// finite differences: 2nd-order central in the interior, 2nd-order one-sided
// at the edges; same slots
TensorField partial_derivative(const TensorField& f, std::size_t axis);

// all partials at once; derivative slot (Down) appended last
TensorField partial_all(const TensorField& f);

// Levi-Civita connection coefficients from FD metric derivatives; slots
// (Up, Down, Down), symmetric in the lower pair
TensorField christoffel(const MetricField& m);

// covariant derivative, derivative slot appended last
TensorField covariant_derivative(const TensorField& f, const TensorField& gamma);

// contract the derivative slot against the given contravariant slot
TensorField covariant_divergence(const TensorField& f, const TensorField& gamma,
                                 std::size_t up_slot);

TensorField exterior_derivative(const TensorField& alpha);
TensorField hodge_star_field(const TensorField& alpha, const MetricField& m);
TensorField codifferential(const TensorField& alpha, const MetricField& m);
TensorField volume_form_field(const MetricField& m);

// Lie derivative from partials and the hat lift; agrees with the nabla form
TensorField lie_derivative(const TensorField& zeta, const TensorField& kappa);
TensorField lie_derivative_nabla(const TensorField& zeta, const TensorField& kappa,
                                 const TensorField& gamma);

// scalar residual of the local divergence identity for (lie_zeta kappa):pi
TensorField lie_lemma_residual(const TensorField& zeta, const TensorField& kappa,
                               const TensorField& pi);

TensorField riemann(const MetricField& m);           // R^r_{s m n}
TensorField ricci(const MetricField& m);             // Down Down
TensorField scalar_curvature(const MetricField& m);  // scalar
TensorField einstein_tensor(const MetricField& m);   // Down Down
TensorField einstein_mixed(const MetricField& m);    // Up Down

// residual of the divergence identity for v (x) A + w (x)tr F against its
// exterior-calculus writing; v and w are the vector / bivector density factors
TensorField crucial_identity_residual(const TensorField& A, const TensorField& F,
                                      const TensorField& v, const TensorField& w,
                                      const MetricField& m);

}  // namespace relcont
