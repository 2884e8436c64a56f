// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>

#include "elc/field.hpp"
#include "elc/grid.hpp"

namespace elc {

// Periodic discrete differential calculus. Two schemes are supported:
//   spectral : FFT-based derivatives, exact for fields band-limited below the
//              2/3-rule cutoff |m_a| <= floor(N_a/3);
//   fd2      : classical centered 2nd-order stencils.
// All operators are pure functions of their inputs; non-finite inputs are
// rejected with the offending location.

VectorField gradient(const ScalarField& f, CalculusScheme scheme);

/// Velocity gradient tensor, G_ij = d_i u_j (derivative index first).
TensorField gradient(const VectorField& u, CalculusScheme scheme);
TensorField gradient(const DirectorField& d, CalculusScheme scheme);

ScalarField divergence(const VectorField& v, CalculusScheme scheme);

/// Row divergence, (div T)_i = sum_j d_j T_ji. All tensors used by the model
/// are symmetric, so this agrees with the column convention.
VectorField divergence(const TensorField& t, CalculusScheme scheme);

VectorField curl(const VectorField& v, CalculusScheme scheme);

ScalarField laplacian(const ScalarField& f, CalculusScheme scheme);
VectorField laplacian(const VectorField& v, CalculusScheme scheme);
VectorField laplacian(const DirectorField& d, CalculusScheme scheme);

TensorField hessian(const ScalarField& f, CalculusScheme scheme);

/// Zero every Fourier mode above the 2/3 cutoff (no-op for fd2).
void dealias(ScalarField& f, CalculusScheme scheme);
void dealias(VectorField& v, CalculusScheme scheme);

/// Multiply each Fourier mode by weight(m1,m2,m3) (signed integer modes).
/// Used to synthesize shaped band-limited random fields.
ScalarField spectral_mode_filter(const ScalarField& f,
                                 const std::function<double(long, long, long)>& weight);

/// Du = (grad u + grad u^T)/2; symmetric at every node by construction.
TensorField deformation_tensor(const VectorField& u, CalculusScheme scheme);
TensorField deformation_from_gradient(const TensorField& grad_u);

ScalarField dot_field(const VectorField& a, const VectorField& b);

/// (grad d (x) grad d)_ij = d_i d . d_j d; symmetric by construction.
TensorField grad_outer_product(const DirectorField& d, CalculusScheme scheme);
TensorField outer_from_gradient(const TensorField& grad_d);

// L^p norms by the rectangle rule, (sum |f|^p h^3)^(1/p); p = inf takes the
// grid max. Pointwise magnitudes are Euclidean (vector) / Frobenius (tensor).
// p must be >= 1 or infinity.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& f, double p);
double lp_norm(const TensorField& f, double p);
double lp_norm(const DirectorField& f, double p);

double lp_norm_grad(const ScalarField& f, double p, CalculusScheme scheme);
double lp_norm_grad(const VectorField& f, double p, CalculusScheme scheme);
double lp_norm_grad(const DirectorField& f, double p, CalculusScheme scheme);

/// || grad grad f ||_{L^2} accumulated over all components of f.
double second_gradient_l2(const VectorField& f, CalculusScheme scheme);
double second_gradient_l2(const DirectorField& f, CalculusScheme scheme);
double second_gradient_l2(const ScalarField& f, CalculusScheme scheme);

/// <f, g> = sum f.g h^3 with deterministic reduction.
double inner_product(const ScalarField& a, const ScalarField& b);
double inner_product(const VectorField& a, const VectorField& b);

}  // namespace elc
