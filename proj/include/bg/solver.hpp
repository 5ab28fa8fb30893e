#pragma once
// Frobenius solver for the formal power-series Dirichlet problems of the
// Hodge Laplacian on the collar, and extraction of the conformal operators
// (L_k^l, L_k, B_k, C_k, D_k, G_k, B'_k, D'_k, Q_k) from the residuals.
//
// Absolute problem: omega = x^alpha sum_j x^{2j}(w_j^t + w_j^n dx/x) with
// w_0^t = omega_0, alpha = n/2-k-l, lambda = (n/2-k+l)(n/2-k-l); the
// tangential indicial factor first vanishes at relative order 2l, where the
// obstruction defines L_k^l.  For l = n/2-k this is the problem solved by
// omega_{F1}, and B_k, C_k, D_k, G_k are read off Laplacian, codifferential
// and differential of the solution at the following orders.
//
// Relative problem: the boundary value sits in the normal slot at order 0;
// B'_k, D'_k and Q_k are read off in the same way.

#include "bg/collar.hpp"

#include <stdexcept>

namespace bg {

// Residual left after a series solve exceeded its guard tolerance.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AbsoluteSolution {
    LogSeriesForm series; // the solved form, shift = n/2-k-l
    int k = 0;
    int ell = 0;
    double lambda = 0.0;
};

// Solve (Delta - lambda) omega = O_t(x^{alpha+2l}) + O_n(x^{alpha+2l+2}).
// vt, if given, is injected as the (undetermined) tangential coefficient at
// relative order 2l; the canonical solution takes vt = 0.
AbsoluteSolution solve_absolute_series(const CollarGeometry& geom, const FormField& w0,
                                       int ell, const FormField* vt = nullptr,
                                       double guard_tol = 1e-8);

// L_k^l omega_0: obstruction at relative order 2l, any 1 <= l <= n/2-k.
FormField operator_Lk_ell(const CollarGeometry& geom, const FormField& w0, int ell);

struct BGOperatorSet {
    FormField L; // degree k
    FormField B; // degree k-1
    FormField C; // degree k-1
    FormField D; // degree k
    FormField G; // degree k-1
};

// All absolute-problem operators at l = n/2-k (requires k < n/2).
BGOperatorSet absolute_operators(const CollarGeometry& geom, const FormField& w0,
                                 const FormField* vt = nullptr, double guard_tol = 1e-8);

struct RelativeSolution {
    LogSeriesForm series; // degree K, boundary value in the normal slot
    int K = 0;
};

// Relative problem on degree K = deg(w0) + 1, solved to order n-2K.
RelativeSolution solve_relative_series(const CollarGeometry& geom, const FormField& w0,
                                       const FormField* vt = nullptr,
                                       double guard_tol = 1e-8);

struct RelOperatorSet {
    FormField Bp; // B'_p, degree p
    FormField Dp; // D'_p, degree p+1
    FormField Q;  // Q_p, degree p; empty when p = n/2-1 (formula degenerates)
};

RelOperatorSet relative_operators(const CollarGeometry& geom, const FormField& w0,
                                  const FormField* vt = nullptr, double guard_tol = 1e-8);

// G_{n/2} = (-1)^{n/2+1} delta_0 (top-degree special case).
FormField operator_G_top(const FormField& w0, const Metric& h0);

} // namespace bg
