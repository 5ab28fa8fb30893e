#pragma once
// Metric-dependent exterior calculus on the boundary torus: d, Hodge star,
// codifferential, form Laplacian, interior product, and the derivation
// extension J(H) of fiber endomorphisms.

#include "bg/metric.hpp"

namespace bg {

FormField exterior_derivative(const FormField& w);

// (star w)_J = sqrt(det h) * sgn(I,J) * (Lambda^k(h^{-1}) w)_I, orientation
// dy_1 ^ ... ^ dy_n.  Conformal metrics use the exact weight e^{(n-2k)phi}.
FormField hodge_star(const FormField& w, const Metric& m);

// Inverse star on degree-k forms realized as (-1)^{k(n-k)} star_{n-k}.
FormField hodge_star_inverse(const FormField& w, const Metric& m, int source_degree);

// delta = (-1)^k star^{-1} d star on degree-k forms (paper's convention;
// formal adjoint of d, pinned by the adjointness test).
FormField codifferential(const FormField& w, const Metric& m);

FormField form_laplacian(const FormField& w, const Metric& m); // d delta + delta d

// Interior product with a vector field X (components X^a, contravariant).
FormField interior_product(const std::vector<ScalarField>& X, const FormField& w);

// Pointwise linear operator on k-form fibers of the shape c0*Id + J(H),
// which covers every algebraic operator the paper uses (J(H), A, j(Ric), ...).
struct EndomorphismField {
    GridPtr grid;
    int degree = 0;
    ScalarField c0;        // empty means 0
    std::vector<double> H; // endomorphism H^a_b of the cotangent fiber,
                           // [a*n+b]-major then grid point; empty means none
    FormField apply(const FormField& w) const;
};

// J(H) for an explicit cotangent endomorphism field (H^a_b = endo[a*n+b]).
EndomorphismField j_operator(const GridPtr& grid, std::vector<double> endo, int k);

// j(T) := J(h^{-1} T) for a symmetric 2-tensor T.
EndomorphismField j_operator(const Sym2Field& T, const Metric& m, int k);

ScalarField trace_endo(const GridPtr& grid, const std::vector<double>& endo);

} // namespace bg
