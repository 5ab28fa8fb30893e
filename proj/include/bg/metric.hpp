#pragma once
// Riemannian metrics on the boundary torus.  Conformally flat metrics carry
// their factor so exterior calculus can use exact conformal-weight shortcuts;
// the general path works from the dense component fields.

#include "bg/field.hpp"

namespace bg {

struct Metric {
    enum class Kind { Flat, Conformal, General };
    Kind kind = Kind::Flat;
    GridPtr grid;
    ScalarField phi;      // conformal factor, Kind::Conformal only
    Sym2Field h;          // metric components (always filled)
    Sym2Field h_inv;      // pointwise inverse (always filled)
    ScalarField sqrt_det; // sqrt(det h) (always filled)
};

Metric flat_metric(const GridPtr& grid);
Metric conformal_metric(const ScalarField& phi); // e^{2 phi} * delta
Metric general_metric(Sym2Field h);              // inverse + sqrt(det) pointwise

// Pointwise inner product of k-forms w.r.t. the metric, as a scalar field:
// <a,b>_h = sum_{I,M} a_I b_M det(h^{-1}[I,M]).
ScalarField fiber_inner(const FormField& a, const FormField& b, const Metric& m);

// Equal-weight quadrature of <a,b>_h * sqrt(det h) over the torus; exact for
// band-limited integrands.
double quadrature_inner(const FormField& a, const FormField& b, const Metric& m);

double l2_norm(const FormField& a, const Metric& m);

} // namespace bg
