#pragma once
// Spectrally accurate partial derivatives on the torus via FFT along one
// axis: transform, multiply by (i*m)^order with the symmetric frequency
// convention (Nyquist mode zeroed for odd order), inverse transform.

#include "bg/field.hpp"

namespace bg {

// Low-level: in/out are npts arrays laid out per TorusGrid strides.
void spectral_partial_raw(const TorusGrid& g, const double* in, double* out,
                          int axis, int order);

ScalarField spectral_partial(const ScalarField& f, int axis, int order = 1);

// Differentiate one stored component of a form in place into out.
void spectral_partial_comp(const FormField& f, long comp, int axis, int order,
                           double* out);

} // namespace bg
