#pragma once
// Trigonometric polynomials with integer mode vectors: the band-limited
// function class used for conformal factors and test forms.  Keeping fields
// symbolic until sampling gives exact derivative oracles for free.

#include "bg/field.hpp"

#include <cstdint>
#include <vector>

namespace bg {

struct TrigTerm {
    double amp = 0.0;
    std::vector<int> modes; // length n
    bool is_sin = true;     // sin(m.y) or cos(m.y)
};

struct TrigPoly {
    std::vector<TrigTerm> terms;

    TrigPoly derivative(int axis) const; // exact d/dy_axis
    ScalarField sample(const GridPtr& grid) const;
};

struct TrigFormSpec {
    int degree = 0;
    std::vector<TrigPoly> comps; // one per lexicographic component

    FormField sample(const GridPtr& grid) const;
};

// Deterministic pseudo-random band-limited form: |m_i| <= max_mode.
TrigFormSpec random_lowfreq_spec(const GridPtr& grid, int k, int max_mode,
                                 std::uint64_t seed);
FormField random_lowfreq_form(const GridPtr& grid, int k, int max_mode,
                              std::uint64_t seed);

} // namespace bg
