#pragma once
// Combinatorial tables for exterior calculus: strictly increasing
// multi-indices in lexicographic order (the global component ordering for
// k-forms), the exterior-derivative stencil, the flat Hodge-star sign table,
// the sparse pattern of the derivation extension J(H), and the interior
// product pattern.  Tables are built once per (n,k) and cached.

#include <cstdint>
#include <vector>

namespace bg {

long binom(int n, int k);

// All strictly increasing k-subsets of {0..n-1}, lexicographic.
const std::vector<std::vector<int>>& multi_indices(int n, int k);

// Position of a sorted multi-index in the lexicographic list.
int multi_index_rank(int n, const std::vector<int>& idx);

struct DTerm {      // (d omega)_K += sign * d/dy_axis omega_I
    int out;        // output component K (degree k+1)
    int in;         // input component I (degree k)
    int axis;
    int sign;
};
// Stencil for exterior_derivative at input degree k (valid for k in [0,n-1]).
const std::vector<DTerm>& d_pattern(int n, int k);

struct StarTerm {   // (star0 omega)_out = sign * omega_in, Euclidean metric
    int out;        // component of degree n-k
    int in;         // component of degree k
    int sign;       // sign of the permutation (I, I^c) of (0..n-1)
};
const std::vector<StarTerm>& flat_star_pattern(int n, int k);

struct JTerm {      // (J(H) omega)_out += sign * H[a][b] * omega_in
    int out;
    int in;
    int a;          // replaced index
    int b;          // replacing index
    int sign;
};
// Pattern of the derivation extension of an endomorphism H of the cotangent
// fibers to k-forms: J(H)(a1^...^ak) = sum_i a1^...^ai(H)^...^ak.
const std::vector<JTerm>& j_pattern(int n, int k);

struct ITerm {      // (i_X omega)_out += sign * X[axis] * omega_in
    int out;        // degree k-1 component
    int in;         // degree k component
    int axis;
    int sign;
};
const std::vector<ITerm>& interior_pattern(int n, int k);

} // namespace bg
