#pragma once
// Discretized fields on the torus grid.  Storage is component-major then
// row-major over grid points, matching the FBIN1 file layout.

#include "bg/grid.hpp"
#include "bg/multiindex.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace bg {

struct ScalarField {
    GridPtr grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), v(grid->npts, fill) {}
    bool empty() const { return v.empty(); }
};

// Degree-k differential form; degree may be outside [0,n] (0 components)
// so collar bookkeeping can treat top+1 and -1 degrees uniformly.
struct FormField {
    GridPtr grid;
    int degree = 0;
    std::vector<double> v; // [component][point]

    FormField() = default;
    FormField(GridPtr g, int k) : grid(std::move(g)), degree(k) {
        v.assign(static_cast<std::size_t>(ncomp()) * grid->npts, 0.0);
    }
    long ncomp() const { return binom(grid->n, degree); }
    double* comp(long c) { return v.data() + static_cast<std::size_t>(c) * grid->npts; }
    const double* comp(long c) const { return v.data() + static_cast<std::size_t>(c) * grid->npts; }
    bool empty() const { return v.empty(); }
};

// Symmetric rank-2 tensor field, storing components i<=j.
struct Sym2Field {
    GridPtr grid;
    std::vector<double> v; // [pair][point], pairs (i,j) i<=j lexicographic

    Sym2Field() = default;
    explicit Sym2Field(GridPtr g) : grid(std::move(g)) {
        int n = grid->n;
        v.assign(static_cast<std::size_t>(n * (n + 1) / 2) * grid->npts, 0.0);
    }
    static int pair_index(int n, int i, int j) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i - 1) / 2 + (j - i);
    }
    double* comp(int i, int j) {
        return v.data() + static_cast<std::size_t>(pair_index(grid->n, i, j)) * grid->npts;
    }
    const double* comp(int i, int j) const {
        return v.data() + static_cast<std::size_t>(pair_index(grid->n, i, j)) * grid->npts;
    }
    bool empty() const { return v.empty(); }
};

// Generic dense tensor field (row-major component tuple, then grid point).
// Symmetry tag "symmetric-pairs" symmetrizes entries at construction time.
struct TensorField {
    GridPtr grid;
    int rank = 0;
    bool symmetric_pairs = false;
    std::vector<double> v;

    TensorField() = default;
    TensorField(GridPtr g, int r, bool sym = false)
        : grid(std::move(g)), rank(r), symmetric_pairs(sym) {
        std::size_t nc = 1;
        for (int i = 0; i < r; ++i) nc *= static_cast<std::size_t>(grid->n);
        v.assign(nc * grid->npts, 0.0);
    }
    std::size_t comp_offset(std::span<const int> idx) const {
        std::size_t c = 0;
        for (int i : idx) c = c * grid->n + static_cast<std::size_t>(i);
        return c * grid->npts;
    }
    double* comp(std::span<const int> idx) { return v.data() + comp_offset(idx); }
    const double* comp(std::span<const int> idx) const { return v.data() + comp_offset(idx); }
};

// ---- small vector helpers used all over the numerics --------------------

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale_inplace(std::vector<double>& x, double a) {
    for (double& t : x) t *= a;
}

inline double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double t : x) m = std::max(m, std::abs(t));
    return m;
}

inline double l2_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double t : x) s += t * t;
    return std::sqrt(s);
}

void check_finite(const std::vector<double>& x, const char* what);

// Pointwise multiply accumulate: out += a * f * g (all length npts arrays).
inline void pmadd(std::size_t npts, double a, const double* f, const double* g, double* out) {
    for (std::size_t p = 0; p < npts; ++p) out[p] += a * f[p] * g[p];
}

} // namespace bg
