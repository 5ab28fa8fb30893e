#pragma once
// Curvature of a boundary metric, computed by spectral differentiation of
// the metric components, and the Fefferman-Graham expansion coefficients of
// the associated collar metric.  Rank-3/4 tensors are stored in compressed
// index-pair layouts so the 8^6 grids fit in memory.

#include "bg/collar.hpp"

namespace bg {

// Antisymmetric pair (a<b) index, lexicographic.
inline int apair_index(int n, int a, int b) { return a * (2 * n - a - 1) / 2 + (b - a - 1); }

struct ChristoffelField { // Gamma^a_{bc}, symmetric in (b,c)
    GridPtr grid;
    std::vector<double> v; // [a][sym pair(bc)][point]
    ChristoffelField() = default;
    explicit ChristoffelField(GridPtr g) : grid(std::move(g)) {
        int n = grid->n;
        v.assign(static_cast<std::size_t>(n) * (n * (n + 1) / 2) * grid->npts, 0.0);
    }
    double* comp(int a, int b, int c) {
        int n = grid->n;
        return v.data() +
               (static_cast<std::size_t>(a) * (n * (n + 1) / 2) + Sym2Field::pair_index(n, b, c)) *
                   grid->npts;
    }
    const double* comp(int a, int b, int c) const {
        return const_cast<ChristoffelField*>(this)->comp(a, b, c);
    }
};

struct CottonField { // C_{abc}, antisymmetric in (a,b)
    GridPtr grid;
    std::vector<double> v; // [apair(ab)][c][point]
    CottonField() = default;
    explicit CottonField(GridPtr g) : grid(std::move(g)) {
        int n = grid->n;
        v.assign(static_cast<std::size_t>(n * (n - 1) / 2) * n * grid->npts, 0.0);
    }
    double* comp(int a, int b, int c) { // requires a<b
        int n = grid->n;
        return v.data() + (static_cast<std::size_t>(apair_index(n, a, b)) * n + c) * grid->npts;
    }
    const double* comp(int a, int b, int c) const {
        return const_cast<CottonField*>(this)->comp(a, b, c);
    }
    // Pointer + sign for arbitrary (a,b,c); null pointer means identically 0.
    std::pair<const double*, double> entry(int a, int b, int c) const {
        if (a == b) return {nullptr, 0.0};
        return (a < b) ? std::make_pair(comp(a, b, c), 1.0)
                       : std::make_pair(comp(b, a, c), -1.0);
    }
};

struct CurvTensorField { // R_{abcd}: antisym pairs (ab),(cd), swap-symmetric
    GridPtr grid;
    int npairs = 0;
    std::vector<double> v; // [tri(p<=q)][point]
    CurvTensorField() = default;
    explicit CurvTensorField(GridPtr g) : grid(std::move(g)) {
        npairs = grid->n * (grid->n - 1) / 2;
        v.assign(static_cast<std::size_t>(npairs * (npairs + 1) / 2) * grid->npts, 0.0);
    }
    double* pq(int p, int q) { // requires p<=q
        return v.data() +
               static_cast<std::size_t>(p * npairs - p * (p - 1) / 2 + (q - p)) * grid->npts;
    }
    const double* pq(int p, int q) const { return const_cast<CurvTensorField*>(this)->pq(p, q); }
    std::pair<const double*, double> entry(int a, int b, int c, int d) const {
        if (a == b || c == d) return {nullptr, 0.0};
        double s = 1.0;
        if (a > b) { std::swap(a, b); s = -s; }
        if (c > d) { std::swap(c, d); s = -s; }
        int p = apair_index(grid->n, a, b), q = apair_index(grid->n, c, d);
        if (p > q) std::swap(p, q);
        return {pq(p, q), s};
    }
    double value(int a, int b, int c, int d, std::size_t pt) const {
        auto [ptr, s] = entry(a, b, c, d);
        return ptr ? s * ptr[pt] : 0.0;
    }
};

struct CurvatureData {
    Metric metric;
    ChristoffelField christoffel;
    CurvTensorField riemann; // lowered R_{abcd}
    Sym2Field ricci;
    ScalarField scal;
    Sym2Field schouten; // P = (Ric - Scal h/(2(n-1)))/(n-2)
    CottonField cotton; // C_{abc} = nabla_a P_bc - nabla_b P_ac
    CurvTensorField weyl;
    Sym2Field bach;     // B_ab = nabla^c C_cab + P^{cd} W_cadb
};

CurvatureData compute_curvature(const Metric& m);

// h_x = h0 - x^2 P + x^4 h2/8 - x^6 h3/48, h2 = -2B/(n-4) + 2P^2 (B=0 for
// n=4), h3 = (tr h3 / n) h0 with tr h3 = -8 tr(PB)/(n-4); an optional
// trace-free perturbation of h3 supports the independence property test.
MetricSeries fg_metric_series(const CurvatureData& curv, const Sym2Field* h3_tt = nullptr);

// A = J(h0^{-1} P0) - Tr(h0^{-1} P0)/2 with P0 = 2P.
EndomorphismField a_operator(const CurvatureData& curv, int k);

} // namespace bg
