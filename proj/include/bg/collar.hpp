#pragma once
// Truncated, log-graded power series in the boundary-defining variable x
// whose coefficients are boundary form fields, plus series realizations of
// d, delta_g and the Hodge Laplacian of the collar metric g=(dx^2+h_x)/x^2.
//
// Collar k-forms split as tangential k-form + (k-1)-form ^ dx/x; d and delta
// act by the 2x2 matrices of the paper and the slice star enters only through
// its truncated Taylor series in x.  For conformally flat h_0 the star series
// is applied in factored form
//     star_x = s(x) * star0_flat o exp(-J(L(x))) o e^{-2k phi},
// with L(x) = log(I + h_0^{-1} dh(x)) a matrix-valued even polynomial; J is
// the sparse derivation extension, so no dense fiber matrices are ever
// stored over the grid.

#include "bg/exterior.hpp"

#include <map>
#include <utility>

namespace bg {

// Truncated collar metric h_x = h0 + sum_j x^j corr_j (j even >= 2).
struct MetricSeries {
    GridPtr grid;
    int order = 0; // highest retained power of x
    Metric h0;
    std::vector<std::pair<int, Sym2Field>> corr;

    // x^j Taylor coefficient of h_x^{-1} (Neumann series); for tests.
    Sym2Field inverse_coeff(int j) const;
};

struct FormPair {
    FormField t;   // tangential part, degree k
    FormField nrm; // normal part: coefficient of (.)^ dx/x, degree k-1
};

// Series x^shift * sum_{j,l} x^j log^l x * coefficient(j,l).  Orders j are
// relative to the shift; log level l <= 2 for all supported scenarios.
struct LogSeriesForm {
    GridPtr grid;
    int degree = 0;
    double shift = 0.0;
    int maxorder = 0;
    std::map<std::pair<int, int>, FormPair> coef;

    FormPair& at(int j, int l);                 // creates zero pair if absent
    const FormPair* find(int j, int l) const;   // nullptr if absent
    void add_scaled(int j, int l, const FormPair& p, double a);
    void prune(double tol = 0.0);               // drop all-zero coefficients
    double max_abs() const;
};

// Precomputed star-series data for one collar metric.
struct CollarGeometry {
    GridPtr grid;
    int n = 0;
    int order = 0;
    Metric h0;      // flat or conformal
    bool flat = true;
    std::vector<std::pair<int, Sym2Field>> L;       // log(I + h0^{-1} dh)
    std::vector<std::pair<int, ScalarField>> sdet;  // sqrt(det h_x) series

    // x^j Taylor coefficient of star_{h_x} applied to a degree-k form.
    FormField star_coeff(int j, const FormField& w) const;
};

CollarGeometry make_collar_geometry(const MetricSeries& ms);

// Spec-shaped star series for one degree: explicit access to the Taylor
// coefficients of star_x and star_x^{-1} on degree-k forms.
struct StarSeries {
    const CollarGeometry* geom = nullptr;
    int degree = 0;
    FormField coeff(int j, const FormField& w) const { return geom->star_coeff(j, w); }
    FormField inv_coeff(int j, const FormField& w) const; // via star_{n-k} and sign
};

StarSeries star_series(const CollarGeometry& geom, int k);

// d = [[d, 0], [(-1)^k x d/dx, d]] on the splitting (t, nrm).
LogSeriesForm apply_d(const LogSeriesForm& w);

// delta_g = [[x^2 delta_x, (-1)^k star^{-1}(2k-n-2+x d/dx) star], [0, x^2 delta_x]].
LogSeriesForm apply_delta(const LogSeriesForm& w, const CollarGeometry& geom);

// (d delta + delta d - lambda) w.
LogSeriesForm apply_laplacian(const LogSeriesForm& w, const CollarGeometry& geom,
                              double lambda = 0.0);

} // namespace bg
