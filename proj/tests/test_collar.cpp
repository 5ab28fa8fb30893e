//==============================================================================
// test_collar.cpp
// Series calculus of the collar Laplacian:
//   1) Indicial blocks on the flat collar: t/n factors, the d-coupling, and
//      the order-2 boundary terms, all against hand-derived formulas.
//   2) Star series of a curved collar metric vs the exact slice Hodge star
//      at a small x (general-metric path as independent oracle).
//   3) star o star^{-1} = identity order by order.
//   4) d o d = 0 and delta o delta = 0 as series operators.
//   5) delta commutes with the Laplacian on a curved collar.
//==============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bg/curvature.hpp"
#include "bg/trigpoly.hpp"

#include <cmath>

using namespace bg;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

CollarGeometry flat_collar(const GridPtr& grid, int order) {
    MetricSeries ms;
    ms.grid = grid;
    ms.h0 = flat_metric(grid);
    ms.order = order;
    return make_collar_geometry(ms);
}

ScalarField sample_phi(const GridPtr& grid) {
    TrigPoly p;
    std::vector<int> m1(grid->n, 0), m2(grid->n, 0);
    m1[0] = 1;
    m2[1] = 1;
    p.terms.push_back({0.15, m1, true});
    p.terms.push_back({0.1, m2, false});
    return p.sample(grid);
}

CollarGeometry curved_collar(const GridPtr& grid) {
    CurvatureData c = compute_curvature(conformal_metric(sample_phi(grid)));
    return make_collar_geometry(fg_metric_series(c));
}

LogSeriesForm single_t(const GridPtr& grid, int k, double shift, const FormField& w,
                       int maxorder = 2) {
    LogSeriesForm s;
    s.grid = grid;
    s.degree = k;
    s.shift = shift;
    s.maxorder = maxorder;
    s.at(0, 0).t = w;
    return s;
}

} // namespace

TEST_CASE("flat collar indicial blocks") {
    auto grid = TorusGrid::make(4, {8, 8, 8, 8});
    const int n = 4;
    CollarGeometry geom = flat_collar(grid, 4);
    Metric flat = flat_metric(grid);

    for (int k = 0; k <= 2; ++k) {
        for (double s : {0.0, 0.5, 2.0}) {
            FormField w = random_lowfreq_form(grid, k, 2, 41 + k);
            LogSeriesForm ser = single_t(grid, k, s, w);
            LogSeriesForm r = apply_laplacian(ser, geom);
            // x^s: tangential factor s(n-2k-s).
            const FormPair* r0 = r.find(0, 0);
            std::vector<double> ref = w.v;
            scale_inplace(ref, s * (n - 2 * k - s));
            if (r0) CHECK(max_diff(r0->t.v, ref) < 1e-10);
            else CHECK(max_abs(ref) < 1e-12);
            // x^{s+2}: boundary Laplacian in t, 2(-1)^{k+1} delta_0 in n.
            const FormPair* r2 = r.find(2, 0);
            REQUIRE(r2 != nullptr);
            CHECK(max_diff(r2->t.v, form_laplacian(w, flat).v) < 1e-9);
            if (k > 0) {
                FormField dw = codifferential(w, flat);
                scale_inplace(dw.v, 2.0 * ((k + 1) % 2 ? -1.0 : 1.0));
                CHECK(max_diff(r2->nrm.v, dw.v) < 1e-9);
            }
        }
    }

    // Pure normal input: factor s(n-2k+2-s) in n, coupling 2(-1)^{k+1} d in t.
    for (int k = 1; k <= 2; ++k) {
        for (double s : {0.5, 2.0}) {
            FormField w = random_lowfreq_form(grid, k - 1, 2, 61 + k);
            LogSeriesForm ser;
            ser.grid = grid;
            ser.degree = k;
            ser.shift = s;
            ser.maxorder = 2;
            ser.at(0, 0).nrm = w;
            LogSeriesForm r = apply_laplacian(ser, geom);
            const FormPair* r0 = r.find(0, 0);
            REQUIRE(r0 != nullptr);
            std::vector<double> ref = w.v;
            scale_inplace(ref, s * (n - 2 * k + 2 - s));
            CHECK(max_diff(r0->nrm.v, ref) < 1e-10);
            FormField dw = exterior_derivative(w);
            scale_inplace(dw.v, 2.0 * ((k + 1) % 2 ? -1.0 : 1.0));
            CHECK(max_diff(r0->t.v, dw.v) < 1e-10);
        }
    }
}

TEST_CASE("star series matches the exact slice star at small x") {
    auto grid = TorusGrid::make(4, {16, 16, 16, 16});
    CollarGeometry geom = curved_collar(grid);
    const double x0 = 0.05;

    // h_x assembled explicitly and inverted pointwise: independent path.
    CurvatureData c = compute_curvature(conformal_metric(sample_phi(grid)));
    MetricSeries ms = fg_metric_series(c);
    Sym2Field hx(grid);
    hx.v = ms.h0.h.v;
    for (const auto& [j, corr] : ms.corr) axpy(std::pow(x0, j), corr.v, hx.v);
    Metric slice = general_metric(std::move(hx));

    for (int k = 0; k <= 4; ++k) {
        FormField w = random_lowfreq_form(grid, k, 2, 71 + k);
        FormField exact = hodge_star(w, slice);
        FormField sum(grid, 4 - k);
        for (int j = 0; j <= geom.order; j += 2)
            axpy(std::pow(x0, j), geom.star_coeff(j, w).v, sum.v);
        CHECK(max_diff(exact.v, sum.v) < 5e-8 * (1.0 + max_abs(exact.v)));
    }
}

TEST_CASE("star o star^{-1} is the identity order by order") {
    auto grid = TorusGrid::make(4, {8, 8, 8, 8});
    CollarGeometry geom = curved_collar(grid);
    for (int k = 0; k <= 4; ++k) {
        StarSeries ss = star_series(geom, k);
        FormField w = random_lowfreq_form(grid, k, 2, 81 + k);
        for (int j = 0; j <= geom.order; j += 2) {
            FormField acc(grid, k);
            for (int i = 0; i <= j; i += 2) {
                FormField si = ss.coeff(i, w);
                StarSeries inv = star_series(geom, 4 - k);
                // inv_coeff of the dual-degree series applied to degree n-k.
                FormField back = ss.inv_coeff(j - i, si);
                axpy(1.0, back.v, acc.v);
            }
            if (j == 0) CHECK(max_diff(acc.v, w.v) < 1e-11);
            else CHECK(max_abs(acc.v) < 1e-11 * (1.0 + max_abs(w.v)));
        }
    }
}

TEST_CASE("series d o d = 0 and delta o delta = 0") {
    auto grid = TorusGrid::make(4, {8, 8, 8, 8});
    CollarGeometry geom = curved_collar(grid);
    LogSeriesForm ser;
    ser.grid = grid;
    ser.degree = 1;
    ser.shift = 0.5;
    ser.maxorder = 4;
    ser.at(0, 0).t = random_lowfreq_form(grid, 1, 2, 5);
    ser.at(0, 0).nrm = random_lowfreq_form(grid, 0, 2, 6);
    ser.at(2, 0).t = random_lowfreq_form(grid, 1, 2, 7);
    ser.at(2, 1).t = random_lowfreq_form(grid, 1, 2, 8);
    ser.at(2, 1).nrm = random_lowfreq_form(grid, 0, 2, 9);

    LogSeriesForm dd = apply_d(apply_d(ser));
    CHECK(dd.max_abs() < 1e-10);
    LogSeriesForm ll = apply_delta(apply_delta(ser, geom), geom);
    CHECK(ll.max_abs() < 1e-9);
}

TEST_CASE("delta commutes with the Laplacian on a curved collar") {
    auto grid = TorusGrid::make(4, {8, 8, 8, 8});
    CollarGeometry geom = curved_collar(grid);
    LogSeriesForm ser;
    ser.grid = grid;
    ser.degree = 2;
    ser.shift = 0.0;
    ser.maxorder = 4;
    ser.at(0, 0).t = random_lowfreq_form(grid, 2, 2, 15);
    ser.at(2, 0).t = random_lowfreq_form(grid, 2, 2, 16);
    ser.at(2, 0).nrm = random_lowfreq_form(grid, 1, 2, 17);

    LogSeriesForm a = apply_delta(apply_laplacian(ser, geom), geom);
    LogSeriesForm b = apply_laplacian(apply_delta(ser, geom), geom);
    double scale = 1.0 + std::max(a.max_abs(), b.max_abs());
    for (const auto& [key, p] : a.coef) {
        const FormPair* q = b.find(key.first, key.second);
        if (!q) {
            CHECK(std::max(max_abs(p.t.v), max_abs(p.nrm.v)) < 1e-9 * scale);
            continue;
        }
        CHECK(max_diff(p.t.v, q->t.v) < 1e-9 * scale);
        CHECK(max_diff(p.nrm.v, q->nrm.v) < 1e-9 * scale);
    }
    for (const auto& [key, p] : b.coef)
        if (!a.find(key.first, key.second))
            CHECK(std::max(max_abs(p.t.v), max_abs(p.nrm.v)) < 1e-9 * scale);
}
