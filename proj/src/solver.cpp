#include "bg/solver.hpp"

#include "bg/exterior.hpp"

#include <cmath>
#include <string>

namespace bg {

namespace {

// Indicial factors of (Delta - lambda) at absolute power s on degree k.
double indicial_t(double s, int n, int k, double lambda) {
    return s * (n - 2 * k - s) - lambda;
}
double indicial_n(double s, int n, int k, double lambda) {
    return s * (n - 2 * k + 2 - s) - lambda;
}

// Residual coefficient (zero form if absent).
FormField res_t(const LogSeriesForm& r, int j, const GridPtr& g, int deg) {
    const FormPair* p = r.find(j, 0);
    return p ? p->t : FormField(g, deg);
}
FormField res_n(const LogSeriesForm& r, int j, const GridPtr& g, int deg) {
    const FormPair* p = r.find(j, 0);
    return p ? p->nrm : FormField(g, deg - 1);
}

// Guard: every residual order that the solve was supposed to kill, and every
// log coefficient, must be negligible relative to the solution size.
void check_residual(const LogSeriesForm& r, int t_solved_below, int n_solved_below,
                    double scale, double tol, const char* what) {
    for (const auto& [key, p] : r.coef) {
        auto [j, l] = key;
        double terr = (l > 0 || j < t_solved_below) ? max_abs(p.t.v) : 0.0;
        double nerr = (l > 0 || j < n_solved_below) ? max_abs(p.nrm.v) : 0.0;
        if (std::max(terr, nerr) > tol * scale)
            throw guard_error(std::string(what) + ": residual " +
                              std::to_string(std::max(terr, nerr)) + " at order " +
                              std::to_string(j) + " log^" + std::to_string(l) +
                              " exceeds guard tolerance");
    }
}

} // namespace

AbsoluteSolution solve_absolute_series(const CollarGeometry& geom, const FormField& w0,
                                       int ell, const FormField* vt, double guard_tol) {
    const int n = geom.n;
    const int k = w0.degree;
    if (ell < 1 || ell > n / 2 - k)
        throw std::invalid_argument("solve_absolute_series: need 1 <= l <= n/2-k");
    const double alpha = n / 2.0 - k - ell;
    const double lambda = (n / 2.0 - k + ell) * (n / 2.0 - k - ell);

    AbsoluteSolution sol;
    sol.k = k;
    sol.ell = ell;
    sol.lambda = lambda;
    LogSeriesForm& ser = sol.series;
    ser.grid = geom.grid;
    ser.degree = k;
    ser.shift = alpha;
    ser.maxorder = 2 * ell + 2;
    ser.at(0, 0).t = w0;

    for (int j = 2; j <= 2 * ell; j += 2) {
        LogSeriesForm r = apply_laplacian(ser, geom, lambda);
        const double s = alpha + j;
        FormPair& c = ser.at(j, 0);
        FormField rn = res_n(r, j, geom.grid, k);
        if (!rn.empty()) {
            c.nrm = std::move(rn);
            scale_inplace(c.nrm.v, -1.0 / indicial_n(s, n, k, lambda));
        }
        if (j < 2 * ell) {
            FormField rt = res_t(r, j, geom.grid, k);
            if (!c.nrm.empty()) {
                FormField dc = exterior_derivative(c.nrm);
                axpy(2.0 * ((k + 1) % 2 ? -1.0 : 1.0), dc.v, rt.v);
            }
            scale_inplace(rt.v, -1.0 / indicial_t(s, n, k, lambda));
            c.t = std::move(rt);
        } else if (vt) {
            if (vt->degree != k) throw std::invalid_argument("solve_absolute_series: vt degree");
            c.t = *vt;
        }
    }

    LogSeriesForm r = apply_laplacian(ser, geom, lambda);
    double scale = 1.0 + ser.max_abs();
    check_residual(r, 2 * ell, 2 * ell + 2, scale, guard_tol, "absolute series");
    return sol;
}

FormField operator_Lk_ell(const CollarGeometry& geom, const FormField& w0, int ell) {
    AbsoluteSolution sol = solve_absolute_series(geom, w0, ell);
    LogSeriesForm r = apply_laplacian(sol.series, geom, sol.lambda);
    FormField L = res_t(r, 2 * ell, geom.grid, w0.degree);
    scale_inplace(L.v, 1.0 / (2.0 * ell));
    return L;
}

BGOperatorSet absolute_operators(const CollarGeometry& geom, const FormField& w0,
                                 const FormField* vt, double guard_tol) {
    const int n = geom.n;
    const int k = w0.degree;
    if (k >= n / 2) throw std::invalid_argument("absolute_operators: need k < n/2");
    const int ell = n / 2 - k; // shift 0, lambda 0
    AbsoluteSolution sol = solve_absolute_series(geom, w0, ell, vt, guard_tol);

    BGOperatorSet out;
    LogSeriesForm r = apply_laplacian(sol.series, geom, 0.0);
    out.L = res_t(r, 2 * ell, geom.grid, k);
    scale_inplace(out.L.v, 1.0 / (n - 2 * k));
    out.B = res_n(r, 2 * ell + 2, geom.grid, k);
    if (k % 2 == 0) scale_inplace(out.B.v, -1.0); // i_{x dx} sign (-1)^{k-1}

    LogSeriesForm ds = apply_d(sol.series);
    out.D = res_n(ds, 2 * ell, geom.grid, k + 1);
    if (k % 2 != 0) scale_inplace(out.D.v, -1.0); // (-1)^k

    LogSeriesForm dl = apply_delta(sol.series, geom);
    out.C = res_t(dl, 2 * ell + 2, geom.grid, k - 1);

    out.G = FormField(geom.grid, k - 1);
    axpy(1.0, out.B.v, out.G.v);
    axpy(-2.0, out.C.v, out.G.v);
    scale_inplace(out.G.v, ((k + 1) % 2 ? -1.0 : 1.0) / (n - 2 * k));
    return out;
}

RelativeSolution solve_relative_series(const CollarGeometry& geom, const FormField& w0,
                                       const FormField* vt, double guard_tol) {
    const int n = geom.n;
    const int K = w0.degree + 1;
    if (K < 1 || K > n / 2 - 1)
        throw std::invalid_argument("solve_relative_series: need 0 <= deg(w0) <= n/2-2");
    const int top = n - 2 * K;

    RelativeSolution sol;
    sol.K = K;
    LogSeriesForm& ser = sol.series;
    ser.grid = geom.grid;
    ser.degree = K;
    ser.shift = 0.0;
    ser.maxorder = top + 2;
    ser.at(0, 0).nrm = w0;

    for (int j = 2; j <= top; j += 2) {
        LogSeriesForm r = apply_laplacian(ser, geom, 0.0);
        FormPair& c = ser.at(j, 0);
        FormField rn = res_n(r, j, geom.grid, K);
        c.nrm = std::move(rn);
        scale_inplace(c.nrm.v, -1.0 / indicial_n(j, n, K, 0.0));
        if (j < top) {
            FormField rt = res_t(r, j, geom.grid, K);
            FormField dc = exterior_derivative(c.nrm);
            axpy(2.0 * ((K + 1) % 2 ? -1.0 : 1.0), dc.v, rt.v);
            scale_inplace(rt.v, -1.0 / indicial_t(j, n, K, 0.0));
            c.t = std::move(rt);
        } else if (vt) {
            if (vt->degree != K) throw std::invalid_argument("solve_relative_series: vt degree");
            c.t = *vt;
        }
    }

    // The tangential obstruction at order n-2K must vanish identically for
    // the relative problem (the solution stays log-free).
    LogSeriesForm r = apply_laplacian(ser, geom, 0.0);
    double scale = 1.0 + ser.max_abs();
    check_residual(r, top + 2, top + 2, scale, guard_tol, "relative series");
    return sol;
}

RelOperatorSet relative_operators(const CollarGeometry& geom, const FormField& w0,
                                  const FormField* vt, double guard_tol) {
    const int n = geom.n;
    const int p = w0.degree;
    RelativeSolution sol = solve_relative_series(geom, w0, vt, guard_tol);
    const int K = sol.K;
    const int top = n - 2 * K;

    RelOperatorSet out;
    LogSeriesForm r = apply_laplacian(sol.series, geom, 0.0);
    out.Bp = res_n(r, top + 2, geom.grid, K);
    if (p % 2 != 0) scale_inplace(out.Bp.v, -1.0); // (-1)^{K-1} = (-1)^p

    LogSeriesForm ds = apply_d(sol.series);
    out.Dp = res_n(ds, top, geom.grid, K + 1);
    if (p % 2 == 0) scale_inplace(out.Dp.v, -1.0); // (-1)^K = (-1)^{p+1}

    // Q_p = (-1)^p/(n-2p) (B'_p - 2 delta_0 D'_p/(n-2p-2)); the top case
    // p = n/2-1 is excluded by the solve range.
    FormField dD = codifferential(out.Dp, geom.h0);
    out.Q = FormField(geom.grid, p);
    axpy(1.0, out.Bp.v, out.Q.v);
    axpy(-2.0 / (n - 2 * p - 2), dD.v, out.Q.v);
    scale_inplace(out.Q.v, (p % 2 ? -1.0 : 1.0) / (n - 2 * p));
    return out;
}

FormField operator_G_top(const FormField& w0, const Metric& h0) {
    const int n = w0.grid->n;
    if (w0.degree != n / 2) throw std::invalid_argument("operator_G_top: need degree n/2");
    FormField out = codifferential(w0, h0);
    if ((n / 2 + 1) % 2 != 0) scale_inplace(out.v, -1.0);
    return out;
}

} // namespace bg
