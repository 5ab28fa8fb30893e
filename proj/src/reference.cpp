#include "bg/reference.hpp"

#include "bg/exterior.hpp"
#include "bg/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace bg {

namespace {

// (h^{-1} T)^a_j into tmp (length npts).
void mixed_comp(const Sym2Field& T, const Metric& m, int a, int j, std::vector<double>& tmp) {
    const std::size_t npts = T.grid->npts;
    tmp.assign(npts, 0.0);
    for (int i = 0; i < T.grid->n; ++i)
        pmadd(npts, 1.0, m.h_inv.comp(a, i), T.comp(i, j), tmp.data());
}

// alpha*A + beta*s*h accumulated into out.
void sym2_accum(Sym2Field& out, double alpha, const Sym2Field& A) {
    axpy(alpha, A.v, out.v);
}
void sym2_accum_scalar_h(Sym2Field& out, double beta, const ScalarField& s, const Metric& m) {
    const std::size_t npts = out.grid->npts;
    const int n = out.grid->n;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            pmadd(npts, beta, s.v.data(), m.h.comp(i, j), out.comp(i, j));
}
// alpha * s * A accumulated into out (pointwise scalar times tensor).
void sym2_accum_scalar_T(Sym2Field& out, double alpha, const ScalarField& s, const Sym2Field& A) {
    const std::size_t npts = out.grid->npts;
    const int n = out.grid->n;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            pmadd(npts, alpha, s.v.data(), A.comp(i, j), out.comp(i, j));
}

FormField d_of(const FormField& w) { return exterior_derivative(w); }

} // namespace

ScalarField sym2_trace(const Sym2Field& T, const Metric& m) {
    ScalarField out(T.grid);
    const std::size_t npts = T.grid->npts;
    for (int i = 0; i < T.grid->n; ++i)
        for (int j = 0; j < T.grid->n; ++j)
            pmadd(npts, 1.0, m.h_inv.comp(i, j), T.comp(i, j), out.v.data());
    return out;
}

ScalarField sym2_inner(const Sym2Field& A, const Sym2Field& B, const Metric& m) {
    const int n = A.grid->n;
    const std::size_t npts = A.grid->npts;
    ScalarField out(A.grid);
    std::vector<double> u, w;
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j) {
            mixed_comp(A, m, a, j, u); // (h^{-1}A)^a_j
            mixed_comp(B, m, j, a, w); // (h^{-1}B)^j_a
            pmadd(npts, 1.0, u.data(), w.data(), out.v.data());
        }
    return out;
}

Sym2Field sym2_compose(const Sym2Field& A, const Sym2Field& B, const Metric& m) {
    const int n = A.grid->n;
    const std::size_t npts = A.grid->npts;
    Sym2Field out(A.grid);
    std::vector<double> tmp;
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j) {
            mixed_comp(B, m, a, j, tmp); // (h^{-1}B)^a_j
            for (int i = 0; i <= j; ++i)
                pmadd(npts, 1.0, A.comp(i, a), tmp.data(), out.comp(i, j));
        }
    return out;
}

Sym2Field hessian(const ScalarField& f, const CurvatureData& curv) {
    const GridPtr& grid = f.grid;
    const int n = grid->n;
    const std::size_t npts = grid->npts;
    std::vector<ScalarField> df(n);
    for (int c = 0; c < n; ++c) df[c] = spectral_partial(f, c);
    Sym2Field out(grid);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            ScalarField dij = spectral_partial(df[i], j);
            double* o = out.comp(i, j);
            for (std::size_t p = 0; p < npts; ++p) o[p] = dij.v[p];
            for (int c = 0; c < n; ++c)
                pmadd(npts, -1.0, curv.christoffel.comp(c, i, j), df[c].v.data(), o);
        }
    return out;
}

ScalarField scalar_laplacian(const ScalarField& f, const Metric& m) {
    FormField f0(f.grid, 0);
    f0.v = f.v;
    FormField lap = codifferential(exterior_derivative(f0), m);
    ScalarField out(f.grid);
    out.v = lap.v;
    return out;
}

FormField scalar_mul(const ScalarField& f, const FormField& w, double a) {
    FormField out(w.grid, w.degree);
    const std::size_t npts = w.grid->npts;
    for (long c = 0; c < w.ncomp(); ++c)
        pmadd(npts, a, f.v.data(), w.comp(c), out.comp(c));
    return out;
}

FormField apply_jsharp(const Sym2Field& T, const Metric& m, const FormField& w) {
    FormField out = j_operator(T, m, w.degree).apply(w);
    scale_inplace(out.v, 2.0);
    ScalarField tr = sym2_trace(T, m);
    const std::size_t npts = w.grid->npts;
    for (long c = 0; c < w.ncomp(); ++c)
        pmadd(npts, -1.0, tr.v.data(), w.comp(c), out.comp(c));
    return out;
}

FormField ref_L1_generic(const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    const int n = w.grid->n;
    const int k = w.degree;
    FormField out = codifferential(exterior_derivative(w), m);
    scale_inplace(out.v, 0.5);
    if (k > 0) {
        FormField dd = exterior_derivative(codifferential(w, m));
        axpy((n - 2.0 * k - 2.0) / (2.0 * (n - 2.0 * k + 2.0)), dd.v, out.v);
    }
    // Scal coefficient (n+2k-2)(n-2k-2)/(8(n-1)(n-2)): equivalent to the
    // collar-block form -(n-2k-2)/4 (2j(P) - tr P) plus the dd shift, and
    // pinned against the solver on curved metrics for k > 0.
    const double cs = (n + 2.0 * k - 2.0) * (n - 2.0 * k - 2.0) / (8.0 * (n - 1.0) * (n - 2.0));
    FormField sw = scalar_mul(curv.scal, w, cs);
    axpy(1.0, sw.v, out.v);
    FormField jw = j_operator(curv.ricci, m, k).apply(w);
    axpy(-(n - 2.0 * k - 2.0) / (2.0 * (n - 2.0)), jw.v, out.v);
    return out;
}

FormField ref_L2_generic(const CurvatureData& curv, const FormField& w, bool sharp_mixed) {
    const Metric& m = curv.metric;
    const GridPtr& grid = w.grid;
    const int n = grid->n;
    const int k = w.degree;
    const double mm = n - 2.0 * k;
    const double a1 = (mm - 4.0) / (mm + 4.0); // multiplies the dd-side terms

    FormField acc(grid, k);
    // (delta d)^2
    FormField u = codifferential(exterior_derivative(w), m);
    u = codifferential(exterior_derivative(u), m);
    axpy(1.0, u.v, acc.v);
    if (k > 0) {
        // (m-4)/(m+4) (d delta)^2
        FormField v = exterior_derivative(codifferential(w, m));
        v = exterior_derivative(codifferential(v, m));
        axpy(a1, v.v, acc.v);
        // 2 (m-4)/(m+4) d j#(P) delta
        FormField s = codifferential(w, m);
        s = apply_jsharp(curv.schouten, m, s);
        s = exterior_derivative(s);
        axpy(2.0 * a1, s.v, acc.v);
    }
    // -2 delta j#(P) d
    FormField t = exterior_derivative(w);
    t = apply_jsharp(curv.schouten, m, t);
    t = codifferential(t, m);
    axpy(-2.0, t.v, acc.v);
    // -(m-4)/2 (j#(P) D + D j#(P))   (left slot j vs j# toggled by caller)
    FormField lw = form_laplacian(w, m);
    FormField left = sharp_mixed ? apply_jsharp(curv.schouten, m, lw)
                                 : j_operator(curv.schouten, m, k).apply(lw);
    FormField right = form_laplacian(apply_jsharp(curv.schouten, m, w), m);
    axpy(-(mm - 4.0) / 2.0, left.v, acc.v);
    axpy(-(mm - 4.0) / 2.0, right.v, acc.v);
    // (m-4) j#(P^2 + B/(n-4))
    Sym2Field PP = sym2_compose(curv.schouten, curv.schouten, m);
    if (n > 4) sym2_accum(PP, 1.0 / (n - 4.0), curv.bach);
    FormField jp = apply_jsharp(PP, m, w);
    axpy(mm - 4.0, jp.v, acc.v);
    // (m-4) m/4 j#(P)^2
    FormField j2 = apply_jsharp(curv.schouten, m, apply_jsharp(curv.schouten, m, w));
    axpy((mm - 4.0) * mm / 4.0, j2.v, acc.v);

    scale_inplace(acc.v, -1.0 / 16.0);
    return acc;
}

FormField ref_Q_crit(const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    const int n = w.grid->n;
    if (w.degree != n / 2 - 1) throw std::invalid_argument("ref_Q_crit: degree");
    FormField out = form_laplacian(w, m);
    scale_inplace(out.v, 0.5);
    FormField jw = j_operator(curv.ricci, m, w.degree).apply(w);
    axpy(-2.0 / (n - 2.0), jw.v, out.v);
    FormField sw = scalar_mul(curv.scal, w, 1.0 / (n - 1.0));
    axpy(1.0, sw.v, out.v);
    return out;
}

FormField ref_G_crit(const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    const int n = w.grid->n;
    if (w.degree != n / 2 - 1) throw std::invalid_argument("ref_G_crit: degree");
    FormField out = codifferential(exterior_derivative(codifferential(w, m)), m);
    scale_inplace(out.v, 0.25);
    FormField aw = a_operator(curv, w.degree).apply(w);
    FormField daw = codifferential(aw, m);
    axpy(-0.5, daw.v, out.v);
    if ((n / 2 + 1) % 2 != 0) scale_inplace(out.v, -1.0);
    return out;
}

FormField ref_B_crit(const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    FormField out = codifferential(exterior_derivative(codifferential(w, m)), m);
    scale_inplace(out.v, -0.5);
    FormField aw = a_operator(curv, w.degree).apply(w);
    FormField daw = codifferential(aw, m);
    axpy(2.0, daw.v, out.v);
    return out;
}

FormField ref_C_crit(const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    FormField aw = a_operator(curv, w.degree).apply(w);
    FormField out = codifferential(aw, m);
    scale_inplace(out.v, 0.5);
    return out;
}

FormField ref_L_subcrit(const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    const int n = w.grid->n;
    if (w.degree != n / 2 - 2) throw std::invalid_argument("ref_L_subcrit: degree");
    FormField u = exterior_derivative(w);
    FormField t = exterior_derivative(codifferential(u, m));
    scale_inplace(t.v, 1.0 / 16.0);
    FormField ju = j_operator(curv.ricci, m, u.degree).apply(u);
    axpy(-1.0 / (4.0 * (n - 2.0)), ju.v, t.v);
    FormField su = scalar_mul(curv.scal, u, 1.0 / (8.0 * (n - 1.0)));
    axpy(1.0, su.v, t.v);
    FormField out = codifferential(t, m);
    scale_inplace(out.v, -1.0);
    return out;
}

namespace {

// Sixth-order bracket R on 1-forms in dimension 6:
// R = D^2 - (d delta/2) j(Ric - (3/10)Scal h) - j(2Ric - (3/5)Scal h) D
//     - d Scal delta / 20 + j(2B - tr(B) h + (3/4)Ric^2 - (16/5)Scal Ric
//                             + (449/100)Scal^2 h).
FormField dim6_bracket(const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    const GridPtr& grid = w.grid;
    if (grid->n != 6 || w.degree != 1) throw std::invalid_argument("dim6_bracket: need a 1-form on T^6");

    FormField acc = form_laplacian(form_laplacian(w, m), m);

    Sym2Field T1(grid); // Ric - (3/10) Scal h
    sym2_accum(T1, 1.0, curv.ricci);
    sym2_accum_scalar_h(T1, -0.3, curv.scal, m);
    FormField t2 = j_operator(T1, m, 1).apply(w);
    t2 = exterior_derivative(codifferential(t2, m));
    axpy(-0.5, t2.v, acc.v);

    Sym2Field T2(grid); // 2 Ric - (3/5) Scal h
    sym2_accum(T2, 2.0, curv.ricci);
    sym2_accum_scalar_h(T2, -0.6, curv.scal, m);
    FormField t3 = j_operator(T2, m, 1).apply(form_laplacian(w, m));
    axpy(-1.0, t3.v, acc.v);

    FormField dw = codifferential(w, m); // 0-form
    FormField t4 = exterior_derivative(scalar_mul(curv.scal, dw));
    axpy(-1.0 / 20.0, t4.v, acc.v);

    Sym2Field T3(grid); // 2B - tr(B) h + (3/4)Ric^2 - (16/5)Scal Ric + (449/100)Scal^2 h
    sym2_accum(T3, 2.0, curv.bach);
    ScalarField trB = sym2_trace(curv.bach, m);
    sym2_accum_scalar_h(T3, -1.0, trB, m);
    sym2_accum(T3, 0.75, sym2_compose(curv.ricci, curv.ricci, m));
    sym2_accum_scalar_T(T3, -16.0 / 5.0, curv.scal, curv.ricci);
    ScalarField s2(grid);
    pmadd(grid->npts, 1.0, curv.scal.v.data(), curv.scal.v.data(), s2.v.data());
    sym2_accum_scalar_h(T3, 4.49, s2, m);
    FormField t5 = j_operator(T3, m, 1).apply(w);
    axpy(1.0, t5.v, acc.v);

    return acc;
}

} // namespace

FormField ref_Q1_dim6(const CurvatureData& curv, const FormField& w) {
    // Prefactor pinned by the flat limit Q_1 -> -D^2/16 of the extraction
    // convention (and by G_1 = -delta Q_1/4, L_0 = -delta Q_1 d/24 below).
    FormField out = dim6_bracket(curv, w);
    scale_inplace(out.v, -1.0 / 16.0);
    return out;
}

FormField ref_G1_dim6(const CurvatureData& curv, const FormField& w) {
    FormField out = codifferential(dim6_bracket(curv, w), curv.metric);
    scale_inplace(out.v, 1.0 / 64.0);
    return out;
}

FormField ref_L0_dim6(const CurvatureData& curv, const FormField& w) {
    FormField out = codifferential(dim6_bracket(curv, d_of(w)), curv.metric);
    scale_inplace(out.v, 1.0 / 384.0);
    return out;
}

ScalarField ref_Q0_dim4(const CurvatureData& curv) {
    const Metric& m = curv.metric;
    ScalarField out = scalar_laplacian(curv.scal, m);
    ScalarField ric2 = sym2_inner(curv.ricci, curv.ricci, m);
    axpy(-3.0, ric2.v, out.v);
    pmadd(out.grid->npts, 1.0, curv.scal.v.data(), curv.scal.v.data(), out.v.data());
    scale_inplace(out.v, -1.0 / 24.0);
    return out;
}

ScalarField ref_Q0_dim6(const CurvatureData& curv) {
    const Metric& m = curv.metric;
    const GridPtr& grid = curv.scal.grid;
    const std::size_t npts = grid->npts;

    ScalarField ds = scalar_laplacian(curv.scal, m);
    ScalarField out = scalar_laplacian(ds, m); // D^2 Scal
    pmadd(npts, 1.0, curv.scal.v.data(), ds.v.data(), out.v.data()); // Scal D Scal
    ScalarField rh = sym2_inner(curv.ricci, hessian(curv.scal, curv), m);
    axpy(2.0, rh.v, out.v);
    ScalarField trB = sym2_trace(curv.bach, m);
    axpy(-20.0, scalar_laplacian(trB, m).v, out.v);
    ScalarField p2 = sym2_inner(curv.schouten, curv.schouten, m);
    axpy(-40.0, scalar_laplacian(p2, m).v, out.v);
    for (std::size_t p = 0; p < npts; ++p) {
        double s = curv.scal.v[p];
        out.v[p] += 0.08 * s * s * s - 12.0 * s * trB.v[p];
    }
    ScalarField p3 = sym2_inner(sym2_compose(curv.schouten, curv.schouten, m), curv.schouten, m);
    axpy(-80.0, p3.v, out.v);
    ScalarField pb = sym2_inner(curv.schouten, curv.bach, m);
    axpy(-80.0, pb.v, out.v);
    scale_inplace(out.v, 1.0 / 640.0);
    return out;
}

namespace {

// (D - a j(Ric) + b Scal) w with the curved Laplacian.
FormField yamabe_core(const CurvatureData& curv, const FormField& w, double a, double b) {
    const Metric& m = curv.metric;
    FormField out = form_laplacian(w, m);
    FormField jw = j_operator(curv.ricci, m, w.degree).apply(w);
    axpy(-a, jw.v, out.v);
    FormField sw = scalar_mul(curv.scal, w, b);
    axpy(1.0, sw.v, out.v);
    return out;
}

FormField as_form(const ScalarField& s, const FormField& w) {
    // pointwise multiplication of a 0-form by the scalar invariant
    return scalar_mul(s, w);
}

} // namespace

FormField ref_dim4(const std::string& name, const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    if (w.grid->n != 4) throw std::invalid_argument("ref_dim4: need n = 4");
    if (name == "L1") {
        FormField out = codifferential(exterior_derivative(w), m);
        scale_inplace(out.v, 0.5);
        return out;
    }
    if (name == "G1") {
        FormField out = codifferential(yamabe_core(curv, w, 2.0, 2.0 / 3.0), m);
        scale_inplace(out.v, -0.25);
        return out;
    }
    if (name == "Q1") {
        FormField out = yamabe_core(curv, w, 2.0, 2.0 / 3.0);
        scale_inplace(out.v, 0.5);
        return out;
    }
    if (name == "L0") {
        FormField out =
            codifferential(yamabe_core(curv, exterior_derivative(w), 2.0, 2.0 / 3.0), m);
        scale_inplace(out.v, -1.0 / 16.0);
        return out;
    }
    if (name == "Q0") return as_form(ref_Q0_dim4(curv), w);
    if (name == "G0") return FormField(w.grid, -1);
    throw std::invalid_argument("ref_dim4: unknown operator " + name);
}

FormField ref_dim6(const std::string& name, const CurvatureData& curv, const FormField& w) {
    const Metric& m = curv.metric;
    if (w.grid->n != 6) throw std::invalid_argument("ref_dim6: need n = 6");
    if (name == "L2") {
        FormField out = codifferential(exterior_derivative(w), m);
        scale_inplace(out.v, 0.5);
        return out;
    }
    if (name == "G2") {
        FormField out = codifferential(yamabe_core(curv, w, 1.0, 0.4), m);
        scale_inplace(out.v, 0.25);
        return out;
    }
    if (name == "Q2") {
        FormField out = yamabe_core(curv, w, 1.0, 0.4);
        scale_inplace(out.v, 0.5);
        return out;
    }
    if (name == "L1") {
        FormField out = codifferential(yamabe_core(curv, exterior_derivative(w), 1.0, 0.4), m);
        scale_inplace(out.v, -1.0 / 16.0);
        return out;
    }
    if (name == "G1") return ref_G1_dim6(curv, w);
    if (name == "Q1") return ref_Q1_dim6(curv, w);
    if (name == "L0") return ref_L0_dim6(curv, w);
    if (name == "Q0") return as_form(ref_Q0_dim6(curv), w);
    if (name == "G0") return FormField(w.grid, -1);
    throw std::invalid_argument("ref_dim6: unknown operator " + name);
}

FormField ref_generic(const std::string& name, const CurvatureData& curv, const FormField& w) {
    if (name == "L1") return ref_L1_generic(curv, w);
    if (name == "L2") return ref_L2_generic(curv, w);
    if (name == "G") return ref_G_crit(curv, w);
    if (name == "Q") return ref_Q_crit(curv, w);
    if (name == "B") return ref_B_crit(curv, w);
    if (name == "C") return ref_C_crit(curv, w);
    if (name == "Lsub") return ref_L_subcrit(curv, w);
    throw std::invalid_argument("ref_generic: unknown operator " + name);
}

double coeff_ckl(int n, int k, int ell) {
    if (ell < 1) throw std::invalid_argument("coeff_ckl: need l >= 1");
    double fact = 1.0;
    for (int i = 2; i < ell; ++i) fact *= i;       // (l-1)!
    double fact2 = 1.0;
    for (int i = 2; i <= ell + 1; ++i) fact2 *= i; // (l+1)!
    return std::pow(-4.0, ell) * fact * fact2 * (k - n / 2.0 - ell);
}

double coeff_ck(int n, int k) {
    int q = n / 2 - k;
    double f = 1.0;
    for (int i = 2; i <= q; ++i) f *= i;
    double sgn = (q - 1) % 2 == 0 ? 1.0 : -1.0;
    return sgn * std::pow(2.0, n - 2 * k + 1) * f * f * (q + 1);
}

} // namespace bg
