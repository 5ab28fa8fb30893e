#include "bg/exterior.hpp"

#include "bg/fft.hpp"
#include "bg/linalg.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace bg {

FormField exterior_derivative(const FormField& w) {
    const GridPtr& g = w.grid;
    const int k = w.degree;
    if (k >= g->n) throw std::invalid_argument("exterior_derivative: top-degree input");
    FormField out(g, k + 1);
    if (k < 0) return out;
    std::vector<double> scratch(g->npts);
    for (const DTerm& t : d_pattern(g->n, k)) {
        spectral_partial_raw(*g, w.comp(t.in), scratch.data(), t.axis, 1);
        double* o = out.comp(t.out);
        for (std::size_t p = 0; p < g->npts; ++p) o[p] += t.sign * scratch[p];
    }
    return out;
}

namespace {

// Apply Lambda^k(h^{-1}) (index raising on k-forms) for a general metric.
FormField raise_indices_general(const FormField& w, const Metric& m) {
    const GridPtr& g = w.grid;
    const int n = g->n;
    const int k = w.degree;
    const long nc = w.ncomp();
    FormField out(g, k);
    if (k == 0) {
        out.v = w.v;
        return out;
    }
    const auto& list = multi_indices(n, k);
    std::vector<const double*> hinv(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) hinv[i * n + j] = m.h_inv.comp(i, j);
    std::array<double, 64> gm{};
    for (std::size_t p = 0; p < g->npts; ++p) {
        for (long I = 0; I < nc; ++I) {
            double s = 0.0;
            for (long M = 0; M < nc; ++M) {
                for (int r = 0; r < k; ++r)
                    for (int c = 0; c < k; ++c)
                        gm[r * k + c] = hinv[list[I][r] * n + list[M][c]][p];
                s += small_det(k, gm.data()) * w.comp(M)[p];
            }
            out.comp(I)[p] = s;
        }
    }
    return out;
}

} // namespace

FormField hodge_star(const FormField& w, const Metric& m) {
    const GridPtr& g = w.grid;
    const int n = g->n;
    const int k = w.degree;
    if (k < 0 || k > n) throw std::invalid_argument("hodge_star: bad degree");
    FormField out(g, n - k);

    const auto& pat = flat_star_pattern(n, k);
    if (m.kind == Metric::Kind::General) {
        FormField raised = raise_indices_general(w, m);
        for (const StarTerm& t : pat) {
            const double* in = raised.comp(t.in);
            double* o = out.comp(t.out);
            const double* sd = m.sqrt_det.v.data();
            for (std::size_t p = 0; p < g->npts; ++p) o[p] = t.sign * sd[p] * in[p];
        }
        return out;
    }

    // Flat / conformal: star = e^{(n-2k) phi} * flat star.
    if (m.kind == Metric::Kind::Flat || n == 2 * k) {
        for (const StarTerm& t : pat) {
            const double* in = w.comp(t.in);
            double* o = out.comp(t.out);
            for (std::size_t p = 0; p < g->npts; ++p) o[p] = t.sign * in[p];
        }
        return out;
    }
    std::vector<double> weight(g->npts);
    for (std::size_t p = 0; p < g->npts; ++p)
        weight[p] = std::exp((n - 2 * k) * m.phi.v[p]);
    for (const StarTerm& t : pat) {
        const double* in = w.comp(t.in);
        double* o = out.comp(t.out);
        for (std::size_t p = 0; p < g->npts; ++p) o[p] = t.sign * weight[p] * in[p];
    }
    return out;
}

FormField hodge_star_inverse(const FormField& w, const Metric& m, int source_degree) {
    const int n = w.grid->n;
    const int k = source_degree; // star_k maps k -> n-k; w has degree n-k
    if (w.degree != n - k) throw std::invalid_argument("hodge_star_inverse: degree mismatch");
    FormField out = hodge_star(w, m);
    if (((static_cast<long>(k) * (n - k)) % 2) != 0) scale_inplace(out.v, -1.0);
    return out;
}

FormField codifferential(const FormField& w, const Metric& m) {
    const int k = w.degree;
    if (k < 1) throw std::invalid_argument("codifferential: degree-0 input");
    FormField a = hodge_star(w, m);
    FormField b = exterior_derivative(a);
    FormField c = hodge_star_inverse(b, m, k - 1);
    if (k % 2 != 0) scale_inplace(c.v, -1.0); // (-1)^k
    return c;
}

FormField form_laplacian(const FormField& w, const Metric& m) {
    const int k = w.degree;
    const int n = w.grid->n;
    FormField out(w.grid, k);
    if (k < n) {
        FormField dd = codifferential(exterior_derivative(w), m);
        axpy(1.0, dd.v, out.v);
    }
    if (k > 0) {
        FormField dc = exterior_derivative(codifferential(w, m));
        axpy(1.0, dc.v, out.v);
    }
    return out;
}

FormField interior_product(const std::vector<ScalarField>& X, const FormField& w) {
    const GridPtr& g = w.grid;
    const int k = w.degree;
    if (static_cast<int>(X.size()) != g->n)
        throw std::invalid_argument("interior_product: need n vector components");
    FormField out(g, k - 1);
    if (k < 1) return out;
    for (const ITerm& t : interior_pattern(g->n, k)) {
        const double* xv = X[t.axis].v.data();
        const double* in = w.comp(t.in);
        double* o = out.comp(t.out);
        for (std::size_t p = 0; p < g->npts; ++p) o[p] += t.sign * xv[p] * in[p];
    }
    return out;
}

FormField EndomorphismField::apply(const FormField& w) const {
    if (w.degree != degree || w.grid != grid)
        throw std::invalid_argument("EndomorphismField: grid/degree mismatch");
    FormField out(grid, degree);
    if (!c0.empty())
        for (long c = 0; c < w.ncomp(); ++c) {
            const double* in = w.comp(c);
            double* o = out.comp(c);
            for (std::size_t p = 0; p < grid->npts; ++p) o[p] += c0.v[p] * in[p];
        }
    if (!H.empty()) {
        const int n = grid->n;
        for (const JTerm& t : j_pattern(n, degree)) {
            const double* hf = H.data() + static_cast<std::size_t>(t.a * n + t.b) * grid->npts;
            pmadd(grid->npts, static_cast<double>(t.sign), hf, w.comp(t.in), out.comp(t.out));
        }
    }
    return out;
}

EndomorphismField j_operator(const GridPtr& grid, std::vector<double> endo, int k) {
    if (endo.size() != static_cast<std::size_t>(grid->n) * grid->n * grid->npts)
        throw std::invalid_argument("j_operator: endomorphism size mismatch");
    EndomorphismField e;
    e.grid = grid;
    e.degree = k;
    e.H = std::move(endo);
    return e;
}

EndomorphismField j_operator(const Sym2Field& T, const Metric& m, int k) {
    const GridPtr& grid = T.grid;
    const int n = grid->n;
    std::vector<double> endo(static_cast<std::size_t>(n) * n * grid->npts, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double* o = endo.data() + static_cast<std::size_t>(a * n + b) * grid->npts;
            for (int c = 0; c < n; ++c)
                pmadd(grid->npts, 1.0, m.h_inv.comp(a, c), T.comp(c, b), o);
        }
    return j_operator(grid, std::move(endo), k);
}

ScalarField trace_endo(const GridPtr& grid, const std::vector<double>& endo) {
    ScalarField out(grid);
    const int n = grid->n;
    for (int a = 0; a < n; ++a) {
        const double* d = endo.data() + static_cast<std::size_t>(a * n + a) * grid->npts;
        for (std::size_t p = 0; p < grid->npts; ++p) out.v[p] += d[p];
    }
    return out;
}

} // namespace bg
