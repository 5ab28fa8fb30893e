#include "bg/metric.hpp"

#include "bg/linalg.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace bg {

namespace {

// Dense symmetric inverse + determinant at one point (n <= 8).
void invert_point(int n, const double* a, double* inv, double& det) {
    std::array<double, 64> m{}, id{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m[i * n + j] = a[i * n + j];
            id[i * n + j] = (i == j) ? 1.0 : 0.0;
        }
    det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
        if (piv != c) {
            for (int j = 0; j < n; ++j) {
                std::swap(m[c * n + j], m[piv * n + j]);
                std::swap(id[c * n + j], id[piv * n + j]);
            }
            det = -det;
        }
        double d = m[c * n + c];
        if (d == 0.0) throw std::runtime_error("metric: singular at a grid point");
        det *= d;
        for (int j = 0; j < n; ++j) {
            m[c * n + j] /= d;
            id[c * n + j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = m[r * n + c];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m[r * n + j] -= f * m[c * n + j];
                id[r * n + j] -= f * id[c * n + j];
            }
        }
    }
    for (int i = 0; i < n * n; ++i) inv[i] = id[i];
}

} // namespace

Metric flat_metric(const GridPtr& grid) {
    Metric m;
    m.kind = Metric::Kind::Flat;
    m.grid = grid;
    m.h = Sym2Field(grid);
    m.h_inv = Sym2Field(grid);
    m.sqrt_det = ScalarField(grid, 1.0);
    for (int i = 0; i < grid->n; ++i) {
        double* hi = m.h.comp(i, i);
        double* gi = m.h_inv.comp(i, i);
        for (std::size_t p = 0; p < grid->npts; ++p) hi[p] = gi[p] = 1.0;
    }
    return m;
}

Metric conformal_metric(const ScalarField& phi) {
    const GridPtr& grid = phi.grid;
    Metric m;
    m.kind = Metric::Kind::Conformal;
    m.grid = grid;
    m.phi = phi;
    m.h = Sym2Field(grid);
    m.h_inv = Sym2Field(grid);
    m.sqrt_det = ScalarField(grid);
    const int n = grid->n;
    for (std::size_t p = 0; p < grid->npts; ++p)
        m.sqrt_det.v[p] = std::exp(n * phi.v[p]);
    for (int i = 0; i < n; ++i) {
        double* hi = m.h.comp(i, i);
        double* gi = m.h_inv.comp(i, i);
        for (std::size_t p = 0; p < grid->npts; ++p) {
            double e = std::exp(2.0 * phi.v[p]);
            hi[p] = e;
            gi[p] = 1.0 / e;
        }
    }
    return m;
}

Metric general_metric(Sym2Field h) {
    const GridPtr grid = h.grid;
    const int n = grid->n;
    Metric m;
    m.kind = Metric::Kind::General;
    m.grid = grid;
    m.h = std::move(h);
    m.h_inv = Sym2Field(grid);
    m.sqrt_det = ScalarField(grid);
    std::array<double, 64> a{}, inv{};
    for (std::size_t p = 0; p < grid->npts; ++p) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i * n + j] = m.h.comp(i, j)[p];
        double det = 0.0;
        invert_point(n, a.data(), inv.data(), det);
        if (det <= 0.0) throw std::runtime_error("general_metric: non-positive determinant");
        m.sqrt_det.v[p] = std::sqrt(det);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m.h_inv.comp(i, j)[p] = inv[i * n + j];
    }
    return m;
}

ScalarField fiber_inner(const FormField& a, const FormField& b, const Metric& m) {
    if (a.grid != b.grid || a.degree != b.degree)
        throw std::invalid_argument("fiber_inner: grid/degree mismatch");
    const GridPtr& grid = a.grid;
    const int k = a.degree;
    const long nc = a.ncomp();
    ScalarField out(grid);

    if (m.kind != Metric::Kind::General) {
        // <a,b> = e^{-2k phi} sum_I a_I b_I (flat: phi = 0)
        for (long c = 0; c < nc; ++c) pmadd(grid->npts, 1.0, a.comp(c), b.comp(c), out.v.data());
        if (m.kind == Metric::Kind::Conformal && k != 0)
            for (std::size_t p = 0; p < grid->npts; ++p)
                out.v[p] *= std::exp(-2.0 * k * m.phi.v[p]);
        return out;
    }

    // General metric: Gram determinants of h^{-1} sub-blocks per point.
    const auto& list = multi_indices(grid->n, k);
    std::vector<const double*> hinv(static_cast<std::size_t>(grid->n) * grid->n);
    for (int i = 0; i < grid->n; ++i)
        for (int j = 0; j < grid->n; ++j)
            hinv[i * grid->n + j] = m.h_inv.comp(i, j);
    std::array<double, 64> g{};
    for (std::size_t p = 0; p < grid->npts; ++p) {
        double s = 0.0;
        for (long I = 0; I < nc; ++I)
            for (long M = 0; M < nc; ++M) {
                for (int r = 0; r < k; ++r)
                    for (int c = 0; c < k; ++c)
                        g[r * k + c] = hinv[list[I][r] * grid->n + list[M][c]][p];
                s += a.comp(I)[p] * b.comp(M)[p] * small_det(k, g.data());
            }
        out.v[p] = s;
    }
    return out;
}

double quadrature_inner(const FormField& a, const FormField& b, const Metric& m) {
    ScalarField f = fiber_inner(a, b, m);
    double s = 0.0;
    for (std::size_t p = 0; p < a.grid->npts; ++p) s += f.v[p] * m.sqrt_det.v[p];
    return s * a.grid->cell_volume();
}

double l2_norm(const FormField& a, const Metric& m) {
    return std::sqrt(std::max(0.0, quadrature_inner(a, a, m)));
}

} // namespace bg
