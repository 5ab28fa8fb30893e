#include "bg/curvature.hpp"

#include "bg/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace bg {

CurvatureData compute_curvature(const Metric& m) {
    const GridPtr& grid = m.grid;
    const int n = grid->n;
    if (n < 4) throw std::invalid_argument("compute_curvature: need n >= 4 (Bach)");
    const std::size_t npts = grid->npts;
    const int nsym = n * (n + 1) / 2;
    const int napair = n * (n - 1) / 2;

    CurvatureData out;
    out.metric = m;

    // ---- Christoffel symbols from dh ------------------------------------
    // dh[a][(bc)] = d h_bc / dy_a
    std::vector<double> dh(static_cast<std::size_t>(n) * nsym * npts);
    auto dh_at = [&](int a, int b, int c) {
        return dh.data() +
               (static_cast<std::size_t>(a) * nsym + Sym2Field::pair_index(n, b, c)) * npts;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = b; c < n; ++c)
                spectral_partial_raw(*grid, m.h.comp(b, c), dh_at(a, b, c), a, 1);

    out.christoffel = ChristoffelField(grid);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = b; c < n; ++c) {
                double* g = out.christoffel.comp(a, b, c);
                for (int d = 0; d < n; ++d) {
                    const double* hi = m.h_inv.comp(a, d);
                    const double* t1 = dh_at(b, d, c);
                    const double* t2 = dh_at(c, b, d);
                    const double* t3 = dh_at(d, b, c);
                    for (std::size_t p = 0; p < npts; ++p)
                        g[p] += 0.5 * hi[p] * (t1[p] + t2[p] - t3[p]);
                }
            }
    dh.clear();
    dh.shrink_to_fit();
    const ChristoffelField& G = out.christoffel;

    // ---- Ricci (direct contraction of the curvature formula) ------------
    // Ric_bd = d_a G^a_db - d_d G^a_ab + G^a_ae G^e_db - G^a_de G^e_ab
    out.ricci = Sym2Field(grid);
    {
        std::vector<double> scratch(npts), trG(static_cast<std::size_t>(n) * npts, 0.0);
        for (int b = 0; b < n; ++b) {
            double* t = trG.data() + static_cast<std::size_t>(b) * npts;
            for (int a = 0; a < n; ++a) {
                const double* g = G.comp(a, a, b);
                for (std::size_t p = 0; p < npts; ++p) t[p] += g[p];
            }
        }
        for (int b = 0; b < n; ++b)
            for (int d = b; d < n; ++d) {
                double* r = out.ricci.comp(b, d);
                for (int a = 0; a < n; ++a) {
                    spectral_partial_raw(*grid, G.comp(a, d, b), scratch.data(), a, 1);
                    for (std::size_t p = 0; p < npts; ++p) r[p] += scratch[p];
                }
                spectral_partial_raw(*grid, trG.data() + static_cast<std::size_t>(b) * npts,
                                     scratch.data(), d, 1);
                for (std::size_t p = 0; p < npts; ++p) r[p] -= scratch[p];
                for (int a = 0; a < n; ++a)
                    for (int e = 0; e < n; ++e) {
                        pmadd(npts, 1.0, G.comp(a, a, e), G.comp(e, d, b), r);
                        const double* g1 = G.comp(a, d, e);
                        const double* g2 = G.comp(e, a, b);
                        for (std::size_t p = 0; p < npts; ++p) r[p] -= g1[p] * g2[p];
                    }
            }
    }

    // ---- scalar curvature and Schouten ----------------------------------
    out.scal = ScalarField(grid);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
            pmadd(npts, 1.0, m.h_inv.comp(b, d), out.ricci.comp(b, d), out.scal.v.data());
    out.schouten = Sym2Field(grid);
    for (int b = 0; b < n; ++b)
        for (int d = b; d < n; ++d) {
            double* s = out.schouten.comp(b, d);
            const double* r = out.ricci.comp(b, d);
            const double* h = m.h.comp(b, d);
            for (std::size_t p = 0; p < npts; ++p)
                s[p] = (r[p] - out.scal.v[p] * h[p] / (2.0 * (n - 1))) / (n - 2);
        }

    // ---- Riemann, lowered, pair-compressed ------------------------------
    out.riemann = CurvTensorField(grid);
    {
        std::vector<double> Mup(static_cast<std::size_t>(n) * n * npts);
        std::vector<double> low(static_cast<std::size_t>(n) * n * npts);
        std::vector<double> s1(npts), s2(npts);
        auto mup = [&](int a, int b) { return Mup.data() + static_cast<std::size_t>(a * n + b) * npts; };
        auto lo = [&](int a, int b) { return low.data() + static_cast<std::size_t>(a * n + b) * npts; };
        for (int c = 0; c < n; ++c)
            for (int d = c + 1; d < n; ++d) {
                int q = apair_index(n, c, d);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        // R^a_{bcd} = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb
                        double* mm = mup(a, b);
                        spectral_partial_raw(*grid, G.comp(a, d, b), s1.data(), c, 1);
                        spectral_partial_raw(*grid, G.comp(a, c, b), s2.data(), d, 1);
                        for (std::size_t p = 0; p < npts; ++p) mm[p] = s1[p] - s2[p];
                        for (int e = 0; e < n; ++e) {
                            pmadd(npts, 1.0, G.comp(a, c, e), G.comp(e, d, b), mm);
                            const double* g1 = G.comp(a, d, e);
                            const double* g2 = G.comp(e, c, b);
                            for (std::size_t p = 0; p < npts; ++p) mm[p] -= g1[p] * g2[p];
                        }
                    }
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        double* l = lo(a, b);
                        std::fill(l, l + npts, 0.0);
                        for (int e = 0; e < n; ++e) pmadd(npts, 1.0, m.h.comp(a, e), mup(e, b), l);
                    }
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b) {
                        int p2 = apair_index(n, a, b);
                        if (p2 > q) continue;
                        double* dst = out.riemann.pq(p2, q);
                        const double* l1 = lo(a, b);
                        const double* l2 = lo(b, a);
                        for (std::size_t p = 0; p < npts; ++p) dst[p] = 0.5 * (l1[p] - l2[p]);
                    }
            }
    }

    // ---- Cotton ----------------------------------------------------------
    out.cotton = CottonField(grid);
    {
        std::vector<double> dP(static_cast<std::size_t>(n) * nsym * npts);
        auto dp_at = [&](int a, int b, int c) {
            return dP.data() +
                   (static_cast<std::size_t>(a) * nsym + Sym2Field::pair_index(n, b, c)) * npts;
        };
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = b; c < n; ++c)
                    spectral_partial_raw(*grid, out.schouten.comp(b, c), dp_at(a, b, c), a, 1);
        // nabla_a P_bc = d_a P_bc - G^e_ab P_ec - G^e_ac P_be
        auto covP = [&](int a, int b, int c, double* dst) {
            const double* d0 = dp_at(a, b, c);
            std::copy(d0, d0 + npts, dst);
            for (int e = 0; e < n; ++e) {
                const double* g1 = G.comp(e, a, b);
                const double* p1 = out.schouten.comp(e, c);
                const double* g2 = G.comp(e, a, c);
                const double* p2 = out.schouten.comp(b, e);
                for (std::size_t p = 0; p < npts; ++p) dst[p] -= g1[p] * p1[p] + g2[p] * p2[p];
            }
        };
        std::vector<double> t1(npts), t2(npts);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    covP(a, b, c, t1.data());
                    covP(b, a, c, t2.data());
                    double* dst = out.cotton.comp(a, b, c);
                    for (std::size_t p = 0; p < npts; ++p) dst[p] = t1[p] - t2[p];
                }
    }

    // ---- Weyl: W = R - P (kulkarni-nomizu) h ----------------------------
    out.weyl = CurvTensorField(grid);
    {
        const auto& pairs = multi_indices(n, 2);
        for (int pidx = 0; pidx < napair; ++pidx)
            for (int qidx = pidx; qidx < napair; ++qidx) {
                int a = pairs[pidx][0], b = pairs[pidx][1];
                int c = pairs[qidx][0], d = pairs[qidx][1];
                double* w = out.weyl.pq(pidx, qidx);
                const double* r = out.riemann.pq(pidx, qidx);
                const double* Pac = out.schouten.comp(a, c);
                const double* Pad = out.schouten.comp(a, d);
                const double* Pbc = out.schouten.comp(b, c);
                const double* Pbd = out.schouten.comp(b, d);
                const double* hac = m.h.comp(a, c);
                const double* had = m.h.comp(a, d);
                const double* hbc = m.h.comp(b, c);
                const double* hbd = m.h.comp(b, d);
                for (std::size_t p = 0; p < npts; ++p)
                    w[p] = r[p] - (Pac[p] * hbd[p] - Pad[p] * hbc[p] + Pbd[p] * hac[p] -
                                   Pbc[p] * had[p]);
            }
    }

    // ---- Bach: B_ab = nabla^c C_cab + P^{cd} W_cadb ---------------------
    out.bach = Sym2Field(grid);
    {
        std::vector<double> Bfull(static_cast<std::size_t>(n) * n * npts, 0.0);
        auto bf = [&](int a, int b) { return Bfull.data() + static_cast<std::size_t>(a * n + b) * npts; };

        // d-derivative part of nabla^c C_cab
        std::vector<double> der(npts);
        for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e)
                for (int f = e + 1; f < n; ++f)
                    for (int gcomp = 0; gcomp < n; ++gcomp) {
                        spectral_partial_raw(*grid, out.cotton.comp(e, f, gcomp), der.data(), d, 1);
                        // C_{cab}: (c,a,b) = (e,f,g) with +, (f,e,g) with -
                        pmadd(npts, 1.0, m.h_inv.comp(e, d), der.data(), bf(f, gcomp));
                        for (std::size_t p = 0; p < npts; ++p)
                            bf(e, gcomp)[p] -= m.h_inv.comp(f, d)[p] * der[p];
                    }
        // Christoffel corrections: - h^{cd}(G^e_dc C_eab + G^e_da C_ceb + G^e_db C_cae)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double* dst = bf(a, b);
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        const double* hi = m.h_inv.comp(c, d);
                        for (int e = 0; e < n; ++e) {
                            auto [p1, sg1] = out.cotton.entry(e, a, b);
                            if (p1) {
                                const double* g = G.comp(e, d, c);
                                for (std::size_t p = 0; p < npts; ++p)
                                    dst[p] -= hi[p] * g[p] * sg1 * p1[p];
                            }
                            auto [p2, sg2] = out.cotton.entry(c, e, b);
                            if (p2) {
                                const double* g = G.comp(e, d, a);
                                for (std::size_t p = 0; p < npts; ++p)
                                    dst[p] -= hi[p] * g[p] * sg2 * p2[p];
                            }
                            auto [p3, sg3] = out.cotton.entry(c, a, e);
                            if (p3) {
                                const double* g = G.comp(e, d, b);
                                for (std::size_t p = 0; p < npts; ++p)
                                    dst[p] -= hi[p] * g[p] * sg3 * p3[p];
                            }
                        }
                    }
            }
        // P^{cd} W_cadb with P raised by h^{-1} on both slots
        std::vector<double> Praised(static_cast<std::size_t>(n) * n * npts, 0.0);
        auto pr = [&](int c, int d) { return Praised.data() + static_cast<std::size_t>(c * n + d) * npts; };
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
                double* dst = pr(c, d);
                for (int e = 0; e < n; ++e)
                    for (int f = 0; f < n; ++f) {
                        const double* h1 = m.h_inv.comp(c, e);
                        const double* pe = out.schouten.comp(e, f);
                        const double* h2 = m.h_inv.comp(f, d);
                        for (std::size_t p = 0; p < npts; ++p)
                            dst[p] += h1[p] * pe[p] * h2[p];
                    }
            }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double* dst = bf(a, b);
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        auto [wp, sg] = out.weyl.entry(c, a, d, b);
                        if (!wp) continue;
                        const double* pv = pr(c, d);
                        for (std::size_t p = 0; p < npts; ++p) dst[p] += pv[p] * sg * wp[p];
                    }
            }
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double* dst = out.bach.comp(a, b);
                const double* u = bf(a, b);
                const double* l = bf(b, a);
                for (std::size_t p = 0; p < npts; ++p) dst[p] = 0.5 * (u[p] + l[p]);
            }
    }

    return out;
}

MetricSeries fg_metric_series(const CurvatureData& curv, const Sym2Field* h3_tt) {
    const GridPtr& grid = curv.metric.grid;
    const int n = grid->n;
    if (n != 4 && n != 6) throw std::invalid_argument("fg_metric_series: n must be 4 or 6");
    const std::size_t npts = grid->npts;

    MetricSeries ms;
    ms.grid = grid;
    ms.h0 = curv.metric;
    ms.order = n; // x^4 for n=4, x^6 for n=6

    // x^2: -P
    Sym2Field c2(grid);
    for (std::size_t i = 0; i < c2.v.size(); ++i) c2.v[i] = -curv.schouten.v[i];
    if (bg::max_abs(c2.v) > 0.0) ms.corr.emplace_back(2, std::move(c2));

    // P^2_{ab} = P_ac h^{cd} P_db
    Sym2Field P2(grid);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double* dst = P2.comp(a, b);
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const double* p1 = curv.schouten.comp(a, c);
                    const double* hi = curv.metric.h_inv.comp(c, d);
                    const double* p2 = curv.schouten.comp(d, b);
                    for (std::size_t p = 0; p < npts; ++p) dst[p] += p1[p] * hi[p] * p2[p];
                }
        }

    // x^4: h2/8, h2 = -2B/(n-4) + 2P^2 (n=4 class: B = 0)
    Sym2Field c4(grid);
    for (std::size_t i = 0; i < c4.v.size(); ++i) c4.v[i] = 0.25 * P2.v[i];
    if (n == 6)
        for (std::size_t i = 0; i < c4.v.size(); ++i) c4.v[i] -= 0.125 * curv.bach.v[i];
    if (bg::max_abs(c4.v) > 0.0) ms.corr.emplace_back(4, std::move(c4));

    if (n == 6) {
        // x^6: -h3/48, h3 = (tr h3/n) h0 + optional trace-free part,
        // tr h3 = -8 tr(PB)/(n-4) = -4 P^{ab} B_ab
        ScalarField trPB(grid);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        const double* h1 = curv.metric.h_inv.comp(a, c);
                        const double* pv = curv.schouten.comp(c, d);
                        const double* h2 = curv.metric.h_inv.comp(d, b);
                        const double* bv = curv.bach.comp(a, b);
                        for (std::size_t p = 0; p < npts; ++p)
                            trPB.v[p] += h1[p] * pv[p] * h2[p] * bv[p];
                    }
        Sym2Field c6(grid);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double* dst = c6.comp(a, b);
                const double* h = curv.metric.h.comp(a, b);
                for (std::size_t p = 0; p < npts; ++p)
                    dst[p] = -(-4.0 * trPB.v[p] / n) * h[p] / 48.0;
            }
        if (h3_tt) axpy(-1.0 / 48.0, h3_tt->v, c6.v);
        if (bg::max_abs(c6.v) > 0.0) ms.corr.emplace_back(6, std::move(c6));
    }
    return ms;
}

EndomorphismField a_operator(const CurvatureData& curv, int k) {
    // A = J(h^{-1} P0) - Tr(h^{-1} P0)/2, P0 = 2P
    const GridPtr& grid = curv.metric.grid;
    const int n = grid->n;
    std::vector<double> endo(static_cast<std::size_t>(n) * n * grid->npts, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double* o = endo.data() + static_cast<std::size_t>(a * n + b) * grid->npts;
            for (int c = 0; c < n; ++c)
                pmadd(grid->npts, 2.0, curv.metric.h_inv.comp(a, c), curv.schouten.comp(c, b), o);
        }
    EndomorphismField e;
    e.grid = grid;
    e.degree = k;
    e.c0 = trace_endo(grid, endo);
    scale_inplace(e.c0.v, -0.5);
    e.H = std::move(endo);
    return e;
}

} // namespace bg
