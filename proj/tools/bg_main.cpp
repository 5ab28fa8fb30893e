// bg: command-line driver.
//   bg compute   --config cfg [--out DIR] [--seed N] [--tolerance X]
//   bg verify    SUITE [--out DIR] [--seed N] [--tolerance X]
//   bg curvature --config cfg [--out DIR] [--fd-check]
// Exit codes: 0 ok, 1 config error, 2 numerical guard tripped, 3 failed
// identity / failed check.
#include "bg/fft.hpp"
#include "bg/io.hpp"
#include "bg/scenario.hpp"
#include "bg/solver.hpp"
#include "bg/verify.hpp"

#include "CLI11.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace bg;

namespace {

std::uint64_t fnv1a(const std::vector<double>& v) {
    std::uint64_t h = 1469598103934665603ull;
    const unsigned char* p = reinterpret_cast<const unsigned char*>(v.data());
    for (std::size_t i = 0; i < v.size() * sizeof(double); ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

CollarGeometry make_geom(const ScenarioConfig& cfg, const Metric& h0) {
    if (cfg.metric.type == "flat") {
        MetricSeries ms;
        ms.grid = h0.grid;
        ms.h0 = h0;
        ms.order = cfg.n;
        return make_collar_geometry(ms);
    }
    return make_collar_geometry(fg_metric_series(compute_curvature(h0)));
}

int cmd_compute(const std::string& config_path, const std::string& out_dir, unsigned seed,
                double tolerance) {
    ScenarioConfig cfg = parse_scenario_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.input.seed = seed;
    if (tolerance > 0) cfg.tolerance = tolerance;
    GridPtr grid = build_grid(cfg);
    Metric h0 = build_metric(cfg, grid);
    FormField w = build_input(cfg, grid);
    double guard_tol = cfg.tolerance > 0 ? cfg.tolerance : 1e-8;

    FormField out;
    if (cfg.op == "Gtop") {
        out = operator_G_top(w, h0);
    } else {
        CollarGeometry geom = make_geom(cfg, h0);
        if (cfg.op == "Lk_ell") {
            out = operator_Lk_ell(geom, w, cfg.ell);
        } else if (cfg.op == "Bp" || cfg.op == "Dp" || cfg.op == "Q") {
            RelOperatorSet rel = relative_operators(geom, w, nullptr, guard_tol);
            out = cfg.op == "Bp" ? rel.Bp : cfg.op == "Dp" ? rel.Dp : rel.Q;
        } else {
            BGOperatorSet abs = absolute_operators(geom, w, nullptr, guard_tol);
            out = cfg.op == "L"   ? abs.L
                  : cfg.op == "G" ? abs.G
                  : cfg.op == "B" ? abs.B
                  : cfg.op == "C" ? abs.C
                                  : abs.D;
        }
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::string path = cfg.out_dir + "/" + cfg.op + ".fbin";
    save_field(path, out);
    std::printf("operator=%s input_hash=%016" PRIx64 " output_norm=%.12e file=%s\n",
                cfg.op.c_str(), fnv1a(w.v), l2_norm(out, h0), path.c_str());
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out_dir, unsigned seed,
               double tol_scale) {
    SuiteResult res = run_suite(suite, seed, tol_scale > 0 ? tol_scale : 1.0, true);
    std::string dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    std::string path = dir + "/report_" + suite + ".json";
    std::ofstream(path) << report_json(res) << "\n";
    std::printf("suite=%s passed=%d failed=%d report=%s\n", res.suite.c_str(), res.passed,
                res.failed, path.c_str());
    return res.failed ? 3 : 0;
}

void dump_packed(const std::string& path, const GridPtr& grid, int rank,
                 const std::vector<double>& data) {
    write_fbin(path, "tensor", rank, grid, data);
}

int cmd_curvature(const std::string& config_path, const std::string& out_dir, bool fd_check) {
    ScenarioConfig cfg = parse_scenario_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    GridPtr grid = build_grid(cfg);
    Metric h0 = build_metric(cfg, grid);
    CurvatureData c = compute_curvature(h0);
    std::filesystem::create_directories(cfg.out_dir);
    save_field(cfg.out_dir + "/scal.fbin", c.scal);
    dump_packed(cfg.out_dir + "/ricci.fbin", grid, 2, c.ricci.v);
    dump_packed(cfg.out_dir + "/schouten.fbin", grid, 2, c.schouten.v);
    dump_packed(cfg.out_dir + "/bach.fbin", grid, 2, c.bach.v);
    dump_packed(cfg.out_dir + "/christoffel.fbin", grid, 3, c.christoffel.v);
    if (cfg.n == 4) { // rank-3/4 fields are dumped in dimension 4 only (size)
        dump_packed(cfg.out_dir + "/cotton.fbin", grid, 3, c.cotton.v);
        dump_packed(cfg.out_dir + "/riemann.fbin", grid, 4, c.riemann.v);
        dump_packed(cfg.out_dir + "/weyl.fbin", grid, 4, c.weyl.v);
    }
    double smin = c.scal.v.empty() ? 0.0 : c.scal.v[0], smax = smin;
    for (double s : c.scal.v) {
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    double bach_norm = 0.0;
    for (double b : c.bach.v) bach_norm += b * b;
    std::printf("scal_range=[%.6e, %.6e] bach_norm=%.6e\n", smin, smax, std::sqrt(bach_norm));

    if (fd_check) {
        if (cfg.metric.type == "flat") {
            double m = max_abs(c.ricci.v);
            std::printf("fd_check: flat metric, max |Ric| = %.3e\n", m);
            return m < 1e-10 ? 0 : 3;
        }
        // Euclidean-derivative Ricci formula for e^{2 phi} delta, with all
        // derivatives taken by 8th-order centered differences: independent of
        // the spectral pipeline.
        ScalarField phi = build_phi(cfg, grid);
        const int n = cfg.n;
        const std::size_t npts = grid->npts;
        auto fd = [&](const std::vector<double>& f, int axis) {
            static const double w8[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
            std::vector<double> out(npts, 0.0);
            double h = 2.0 * M_PI / grid->sizes[axis];
            std::vector<std::size_t> idx(grid->n);
            for (std::size_t p = 0; p < npts; ++p) {
                std::size_t rem = p;
                for (int a = grid->n - 1; a >= 0; --a) {
                    idx[a] = rem % grid->sizes[a];
                    rem /= grid->sizes[a];
                }
                std::size_t stride = 1;
                for (int a = grid->n - 1; a > axis; --a) stride *= grid->sizes[a];
                double acc = 0.0;
                int sz = grid->sizes[axis];
                for (int s = 1; s <= 4; ++s) {
                    std::size_t up = p + stride * ((idx[axis] + s) % sz - idx[axis]);
                    std::size_t dn = p + stride * ((idx[axis] + sz - s) % sz - idx[axis]);
                    acc += w8[s - 1] * (f[up] - f[dn]);
                }
                out[p] = acc / h;
            }
            return out;
        };
        std::vector<std::vector<double>> dphi(n);
        for (int a = 0; a < n; ++a) dphi[a] = fd(phi.v, a);
        std::vector<double> lap(npts, 0.0), grad2(npts, 0.0);
        for (int a = 0; a < n; ++a) {
            std::vector<double> dd = fd(dphi[a], a);
            for (std::size_t p = 0; p < npts; ++p) {
                lap[p] += dd[p];
                grad2[p] += dphi[a][p] * dphi[a][p];
            }
        }
        double err = 0.0, scale = 1.0 + max_abs(c.ricci.v);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                std::vector<double> hess = fd(dphi[a], b);
                const double* rc = c.ricci.comp(a, b);
                for (std::size_t p = 0; p < npts; ++p) {
                    double ref = -(n - 2) * (hess[p] - dphi[a][p] * dphi[b][p]);
                    if (a == b) ref -= lap[p] + (n - 2) * grad2[p];
                    err = std::max(err, std::abs(rc[p] - ref));
                }
            }
        std::printf("fd_check: max |Ric - Ric_fd| / scale = %.3e\n", err / scale);
        return err / scale <= 1e-6 ? 0 : 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Branson-Gover form operators via Fefferman-Graham series"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite;
    unsigned seed = 0;
    double tolerance = 0.0;
    bool fd_check = false;

    auto* compute = app.add_subcommand("compute", "apply one operator to a form");
    compute->add_option("--config", config_path, "scenario config file")->required();
    compute->add_option("--out", out_dir, "output directory");
    compute->add_option("--seed", seed, "override random-input seed");
    compute->add_option("--tolerance", tolerance, "series guard tolerance");

    auto* verify = app.add_subcommand("verify", "run an identity suite");
    verify->add_option("suite", suite, "quick|full|dim4|dim6|covariance")->required();
    verify->add_option("--out", out_dir, "report directory");
    verify->add_option("--seed", seed, "override scenario seeds");
    verify->add_option("--tolerance", tolerance, "tolerance scale factor");

    auto* curvature = app.add_subcommand("curvature", "dump curvature tensors");
    curvature->add_option("--config", config_path, "scenario config file")->required();
    curvature->add_option("--out", out_dir, "output directory");
    curvature->add_flag("--fd-check", fd_check, "finite-difference Ricci cross-check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code ? 1 : 0;
    }

    try {
        if (compute->parsed()) return cmd_compute(config_path, out_dir, seed, tolerance);
        if (verify->parsed()) return cmd_verify(suite, out_dir, seed, tolerance);
        return cmd_curvature(config_path, out_dir, fd_check);
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const guard_error& e) {
        std::fprintf(stderr, "guard: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
