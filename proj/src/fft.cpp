#include "bg/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace bg {

namespace {

// Cached FFTW plans keyed by (length, howmany/stride, direction).  A plan for
// stride `post`, dist 1 transforms `post` interleaved lines in one call; we
// execute it once per leading-index block via the new-array interface.
struct PlanCache {
    std::mutex m;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    fftw_plan get(int len, int post, int dir, fftw_complex* buf) {
        std::lock_guard<std::mutex> lock(m);
        auto key = std::make_tuple(len, post, dir);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        int n[1] = {len};
        fftw_plan p = fftw_plan_many_dft(1, n, post, buf, nullptr, post, 1,
                                         buf, nullptr, post, 1, dir,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw plan creation failed");
        return plans.emplace(key, p).first->second;
    }
};

PlanCache& plan_cache() {
    static PlanCache c;
    return c;
}

} // namespace

void spectral_partial_raw(const TorusGrid& g, const double* in, double* out,
                          int axis, int order) {
    if (axis < 0 || axis >= g.n) throw std::invalid_argument("spectral_partial: axis out of range");
    if (order < 1) throw std::invalid_argument("spectral_partial: order must be >= 1");

    const int len = g.sizes[axis];
    const int post = static_cast<int>(g.strides[axis]);
    const std::size_t block = static_cast<std::size_t>(len) * post;
    const std::size_t nblocks = g.npts / block;

    std::vector<std::complex<double>> buf(g.npts);
    for (std::size_t p = 0; p < g.npts; ++p) buf[p] = in[p];
    auto* fbuf = reinterpret_cast<fftw_complex*>(buf.data());

    fftw_plan fwd = plan_cache().get(len, post, FFTW_FORWARD, fbuf);
    fftw_plan bwd = plan_cache().get(len, post, FFTW_BACKWARD, fbuf);

    // (i*m)^order multipliers, symmetric frequencies, Nyquist zeroed for odd
    // order (its derivative has no consistent real representative).
    std::vector<std::complex<double>> mult(len);
    for (int t = 0; t < len; ++t) {
        int m = (t <= len / 2) ? t : t - len;
        if (t == len / 2 && order % 2 == 1) {
            mult[t] = 0.0;
            continue;
        }
        std::complex<double> im(0.0, static_cast<double>(m));
        std::complex<double> f(1.0, 0.0);
        for (int o = 0; o < order; ++o) f *= im;
        mult[t] = f / static_cast<double>(len); // fold in inverse-FFT scaling
    }

    for (std::size_t b = 0; b < nblocks; ++b) {
        fftw_complex* base = fbuf + b * block;
        fftw_execute_dft(fwd, base, base);
        std::complex<double>* cbase = buf.data() + b * block;
        for (int t = 0; t < len; ++t) {
            const std::complex<double> f = mult[t];
            std::complex<double>* row = cbase + static_cast<std::size_t>(t) * post;
            for (int j = 0; j < post; ++j) row[j] *= f;
        }
        fftw_execute_dft(bwd, base, base);
    }

    double max_re = 0.0, max_im = 0.0;
    for (std::size_t p = 0; p < g.npts; ++p) {
        out[p] = buf[p].real();
        max_re = std::max(max_re, std::abs(buf[p].real()));
        max_im = std::max(max_im, std::abs(buf[p].imag()));
    }
    if (max_im > 1e-10 * std::max(max_re, 1.0))
        throw std::runtime_error("spectral_partial: imaginary residue above tolerance");
}

ScalarField spectral_partial(const ScalarField& f, int axis, int order) {
    check_finite(f.v, "spectral_partial input");
    ScalarField out(f.grid);
    spectral_partial_raw(*f.grid, f.v.data(), out.v.data(), axis, order);
    return out;
}

void spectral_partial_comp(const FormField& f, long comp, int axis, int order,
                           double* out) {
    spectral_partial_raw(*f.grid, f.comp(comp), out, axis, order);
}

} // namespace bg
