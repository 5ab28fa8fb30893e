#include "bg/trigpoly.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace bg {

TrigPoly TrigPoly::derivative(int axis) const {
    // d/dy sin(m.y) = m_axis cos(m.y);  d/dy cos(m.y) = -m_axis sin(m.y)
    TrigPoly out;
    for (const auto& t : terms) {
        double m = static_cast<double>(t.modes[axis]);
        if (m == 0.0) continue;
        TrigTerm d = t;
        d.is_sin = !t.is_sin;
        d.amp = t.is_sin ? t.amp * m : -t.amp * m;
        out.terms.push_back(std::move(d));
    }
    return out;
}

ScalarField TrigPoly::sample(const GridPtr& grid) const {
    ScalarField f(grid);
    const int n = grid->n;
    std::vector<int> idx(n);
    for (std::size_t p = 0; p < grid->npts; ++p) {
        grid->decode(p, idx.data());
        double val = 0.0;
        for (const auto& t : terms) {
            double phase = 0.0;
            for (int a = 0; a < n; ++a) phase += t.modes[a] * grid->coord(a, idx[a]);
            val += t.amp * (t.is_sin ? std::sin(phase) : std::cos(phase));
        }
        f.v[p] = val;
    }
    return f;
}

FormField TrigFormSpec::sample(const GridPtr& grid) const {
    FormField f(grid, degree);
    if (static_cast<long>(comps.size()) != f.ncomp())
        throw std::invalid_argument("TrigFormSpec: component count mismatch");
    for (long c = 0; c < f.ncomp(); ++c) {
        ScalarField s = comps[c].sample(grid);
        std::copy(s.v.begin(), s.v.end(), f.comp(c));
    }
    return f;
}

TrigFormSpec random_lowfreq_spec(const GridPtr& grid, int k, int max_mode,
                                 std::uint64_t seed) {
    int min_size = grid->sizes[0];
    for (int s : grid->sizes) min_size = std::min(min_size, s);
    if (max_mode > min_size / 4)
        throw std::invalid_argument("random_lowfreq_form: max_mode > min(sizes)/4");

    // Fold the shape parameters into the stream so distinct requests with the
    // same seed differ, while identical requests stay bit-reproducible.
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x10001ULL * k + max_mode);
    std::uniform_int_distribution<int> mode_dist(-max_mode, max_mode);
    std::uniform_real_distribution<double> amp_dist(-1.0, 1.0);

    TrigFormSpec spec;
    spec.degree = k;
    long nc = binom(grid->n, k);
    for (long c = 0; c < nc; ++c) {
        TrigPoly p;
        for (int t = 0; t < 3; ++t) {
            TrigTerm term;
            term.amp = amp_dist(rng);
            term.modes.resize(grid->n);
            for (int a = 0; a < grid->n; ++a) term.modes[a] = mode_dist(rng);
            term.is_sin = (rng() & 1) != 0;
            p.terms.push_back(std::move(term));
        }
        spec.comps.push_back(std::move(p));
    }
    return spec;
}

FormField random_lowfreq_form(const GridPtr& grid, int k, int max_mode,
                              std::uint64_t seed) {
    return random_lowfreq_spec(grid, k, max_mode, seed).sample(grid);
}

} // namespace bg
