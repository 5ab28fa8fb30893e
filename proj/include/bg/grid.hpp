#pragma once
// Uniform grid on the flat torus [0,2pi)^n.  All curved geometry enters
// through metric component fields sampled on this grid, never through the
// chart, so spectral differentiation stays exact for band-limited data.

#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bg {

inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

struct TorusGrid {
    int n = 0;                        // spatial dimension (4 or 6 supported)
    std::vector<int> sizes;           // per-axis point counts, powers of two, >= 4
    std::size_t npts = 0;             // product of sizes
    std::vector<std::size_t> strides; // row-major, last axis fastest

    static std::shared_ptr<const TorusGrid> make(int n, std::vector<int> sizes);

    double coord(int axis, int idx) const { return two_pi * idx / sizes[axis]; }
    double cell_volume() const {
        double v = 1.0;
        for (int s : sizes) v *= two_pi / s;
        return v;
    }
    // Decode flat point index into per-axis indices.
    void decode(std::size_t p, int* idx) const {
        for (int a = 0; a < n; ++a) {
            idx[a] = static_cast<int>(p / strides[a]);
            p %= strides[a];
        }
    }
};

using GridPtr = std::shared_ptr<const TorusGrid>;

inline std::shared_ptr<const TorusGrid> TorusGrid::make(int n, std::vector<int> sizes) {
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("TorusGrid: n must be even and positive");
    if (static_cast<int>(sizes.size()) != n) throw std::invalid_argument("TorusGrid: sizes.size() != n");
    auto g = std::make_shared<TorusGrid>();
    g->n = n;
    g->sizes = std::move(sizes);
    g->npts = 1;
    for (int s : g->sizes) {
        if (s < 4 || (s & (s - 1)) != 0)
            throw std::invalid_argument("TorusGrid: sizes must be powers of two >= 4");
        g->npts *= static_cast<std::size_t>(s);
    }
    g->strides.resize(n);
    std::size_t st = 1;
    for (int a = n - 1; a >= 0; --a) {
        g->strides[a] = st;
        st *= static_cast<std::size_t>(g->sizes[a]);
    }
    return g;
}

} // namespace bg
