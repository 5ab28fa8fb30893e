#pragma once
// Tiny dense helpers for fiber-dimension linear algebra (k <= 8).

#include <cmath>
#include <utility>

namespace bg {

// Determinant of a k x k row-major matrix; destroys the input buffer.
inline double small_det(int k, double* g) {
    if (k == 0) return 1.0;
    if (k == 1) return g[0];
    if (k == 2) return g[0] * g[3] - g[1] * g[2];
    double det = 1.0;
    for (int c = 0; c < k; ++c) {
        int piv = c;
        for (int r = c + 1; r < k; ++r)
            if (std::abs(g[r * k + c]) > std::abs(g[piv * k + c])) piv = r;
        if (g[piv * k + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < k; ++j) std::swap(g[c * k + j], g[piv * k + j]);
            det = -det;
        }
        det *= g[c * k + c];
        for (int r = c + 1; r < k; ++r) {
            double f = g[r * k + c] / g[c * k + c];
            if (f == 0.0) continue;
            for (int j = c; j < k; ++j) g[r * k + j] -= f * g[c * k + j];
        }
    }
    return det;
}

} // namespace bg
