#include "mfg/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mfg {

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.size() != n * n)
        throw std::invalid_argument("solve_dense: dimension mismatch");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r * n + col]);
            if (v > best) { best = v; pivot = r; }
        }
        if (best < 1e-300)
            throw std::runtime_error("solve_dense: singular matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a[pivot * n + c], a[col * n + c]);
            std::swap(b[pivot], b[col]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = a[r * n + col] / d;
            if (m == 0.0) continue;
            for (std::size_t c = col; c < n; ++c)
                a[r * n + c] -= m * a[col * n + c];
            b[r] -= m * b[col];
        }
    }

    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i * n + c] * x[c];
        x[i] = acc / a[i * n + i];
    }
    return x;
}

} // namespace mfg
