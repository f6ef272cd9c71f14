#pragma once

#include "mfg/lattice.hpp"

#include <random>
#include <vector>

namespace testutil {

inline mfg::GridPtr unit_grid(int n) { return mfg::Grid::integer_range(0, n - 1); }

/// Uniform draw from the probability simplex over the grid (flat Dirichlet).
inline mfg::PopulationState random_dist(const mfg::GridPtr& grid,
                                        std::mt19937& rng) {
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> w(grid->size());
    double sum = 0.0;
    for (double& v : w) { v = exp1(rng); sum += v; }
    for (double& v : w) v /= sum;
    return mfg::PopulationState(grid, std::move(w));
}

/// Random nondecreasing per-state function with values in [0, 1].
inline std::vector<double> random_monotone(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> phi(n);
    double acc = 0.0;
    for (double& v : phi) { acc += u01(rng); v = acc; }
    for (double& v : phi) v /= acc;
    return phi;
}

} // namespace testutil
