#pragma once

#include <vector>

namespace mfg {

/// Dense row-major square matrix solve A x = b by Gaussian elimination with
/// partial pivoting.  Sized for the small systems that arise here (policy
/// evaluation and stationary equations on modest grids).
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b);

} // namespace mfg
