#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mfg {

// Absolute tolerance for CDF comparisons in the stochastic-dominance order.
// Cumulative sums carry float noise; classifications must not flip on it.
constexpr double sd_tolerance = 1e-10;

// A raw weight vector is accepted as a distribution when its total mass is
// within this distance of 1; it is then renormalized exactly.
constexpr double mass_tolerance = 1e-9;

/// Strictly increasing finite set of scalar levels.  Used both for state
/// grids and for action grids (including transformed kernel-parameter grids).
class Grid {
public:
    explicit Grid(std::vector<double> points);

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    const std::vector<double>& points() const { return points_; }
    double min() const { return points_.front(); }
    double max() const { return points_.back(); }

    /// Integer range [lo, hi] with unit step.
    static std::shared_ptr<const Grid> integer_range(int lo, int hi);

    bool equally_spaced(double rel_tol = 1e-9) const;
    /// Spacing of an equally spaced grid; throws otherwise.
    double step() const;

    /// Index of the grid point equal to `value` within `tol`, or -1.
    int find(double value, double tol = 1e-9) const;

private:
    std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const Grid>;
using StateGrid = Grid;
using ActionGrid = Grid;

bool same_grid(const Grid& a, const Grid& b);

/// Probability distribution over a grid.  Construction validates
/// nonnegativity and total mass, then renormalizes to an exact unit sum.
class PopulationState {
public:
    /// Empty placeholder; every operation requires a real distribution.
    PopulationState() = default;
    PopulationState(GridPtr grid, std::vector<double> weights);

    static PopulationState point_mass(GridPtr grid, std::size_t index);
    static PopulationState uniform(GridPtr grid);

    bool empty() const { return grid_ == nullptr; }
    const GridPtr& grid_ptr() const { return grid_; }
    const Grid& grid() const { return *grid_; }
    const std::vector<double>& weights() const { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::size_t size() const { return weights_.size(); }

private:
    GridPtr grid_;
    std::vector<double> weights_;
};

/// Distribution over the action grid (action-coupled games).
using ActionDistribution = PopulationState;

/// Cumulative sums of a PopulationState; nondecreasing, ends at 1.
class Cdf {
public:
    explicit Cdf(const PopulationState& f);

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
};

inline Cdf cdf(const PopulationState& f) { return Cdf(f); }

/// Outcome of a first-order stochastic dominance comparison.
enum class SdOrdering { Equal, FirstDominates, SecondDominates, Incomparable };

std::string to_string(SdOrdering o);

/// First-order stochastic dominance: the first argument dominates when its
/// CDF lies pointwise at or below the second's, strictly below somewhere.
SdOrdering sd_compare(const PopulationState& f, const PopulationState& g,
                      double tol = sd_tolerance);

inline bool sd_geq(const PopulationState& f, const PopulationState& g,
                   double tol = sd_tolerance) {
    auto o = sd_compare(f, g, tol);
    return o == SdOrdering::Equal || o == SdOrdering::FirstDominates;
}

/// Lattice join: the distribution whose CDF is the pointwise min of the two.
PopulationState sd_sup(const PopulationState& f, const PopulationState& g);
/// Lattice meet: pointwise max of the CDFs.
PopulationState sd_inf(const PopulationState& f, const PopulationState& g);

/// Total variation distance, (1/2) sum |f_k - g_k|.
double tv_distance(const PopulationState& f, const PopulationState& g);

/// Expectation of a per-grid-point function under f.
double expectation(const PopulationState& f, std::span<const double> phi);

/// Mean level: expectation of the grid points themselves.
double mean(const PopulationState& f);

} // namespace mfg
