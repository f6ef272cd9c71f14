#include "mfg/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mfg {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty())
        throw std::invalid_argument("Grid: needs at least one point");
    for (double p : points_)
        if (!std::isfinite(p))
            throw std::invalid_argument("Grid: points must be finite");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i] <= points_[i - 1])
            throw std::invalid_argument("Grid: points must be strictly increasing");
}

std::shared_ptr<const Grid> Grid::integer_range(int lo, int hi) {
    if (hi < lo)
        throw std::invalid_argument("Grid::integer_range: empty range");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(hi - lo) + 1);
    for (int v = lo; v <= hi; ++v) pts.push_back(static_cast<double>(v));
    return std::make_shared<Grid>(std::move(pts));
}

bool Grid::equally_spaced(double rel_tol) const {
    if (points_.size() < 2) return true;
    const double h = (points_.back() - points_.front()) /
                     static_cast<double>(points_.size() - 1);
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (std::abs((points_[i] - points_[i - 1]) - h) > rel_tol * std::max(1.0, std::abs(h)))
            return false;
    return true;
}

double Grid::step() const {
    if (points_.size() < 2)
        throw std::logic_error("Grid::step: single-point grid has no step");
    if (!equally_spaced())
        throw std::invalid_argument("Grid::step: grid is not equally spaced");
    return (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
}

int Grid::find(double value, double tol) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), value - tol);
    if (it != points_.end() && std::abs(*it - value) <= tol)
        return static_cast<int>(it - points_.begin());
    return -1;
}

bool same_grid(const Grid& a, const Grid& b) {
    if (&a == &b) return true;
    return a.points() == b.points();
}

namespace {

void require_same_grid(const PopulationState& f, const PopulationState& g,
                       const char* op) {
    if (!same_grid(f.grid(), g.grid()))
        throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

} // namespace

PopulationState::PopulationState(GridPtr grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
    if (!grid_) throw std::invalid_argument("PopulationState: null grid");
    if (weights_.size() != grid_->size())
        throw std::invalid_argument("PopulationState: weight/grid size mismatch");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0))
            throw std::invalid_argument("PopulationState: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > mass_tolerance)
        throw std::invalid_argument("PopulationState: total mass " +
                                    std::to_string(sum) + " is not 1");
    for (double& w : weights_) w /= sum;
}

PopulationState PopulationState::point_mass(GridPtr grid, std::size_t index) {
    if (!grid || index >= grid->size())
        throw std::invalid_argument("PopulationState::point_mass: index out of range");
    std::vector<double> w(grid->size(), 0.0);
    w[index] = 1.0;
    return PopulationState(std::move(grid), std::move(w));
}

PopulationState PopulationState::uniform(GridPtr grid) {
    if (!grid) throw std::invalid_argument("PopulationState::uniform: null grid");
    std::vector<double> w(grid->size(), 1.0 / static_cast<double>(grid->size()));
    return PopulationState(std::move(grid), std::move(w));
}

Cdf::Cdf(const PopulationState& f) {
    values_.resize(f.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        acc += f[i];
        values_[i] = acc;
    }
}

std::string to_string(SdOrdering o) {
    switch (o) {
    case SdOrdering::Equal: return "equal";
    case SdOrdering::FirstDominates: return "first_dominates";
    case SdOrdering::SecondDominates: return "second_dominates";
    case SdOrdering::Incomparable: return "incomparable";
    }
    return "?";
}

SdOrdering sd_compare(const PopulationState& f, const PopulationState& g,
                      double tol) {
    require_same_grid(f, g, "sd_compare");
    Cdf ff(f), gg(g);
    bool f_below = false, g_below = false;
    for (std::size_t i = 0; i < ff.size(); ++i) {
        const double d = ff[i] - gg[i];
        if (d < -tol) f_below = true;
        else if (d > tol) g_below = true;
    }
    if (f_below && g_below) return SdOrdering::Incomparable;
    if (f_below) return SdOrdering::FirstDominates;
    if (g_below) return SdOrdering::SecondDominates;
    return SdOrdering::Equal;
}

namespace {

PopulationState from_cdf(const GridPtr& grid, const std::vector<double>& cum) {
    std::vector<double> w(cum.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < cum.size(); ++i) {
        // Differencing two CDFs can leave -1e-17 artifacts; clamp them away.
        w[i] = std::max(0.0, cum[i] - prev);
        prev = cum[i];
    }
    return PopulationState(grid, std::move(w));
}

} // namespace

PopulationState sd_sup(const PopulationState& f, const PopulationState& g) {
    require_same_grid(f, g, "sd_sup");
    Cdf ff(f), gg(g);
    std::vector<double> cum(ff.size());
    for (std::size_t i = 0; i < cum.size(); ++i) cum[i] = std::min(ff[i], gg[i]);
    return from_cdf(f.grid_ptr(), cum);
}

PopulationState sd_inf(const PopulationState& f, const PopulationState& g) {
    require_same_grid(f, g, "sd_inf");
    Cdf ff(f), gg(g);
    std::vector<double> cum(ff.size());
    for (std::size_t i = 0; i < cum.size(); ++i) cum[i] = std::max(ff[i], gg[i]);
    return from_cdf(f.grid_ptr(), cum);
}

double tv_distance(const PopulationState& f, const PopulationState& g) {
    require_same_grid(f, g, "tv_distance");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::abs(f[i] - g[i]);
    return 0.5 * acc;
}

double expectation(const PopulationState& f, std::span<const double> phi) {
    if (phi.size() != f.size())
        throw std::invalid_argument("expectation: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += phi[i] * f[i];
    return acc;
}

double mean(const PopulationState& f) {
    return expectation(f, f.grid().points());
}

} // namespace mfg
