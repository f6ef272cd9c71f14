#pragma once

#include "mfg/model.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace mfg {

// Value-iteration stopping tolerance: total difference across all states.
constexpr double dp_tolerance = 1e-4;

// Slack for membership in the per-state maximizer set.  Without it float
// noise collapses the set to a spurious singleton and breaks the extremal
// strategy semantics.
constexpr double epsilon_optimal = 1e-9;

struct ConvergenceError : std::runtime_error {
    double residual;
    ConvergenceError(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

/// Per-state value of being in the game against a fixed aggregate.
struct ValueFunction {
    std::vector<double> values;
    PopulationState population_state; // the aggregate this was computed against
};

/// Deterministic stationary strategy: one feasible action index per state.
struct Strategy {
    std::vector<int> action_index;

    bool nondecreasing() const;
    bool operator==(const Strategy&) const = default;
};

/// a(x) <= b(x) for every state.
bool coordinatewise_leq(const Strategy& a, const Strategy& b);

/// Per-state set of (near-)maximizing action indices.
struct BestResponseSet {
    std::vector<std::vector<int>> maximizers; // ascending global indices
};

/// Payoffs and kernel rows of a game evaluated against one fixed aggregate.
/// Bellman sweeps probe the same (x,a) pairs repeatedly; this caches them.
class GameTable {
public:
    GameTable(const GameSpec& game, PopulationState aggregate);

    const GameSpec& game() const { return *game_; }
    const PopulationState& aggregate() const { return agg_; }
    std::size_t state_count() const { return game_->state_count(); }

    double payoff(int x, int a) const { return payoff_[slot(x, a)]; }
    std::span<const double> row(int x, int a) const {
        const std::size_t n = game_->state_count();
        return {rows_.data() + slot(x, a) * n, n};
    }

private:
    std::size_t slot(int x, int a) const {
        return base_[x] + static_cast<std::size_t>(a - game_->feasible[x].first);
    }

    const GameSpec* game_;
    PopulationState agg_;
    std::vector<std::size_t> base_;
    std::vector<double> payoff_;
    std::vector<double> rows_;
};

/// payoff(x,a) + discount * sum_x' V(x') P(x'|x,a).
double backup_value(const GameTable& t, std::span<const double> v, int x, int a);

/// One Bellman sweep: per-state max of backup_value over feasible actions.
std::vector<double> bellman_backup(std::span<const double> v, const GameTable& t);
std::vector<double> bellman_backup(std::span<const double> v,
                                   const PopulationState& f, const GameSpec& game);

struct ValueIterationResult {
    ValueFunction value;
    int iterations = 0;
    double l1_residual = 0.0;
    double sup_residual = 0.0;
};

/// Iterate Bellman sweeps until the total difference across states falls
/// below tol.  Starts from zero unless a warm start is given.  Throws
/// ConvergenceError when max_iters sweeps do not suffice.
ValueIterationResult value_iteration(const GameTable& t, double tol = dp_tolerance,
                                     int max_iters = 100000,
                                     std::span<const double> warm_start = {});
ValueIterationResult value_iteration(const PopulationState& f, const GameSpec& game,
                                     double tol = dp_tolerance,
                                     int max_iters = 100000);

/// Actions within eps_opt of the per-state optimum under v_star.
BestResponseSet best_response_set(const GameTable& t, const ValueFunction& v_star,
                                  double eps_opt = epsilon_optimal);

/// Per-state smallest / largest maximizer.
Strategy extract_smallest(const BestResponseSet& brs);
Strategy extract_largest(const BestResponseSet& brs);

/// Value of following a fixed strategy: solves V = payoff_mu + discount *
/// P_mu V, directly for small grids and by iteration otherwise.
ValueFunction policy_value(const Strategy& mu, const GameTable& t,
                           double tol = dp_tolerance, int max_iters = 1000000);
ValueFunction policy_value(const Strategy& mu, const PopulationState& f,
                           const GameSpec& game, double tol = dp_tolerance);

} // namespace mfg
