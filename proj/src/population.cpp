#include "mfg/population.hpp"

#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {

void check_strategy(const Strategy& mu, const GameSpec& game, const char* op) {
    if (mu.action_index.size() != game.state_count())
        throw std::invalid_argument(std::string(op) + ": strategy size mismatch");
    for (std::size_t x = 0; x < mu.action_index.size(); ++x)
        if (!game.feasible[x].contains(mu.action_index[x]))
            throw std::invalid_argument(std::string(op) + ": infeasible action");
}

} // namespace

PopulationState step_population(const Strategy& mu, const GameTable& t,
                                const PopulationState& g) {
    check_strategy(mu, t.game(), "step_population");
    if (!same_grid(g.grid(), *t.game().states))
        throw std::invalid_argument("step_population: pushed mass on the wrong grid");
    const std::size_t ns = t.state_count();
    std::vector<double> out(ns, 0.0);
    for (std::size_t x = 0; x < ns; ++x) {
        const double gx = g[x];
        if (gx == 0.0) continue;
        const auto row = t.row(static_cast<int>(x), mu.action_index[x]);
        for (std::size_t y = 0; y < ns; ++y) out[y] += gx * row[y];
    }
    return PopulationState(t.game().states, std::move(out));
}

PopulationState step_population(const Strategy& mu, const PopulationState& f_env,
                                const PopulationState& g, const GameSpec& game) {
    check_strategy(mu, game, "step_population");
    if (!same_grid(f_env.grid(), *game.aggregate_grid()))
        throw std::invalid_argument("step_population: aggregate on the wrong grid");
    if (!same_grid(g.grid(), *game.states))
        throw std::invalid_argument("step_population: pushed mass on the wrong grid");
    const std::size_t ns = game.state_count();
    std::vector<double> out(ns, 0.0), row(ns);
    for (std::size_t x = 0; x < ns; ++x) {
        const double gx = g[x];
        if (gx == 0.0) continue;
        game.kernel(static_cast<int>(x), mu.action_index[x], f_env, row);
        for (std::size_t y = 0; y < ns; ++y) out[y] += gx * row[y];
    }
    return PopulationState(game.states, std::move(out));
}

InvariantResult invariant_extreme(const Strategy& mu, const GameTable& t,
                                  Extreme which, double tol, long max_iters) {
    check_strategy(mu, t.game(), "invariant_extreme");
    if (!(tol > 0.0))
        throw std::invalid_argument("invariant_extreme: tol must be > 0");
    const std::size_t ns = t.state_count();

    InvariantResult res{
        PopulationState::point_mass(t.game().states,
                                    which == Extreme::Smallest ? 0 : ns - 1),
        0, 0.0, false, mu.nondecreasing(), 0};

    for (long k = 0; k < max_iters; ++k) {
        PopulationState next = step_population(mu, t, res.distribution);
        res.final_step = tv_distance(next, res.distribution);
        const auto order = sd_compare(next, res.distribution);
        const bool ok = order == SdOrdering::Equal ||
                        order == (which == Extreme::Smallest
                                      ? SdOrdering::FirstDominates
                                      : SdOrdering::SecondDominates);
        if (!ok) ++res.sd_violations;
        res.distribution = std::move(next);
        res.iterations = k + 1;
        if (res.final_step < tol) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

namespace {

InvariantResult invariant_impl(const Strategy& mu, const PopulationState& f_env,
                               const GameSpec& game, Extreme which, double tol,
                               long max_iters) {
    return invariant_extreme(mu, GameTable(game, f_env), which, tol, max_iters);
}

} // namespace

InvariantResult invariant_smallest(const Strategy& mu, const PopulationState& f_env,
                                   const GameSpec& game, double tol, long max_iters) {
    return invariant_impl(mu, f_env, game, Extreme::Smallest, tol, max_iters);
}

InvariantResult invariant_largest(const Strategy& mu, const PopulationState& f_env,
                                  const GameSpec& game, double tol, long max_iters) {
    return invariant_impl(mu, f_env, game, Extreme::Largest, tol, max_iters);
}

ActionDistribution action_pushforward(const Strategy& mu, const PopulationState& f,
                                      GridPtr action_grid) {
    if (!action_grid) throw std::invalid_argument("action_pushforward: null grid");
    std::vector<double> alpha(action_grid->size(), 0.0);
    if (mu.action_index.size() != f.size())
        throw std::invalid_argument("action_pushforward: strategy/state size mismatch");
    for (std::size_t x = 0; x < f.size(); ++x) {
        const int a = mu.action_index[x];
        if (a < 0 || a >= static_cast<int>(alpha.size()))
            throw std::invalid_argument("action_pushforward: action index out of range");
        alpha[a] += f[x];
    }
    return ActionDistribution(std::move(action_grid), std::move(alpha));
}

} // namespace mfg
