#pragma once

#include "mfg/solver.hpp"

namespace mfg {

// Tolerance for the invariant-distribution iteration.  Invariant
// distributions feed equilibrium residuals, so this sits well below the
// dynamics tolerance.
constexpr double invariant_tolerance = 1e-10;
constexpr long invariant_max_iters = 1000000;

/// One-step population push: out(x') = sum_x P(x'|x, mu(x), f_env) g(x).
/// f_env conditions the kernel; g is the mass being pushed.  The two
/// coincide in learning-dynamics updates but are distinct arguments.
PopulationState step_population(const Strategy& mu, const PopulationState& f_env,
                                const PopulationState& g, const GameSpec& game);

/// Same, with kernel rows taken from a prebuilt table (table aggregate
/// plays the role of f_env).
PopulationState step_population(const Strategy& mu, const GameTable& t,
                                const PopulationState& g);

enum class Extreme { Smallest, Largest };

struct InvariantResult {
    PopulationState distribution;
    long iterations = 0;
    double final_step = 0.0; // TV between the last two iterates
    bool converged = false;
    bool strategy_monotone = true; // monotone iteration is only guaranteed then
    long sd_violations = 0;        // order breaks along the iteration
};

/// Extremal invariant distribution of the chain induced by mu and the
/// table's aggregate: iterate the one-step push from the point mass at the
/// bottom (Smallest) or top (Largest) of the grid until the TV step falls
/// below tol.  From an extreme point mass the iteration is SD-monotone, so
/// it converges to the lattice extreme of the invariant set.
InvariantResult invariant_extreme(const Strategy& mu, const GameTable& t,
                                  Extreme which, double tol = invariant_tolerance,
                                  long max_iters = invariant_max_iters);

InvariantResult invariant_smallest(const Strategy& mu, const PopulationState& f_env,
                                   const GameSpec& game,
                                   double tol = invariant_tolerance,
                                   long max_iters = invariant_max_iters);
InvariantResult invariant_largest(const Strategy& mu, const PopulationState& f_env,
                                  const GameSpec& game,
                                  double tol = invariant_tolerance,
                                  long max_iters = invariant_max_iters);

/// Distribution of actions when the population is at f and everyone plays
/// mu: alpha(a) = sum_{x : mu(x) = a} f(x).
ActionDistribution action_pushforward(const Strategy& mu, const PopulationState& f,
                                      GridPtr action_grid);

} // namespace mfg
