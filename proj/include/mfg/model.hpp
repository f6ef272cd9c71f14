#pragma once

#include "mfg/lattice.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mfg {

/// Inclusive index range into an action grid.
struct ActionRange {
    int first = 0;
    int last = 0;
    int count() const { return last - first + 1; }
    bool contains(int a) const { return a >= first && a <= last; }
};

/// How a game is coupled to the rest of the population: through the
/// distribution of states, or through the distribution of actions.
enum class Coupling { State, Action };

/// Payoff evaluator: (state index, action index, population aggregate).
using PayoffFn = std::function<double(int, int, const PopulationState&)>;

/// Transition kernel evaluator: writes the next-state distribution for
/// (state index, action index, population aggregate) into `out`.
using KernelFn =
    std::function<void(int, int, const PopulationState&, std::span<double>)>;

/// A discounted anonymous stochastic game on finite grids.
struct GameSpec {
    GridPtr states;
    GridPtr actions;
    std::vector<ActionRange> feasible; // one range per state
    PayoffFn payoff;
    KernelFn kernel;
    double discount = 0.0;
    Coupling coupling = Coupling::State;

    std::size_t state_count() const { return states->size(); }
    std::size_t action_count() const { return actions->size(); }

    /// Grid the population aggregate lives on.
    const GridPtr& aggregate_grid() const {
        return coupling == Coupling::State ? states : actions;
    }

    /// One kernel row as a distribution (convenience; loops use spans).
    PopulationState kernel_row(int x, int a, const PopulationState& agg) const;

    /// Structural validation: grid sizes, discount in (0,1), feasible
    /// ranges valid and nondecreasing in the state.  Throws on violation.
    void check() const;

    /// Every action feasible in every state.
    static std::vector<ActionRange> full_range(std::size_t n_states,
                                               std::size_t n_actions);
};

/// Finite noise on grid-step offsets.
struct NoiseSpec {
    std::vector<int> offsets;
    std::vector<double> probs;

    NoiseSpec(std::vector<int> offsets, std::vector<double> probs);

    /// Offsets {-1, 0, +1} with the given masses.
    static NoiseSpec three_point(double q_minus, double q_zero, double q_plus);

    double mean_offset() const;
    bool deterministic() const;
};

/// Deposit unit mass of `value` onto the grid: mass below the bottom lumps
/// at the bottom, above the top at the top, off-grid interior values split
/// between the two neighboring points by linear interpolation.
void deposit_on_grid(const Grid& grid, double value, double mass,
                     std::span<double> out);

/// Distribution of `target + W*step` on an equally spaced grid, truncated at
/// the grid ends.
void truncated_shift(const Grid& grid, double target, const NoiseSpec& noise,
                     std::span<double> out);

/// Kernel with next state distributed as A*x + B*a + W, truncated to the
/// state grid.  Requires an equally spaced state grid and A, B >= 0.
KernelFn linear_truncated_kernel(double a_coef, double b_coef, NoiseSpec noise,
                                 GridPtr state_grid, GridPtr action_grid);

/// Kernel row generator in terms of a scalar kernel parameter.
using ParamKernelFn =
    std::function<void(double h_value, const PopulationState&, std::span<double>)>;

/// Parameter kernel with next state distributed as h + W.
ParamKernelFn truncated_shift_param_kernel(NoiseSpec noise, GridPtr state_grid);

/// Mixing weight for mixture dynamics, in value space.
using MixtureWeightFn =
    std::function<double(double x_value, double a_value, const PopulationState&)>;

/// Kernel q(x,a,agg)*F + (1-q(x,a,agg))*G.  F must stochastically dominate G
/// (checked at construction); q must stay in [0, 1].
KernelFn mixture_kernel(MixtureWeightFn q, PopulationState mix_high,
                        PopulationState mix_low, GridPtr state_grid,
                        GridPtr action_grid);

/// Utility evaluator v(x, f) for separable games.
using UtilityFn = std::function<double(int, const PopulationState&)>;
/// Action cost c(a).
using CostFn = std::function<double(int)>;
/// Kernel parameter h(x, a), in value space.
using KernelParamFn = std::function<double(int, int)>;

/// A game whose payoff splits as v(x,f) - c(a) and whose kernel depends on
/// (x,a) only through the scalar parameter h(x,a).
struct SeparableSpec {
    GridPtr states;
    GridPtr actions;
    double discount = 0.0;
    UtilityFn utility;
    CostFn cost;
    KernelParamFn kernel_param;
    ParamKernelFn param_kernel;
    bool payoff_monotone = true;
    bool kernel_f_independent = false;

    /// Non-monotone utility is admissible only with an f-independent kernel.
    void check() const;
};

/// Result of rewriting a separable game over its kernel-parameter grid.
struct SeparableTransform {
    GameSpec game;          // actions of `game` are kernel-parameter values
    GridPtr parameter_grid; // == game.actions

    /// Minimum original-action cost achieving parameter index `h_index`
    /// from state `x`.
    double min_cost(int x, int h_index) const;
    /// Cheapest original action achieving parameter index `h_index` from
    /// state `x` (smallest index among cost minimizers).
    int pullback_action(int x, int h_index) const;

    /// Map a per-state choice of parameter indices back to original actions.
    std::vector<int> pull_back(const std::vector<int>& parameter_choice) const;

    std::vector<ActionRange> ranges;          // per state, into parameter_grid
    std::vector<std::vector<double>> costs;   // per state, local to range
    std::vector<std::vector<int>> actions;    // per state, local to range
};

/// Rewrite a separable game as a standard game whose action is the kernel
/// parameter.  The transformed action grid is the set of attained parameter
/// values; each state's feasible window must attain every grid value in it
/// exactly (throws otherwise, e.g. for incommensurate parameter maps).
SeparableTransform separable_to_standard(const SeparableSpec& s);

/// Interdependent-security model: breach probability p(x) = 1/(1+kappa*x),
/// utility -p(x) - delta*(1-p(x))*sum_y f(y)p(y), linear action cost, kernel
/// parameter x + a with truncated additive noise.
SeparableSpec build_security_model(double kappa, double cost, double delta,
                                   NoiseSpec noise, double beta,
                                   int state_max = 50, int action_max = 25);

/// Coordination model: utility -(x - mean(f))^2, cost a^2, kernel parameter
/// A*x + B*a with truncated noise of nonpositive drift.  States are integers
/// -state_span..state_span, actions 0..action_max.
SeparableSpec build_coordination_model(double a_coef, double b_coef,
                                       int action_max, int state_span,
                                       NoiseSpec noise, double beta);

/// Dynamic-search model, coupled through actions: payoff x*a*mean(alpha) -
/// cost[a], mixture kernel with weight (x + a + mean(alpha))/(x_max+2*a_max).
GameSpec build_search_model(int state_max, int action_max,
                            std::vector<double> action_cost,
                            PopulationState mix_high, PopulationState mix_low,
                            double beta);

/// One player type: a label, its population mass, and its game.
struct TypedPlayer {
    std::string label;
    double mass = 0.0;
    GameSpec game;
};

/// Heterogeneous population: finitely many types sharing grids, with masses
/// summing to one.
struct TypedGameSpec {
    std::vector<TypedPlayer> types;
    void check() const;
};

} // namespace mfg
