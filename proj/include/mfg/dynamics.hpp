#pragma once

#include "mfg/population.hpp"

#include <string>

namespace mfg {

// Stopping tolerance and iteration cap for the learning dynamics, and the
// thresholds under which a (strategy, state) pair counts as an equilibrium.
constexpr double dynamics_tolerance = 5e-4;
constexpr int dynamics_max_iters = 1000;
constexpr double residual_threshold = 5e-4;
constexpr double gap_threshold = 1e-3;

enum class Direction { Lower, Upper };

struct DynamicsOptions {
    double tol = dynamics_tolerance; // successive-TV stopping rule
    int max_iters = dynamics_max_iters;
    double dp_tol = dp_tolerance;
    double eps_opt = epsilon_optimal;
    double invariant_tol = invariant_tolerance; // BRD inner iteration
    long invariant_max_iters = mfg::invariant_max_iters;
};

/// Everything recorded along one run of a dynamic.
struct Trajectory {
    std::vector<PopulationState> population_states; // f_0 .. f_T
    std::vector<Strategy> strategies;               // mu_0 .. mu_{T-1}
    std::vector<double> tv_steps;                   // tv(f_{t+1}, f_t)
    std::vector<PopulationState> action_states;     // action-coupled runs only
    long monotone_violations = 0;  // SD-order breaks of the state sequence
    long strategy_violations = 0;  // breaks of per-state or in-time monotonicity
};

struct EquilibriumResult {
    Strategy strategy;
    PopulationState population_state;
    double fixed_point_residual = 0.0; // TV(f, one-step push of f)
    double optimality_gap = 0.0;       // sup_x (V*(x) - V(x|mu))
    int iterations = 0;
    bool converged = false;     // the producing run stopped by tolerance
    bool is_equilibrium = false; // residual and gap below thresholds
};

struct RunResult {
    Trajectory trajectory;
    EquilibriumResult equilibrium;
    std::string diagnostic; // nonempty when something went wrong midway
};

/// Myopic learning dynamics: start all mass at the bottom (Lower) or top
/// (Upper) of the state grid; each step best-respond to the current
/// aggregate as if it were permanent, then push the population one step.
RunResult run_mld(const GameSpec& game, Direction dir,
                  const DynamicsOptions& opt = {});

/// Best-response dynamics: as run_mld, but each step jumps to the extremal
/// invariant distribution of the chain induced by the current strategy.
RunResult run_brd(const GameSpec& game, Direction dir,
                  const DynamicsOptions& opt = {});

/// Verify a (strategy, state) pair: fixed-point residual of the one-step
/// push and the optimality gap of mu against the value of the aggregate the
/// pair induces.  Both are computed at DP tolerance tol_value.
EquilibriumResult check_equilibrium(const Strategy& mu, const PopulationState& f,
                                    const GameSpec& game,
                                    double tol_value = dp_tolerance);

/// As check_equilibrium, but against an externally supplied aggregate
/// (used for types embedded in a mixture population).
EquilibriumResult check_equilibrium_against(const Strategy& mu,
                                            const PopulationState& own,
                                            const PopulationState& aggregate,
                                            const GameSpec& game,
                                            double tol_value = dp_tolerance);

struct TypedRunResult {
    std::vector<EquilibriumResult> per_type; // strategy + state + residuals
    std::vector<Trajectory> type_trajectories; // each type's own states/strategies
    PopulationState mixture;                 // final mass-weighted mixture
    Trajectory mixture_trajectory;           // mixture states + TV steps
    int iterations = 0;
    bool converged = false;
    std::string diagnostic;
};

/// Learning dynamics with heterogeneous types: every type best-responds to
/// the shared mixture state, each type's mass is pushed by its own kernel,
/// and the run stops when the mixture's successive TV falls below tol.
TypedRunResult run_mld_typed(const TypedGameSpec& typed, Direction dir,
                             const DynamicsOptions& opt = {});

} // namespace mfg
