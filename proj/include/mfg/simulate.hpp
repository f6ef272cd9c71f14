#pragma once

#include "mfg/dynamics.hpp"

#include <cstdint>

namespace mfg {

/// Finite-population Monte Carlo run of the myopic learning dynamic.
struct SimConfig {
    int players = 2; // at least 2
    int steps = 100;
    std::uint64_t seed = 0;
    Direction direction = Direction::Lower;
    GameSpec game;
    double dp_tol = dp_tolerance;
    double eps_opt = epsilon_optimal;
};

struct FiniteTrajectory {
    std::vector<PopulationState> empirical; // f^m_0 .. f^m_steps
    std::vector<double> tv_steps;           // successive empirical TV
    std::vector<int> final_states;          // per-player grid indices
};

/// All players start at the bottom (Lower) or top (Upper) of the grid.
/// Each step: one shared extremal best response against the aggregate
/// empirical state, then every player transitions stochastically.  Draws
/// come from counter-based streams keyed by (seed, step, player): the draw
/// for player i at step t is the smallest state index k with
/// stream_uniform(seed, t, i) < cumulative kernel row at k.
FiniteTrajectory simulate_finite_mld(const SimConfig& cfg);

struct ComparisonSeries {
    std::vector<double> tv; // TV(empirical_t, meanfield_t) per step
    double max_tv = 0.0;
    double final_tv = 0.0;
};

/// Per-step total variation between a finite run and a mean-field
/// trajectory of the same length.
ComparisonSeries compare_to_meanfield(const FiniteTrajectory& fin,
                                      const Trajectory& mf);

/// Copy of a trajectory whose state sequence is truncated, or right-padded
/// with its final state, to exactly `states` entries.  A converged run is
/// stationary, so padding extends it faithfully.
Trajectory fit_length(Trajectory mf, std::size_t states);

} // namespace mfg
