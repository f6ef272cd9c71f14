#include "mfg/dynamics.hpp"

#include "doctest.h"
#include "test_util.hpp"
#include "toy_games.hpp"

#include <cmath>

using namespace mfg;
using testutil::tabular_game;

namespace {

GameSpec small_security(double cost = 0.05, double delta = 1.0) {
    auto s = build_security_model(0.05, cost, delta,
                                  NoiseSpec::three_point(0.4, 0.2, 0.4), 0.75, 12, 6);
    return separable_to_standard(s).game;
}

GameSpec small_search() {
    auto sg = Grid::integer_range(0, 4);
    return build_search_model(4, 2, {0.0, 0.05, 0.2},
                              PopulationState::point_mass(sg, 4),
                              PopulationState::point_mass(sg, 0), 0.7);
}

} // namespace

TEST_CASE("static game converges in one step") {
    // identity kernel, payoff independent of action and population
    auto g = tabular_game({1, 1, 1}, {1, 0, 0, 0, 1, 0, 0, 0, 1}, 3, 1, 0.5);
    auto run = run_mld(g, Direction::Lower);
    CHECK(run.equilibrium.converged);
    CHECK(run.equilibrium.iterations == 1);
    CHECK(tv_distance(run.equilibrium.population_state,
                      PopulationState::point_mass(g.states, 0)) == doctest::Approx(0.0));
    CHECK(run.equilibrium.is_equilibrium);
    CHECK(run.trajectory.population_states.size() ==
          run.trajectory.tv_steps.size() + 1);
    CHECK(run.trajectory.population_states.size() ==
          run.trajectory.strategies.size() + 1);
}

TEST_CASE("absorbing-top kernel: one best-response step reaches the fixed point") {
    auto g = tabular_game({0, 0, 0}, {0, 0, 1, 0, 0, 1, 0, 0, 1}, 3, 1, 0.5);
    auto run = run_brd(g, Direction::Lower);
    CHECK(run.equilibrium.converged);
    auto& states = run.trajectory.population_states;
    REQUIRE(states.size() >= 2);
    CHECK(states[1][2] == doctest::Approx(1.0));
    CHECK(run.equilibrium.population_state[2] == doctest::Approx(1.0));
}

TEST_CASE("security game: lower and upper learning dynamics") {
    auto g = small_security();
    auto lower = run_mld(g, Direction::Lower);
    auto upper = run_mld(g, Direction::Upper);

    REQUIRE(lower.equilibrium.converged);
    REQUIRE(upper.equilibrium.converged);
    CHECK(lower.trajectory.tv_steps.back() < dynamics_tolerance);

    // monotone trajectories, monotone strategies, no order breaks
    CHECK(lower.trajectory.monotone_violations == 0);
    CHECK(upper.trajectory.monotone_violations == 0);
    CHECK(lower.trajectory.strategy_violations == 0);
    CHECK(upper.trajectory.strategy_violations == 0);
    for (const auto& mu : lower.trajectory.strategies) CHECK(mu.nondecreasing());

    // verified equilibria at both ends
    CHECK(lower.equilibrium.is_equilibrium);
    CHECK(upper.equilibrium.is_equilibrium);
    CHECK(lower.equilibrium.fixed_point_residual < residual_threshold);
    CHECK(lower.equilibrium.optimality_gap < gap_threshold);

    // the lower limit sits below the upper limit
    CHECK(sd_geq(upper.equilibrium.population_state,
                 lower.equilibrium.population_state));
}

TEST_CASE("best-response dynamics agree with learning dynamics on the security game") {
    auto g = small_security();
    // the learning dynamic has a slow geometric tail; estimating its limit
    // needs a stop well below the comparison tolerance
    DynamicsOptions tight;
    tight.tol = 5e-8;
    tight.max_iters = 100000;
    auto mld = run_mld(g, Direction::Lower, tight);
    auto brd = run_brd(g, Direction::Lower);
    REQUIRE(mld.equilibrium.converged);
    REQUIRE(brd.equilibrium.converged);
    CHECK(brd.trajectory.monotone_violations == 0);
    CHECK(tv_distance(mld.equilibrium.population_state,
                      brd.equilibrium.population_state) < 1e-4);
}

TEST_CASE("equilibrium check separates consistency from optimality") {
    auto g = small_security(0.02);
    // hold the population at the invariant of an arbitrary low strategy
    Strategy bottom{std::vector<int>(g.state_count(), 0)};
    // feasible windows shift with the state; use each state's lowest action
    for (std::size_t x = 0; x < g.state_count(); ++x)
        bottom.action_index[x] = g.feasible[x].first;
    auto inv = invariant_smallest(bottom, PopulationState::uniform(g.states), g);
    REQUIRE(inv.converged);
    auto res = check_equilibrium(bottom, inv.distribution, g);
    CHECK(res.fixed_point_residual < residual_threshold);
    CHECK(res.optimality_gap > gap_threshold); // consistent but not optimal
    CHECK_FALSE(res.is_equilibrium);
}

TEST_CASE("perturbing a converged state inflates the fixed-point residual") {
    auto g = small_security(0.02);
    auto run = run_mld(g, Direction::Lower);
    REQUIRE(run.equilibrium.converged);
    REQUIRE(run.equilibrium.is_equilibrium);

    // move 0.05 mass from the top of the distribution down to the bottom
    auto w = run.equilibrium.population_state.weights();
    double remaining = 0.05;
    for (std::size_t i = w.size(); i-- > 1 && remaining > 0.0;) {
        const double take = std::min(w[i], remaining);
        w[i] -= take;
        w[0] += take;
        remaining -= take;
    }
    REQUIRE(remaining == doctest::Approx(0.0));
    auto perturbed = PopulationState(g.states, std::move(w));
    auto res = check_equilibrium(run.equilibrium.strategy, perturbed, g);
    CHECK(res.fixed_point_residual > residual_threshold);
    CHECK_FALSE(res.is_equilibrium);
}

TEST_CASE("single-type run reproduces the homogeneous dynamics") {
    auto g = small_security();
    TypedGameSpec typed;
    typed.types.push_back({"only", 1.0, g});
    auto typed_run = run_mld_typed(typed, Direction::Lower);
    auto plain = run_mld(g, Direction::Lower);
    REQUIRE(typed_run.converged);
    CHECK(tv_distance(typed_run.mixture, plain.equilibrium.population_state) < 1e-13);
    CHECK(typed_run.per_type[0].strategy == plain.equilibrium.strategy);
    CHECK(typed_run.per_type[0].is_equilibrium);

    // the type's own trajectory mirrors the homogeneous one
    REQUIRE(typed_run.type_trajectories.size() == 1);
    const auto& tt = typed_run.type_trajectories[0];
    CHECK(tt.population_states.size() == tt.strategies.size() + 1);
    CHECK(tt.population_states.size() == tt.tv_steps.size() + 1);
    CHECK(tt.monotone_violations == 0);
    CHECK(tt.strategy_violations == 0);
    CHECK(tv_distance(tt.population_states.back(),
                      plain.trajectory.population_states.back()) < 1e-13);
}

TEST_CASE("more weakly interacting players raise everyone's security") {
    auto low = small_security(0.05, 0.1);
    auto high = small_security(0.05, 0.9);

    auto mean_at = [&](double fraction_low) {
        TypedGameSpec typed;
        typed.types.push_back({"low", fraction_low, low});
        typed.types.push_back({"high", 1.0 - fraction_low, high});
        // tighter stop so each positive-mass type settles onto its own
        // invariant before the mixture check fires
        DynamicsOptions opt;
        opt.tol = 1e-5;
        opt.max_iters = 10000;
        auto run = run_mld_typed(typed, Direction::Lower, opt);
        REQUIRE(run.converged);
        for (std::size_t i = 0; i < run.per_type.size(); ++i)
            if (typed.types[i].mass > 0.0) CHECK(run.per_type[i].is_equilibrium);
        return mean(run.mixture);
    };

    const double m0 = mean_at(0.0);
    const double m_half = mean_at(0.5);
    const double m1 = mean_at(1.0);
    CHECK(m0 <= m_half + 1e-9);
    CHECK(m_half <= m1 + 1e-9);
    CHECK(m1 > m0 + 1e-6);

    // degenerate mixture equals the homogeneous low-delta run
    TypedGameSpec all_low;
    all_low.types.push_back({"low", 1.0, low});
    all_low.types.push_back({"high", 0.0, high});
    auto mixed = run_mld_typed(all_low, Direction::Lower);
    auto plain = run_mld(low, Direction::Lower);
    CHECK(tv_distance(mixed.mixture, plain.equilibrium.population_state) < 1e-12);
}

TEST_CASE("coordination game: non-monotone utility still yields monotone dynamics") {
    auto s = build_coordination_model(1.0, 1.0, 3, 5,
                                      NoiseSpec::three_point(0.45, 0.2, 0.35), 0.8);
    auto g = separable_to_standard(s).game;
    auto lower = run_mld(g, Direction::Lower);
    auto upper = run_mld(g, Direction::Upper);
    REQUIRE(lower.equilibrium.converged);
    REQUIRE(upper.equilibrium.converged);
    // the decoupled kernel keeps extremal strategies monotone in the state
    CHECK(lower.trajectory.strategy_violations == 0);
    CHECK(upper.trajectory.strategy_violations == 0);
    CHECK(lower.trajectory.monotone_violations == 0);
    CHECK(lower.equilibrium.is_equilibrium);
    CHECK(upper.equilibrium.is_equilibrium);
    CHECK(sd_geq(upper.equilibrium.population_state,
                 lower.equilibrium.population_state));
}

TEST_CASE("action-coupled search game has distinct extremal equilibria") {
    auto g = small_search();
    auto lower = run_mld(g, Direction::Lower);
    auto upper = run_mld(g, Direction::Upper);
    REQUIRE(lower.equilibrium.converged);
    REQUIRE(upper.equilibrium.converged);
    CHECK(lower.equilibrium.is_equilibrium);
    CHECK(upper.equilibrium.is_equilibrium);
    CHECK(lower.trajectory.action_states.size() ==
          lower.trajectory.population_states.size());

    // everyone idle at the bottom vs. full effort at the top
    CHECK(lower.equilibrium.population_state[0] == doctest::Approx(1.0));
    CHECK(upper.equilibrium.population_state[4] == doctest::Approx(1.0));
    CHECK(sd_geq(upper.equilibrium.population_state,
                 lower.equilibrium.population_state));
    CHECK(lower.trajectory.monotone_violations == 0);
    CHECK(upper.trajectory.monotone_violations == 0);

    CHECK_THROWS(run_brd(g, Direction::Lower));
}
