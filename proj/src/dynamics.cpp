#include "mfg/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace mfg {

namespace {

bool order_ok(const PopulationState& next, const PopulationState& prev,
              Direction dir) {
    const auto o = sd_compare(next, prev);
    return o == SdOrdering::Equal ||
           o == (dir == Direction::Lower ? SdOrdering::FirstDominates
                                         : SdOrdering::SecondDominates);
}

bool strategy_order_ok(const Strategy& next, const Strategy& prev, Direction dir) {
    return dir == Direction::Lower ? coordinatewise_leq(prev, next)
                                   : coordinatewise_leq(next, prev);
}

EquilibriumResult verify_pair(const Strategy& mu, const PopulationState& own,
                              const PopulationState& aggregate,
                              const GameSpec& game, double tol_value) {
    GameTable table(game, aggregate);
    const auto vi = value_iteration(table, tol_value);
    const auto v_mu = policy_value(mu, table, tol_value);

    EquilibriumResult res;
    res.strategy = mu;
    res.population_state = own;
    res.fixed_point_residual = tv_distance(own, step_population(mu, table, own));
    double gap = 0.0;
    for (std::size_t x = 0; x < vi.value.values.size(); ++x)
        gap = std::max(gap, vi.value.values[x] - v_mu.values[x]);
    res.optimality_gap = std::max(0.0, gap);
    res.is_equilibrium = res.fixed_point_residual < residual_threshold &&
                         res.optimality_gap < gap_threshold;
    res.converged = true;
    return res;
}

enum class Algo { Mld, Brd };

RunResult run_dynamic(const GameSpec& game, Direction dir, Algo algo,
                      const DynamicsOptions& opt) {
    game.check();
    if (!(opt.tol > 0.0)) throw std::invalid_argument("run: tol must be > 0");
    if (algo == Algo::Brd && game.coupling == Coupling::Action)
        throw std::invalid_argument("run_brd: action-coupled games are not supported here");

    const std::size_t ns = game.state_count();
    const bool action_coupled = game.coupling == Coupling::Action;

    RunResult run;
    Trajectory& traj = run.trajectory;
    PopulationState f = PopulationState::point_mass(
        game.states, dir == Direction::Lower ? 0 : ns - 1);
    traj.population_states.push_back(f);

    PopulationState alpha = f; // placeholder unless action-coupled
    if (action_coupled) {
        alpha = PopulationState::point_mass(
            game.actions, dir == Direction::Lower ? 0 : game.action_count() - 1);
        traj.action_states.push_back(alpha);
    }

    std::vector<double> warm;
    bool stopped = false;

    for (int t = 0; t < opt.max_iters && !stopped; ++t) {
        GameTable table(game, action_coupled ? alpha : f);
        const auto vi = value_iteration(table, opt.dp_tol, 100000, warm);
        warm = vi.value.values;
        const auto brs = best_response_set(table, vi.value, opt.eps_opt);
        Strategy mu = dir == Direction::Lower ? extract_smallest(brs)
                                              : extract_largest(brs);

        if (!mu.nondecreasing()) ++traj.strategy_violations;
        if (!traj.strategies.empty() &&
            !strategy_order_ok(mu, traj.strategies.back(), dir))
            ++traj.strategy_violations;

        PopulationState f_next;
        if (algo == Algo::Mld) {
            f_next = step_population(mu, table, f);
        } else {
            const auto inv = invariant_extreme(
                mu, table,
                dir == Direction::Lower ? Extreme::Smallest : Extreme::Largest,
                opt.invariant_tol, opt.invariant_max_iters);
            if (!inv.converged) {
                run.diagnostic = "invariant iteration stalled at step " +
                                 std::to_string(t) + " (TV step " +
                                 std::to_string(inv.final_step) + ")";
                break;
            }
            f_next = inv.distribution;
        }

        const double tv = tv_distance(f_next, f);
        if (!order_ok(f_next, f, dir)) ++traj.monotone_violations;

        traj.strategies.push_back(std::move(mu));
        traj.tv_steps.push_back(tv);
        traj.population_states.push_back(f_next);
        f = std::move(f_next);

        double tv_alpha = 0.0;
        if (action_coupled) {
            PopulationState alpha_next =
                action_pushforward(traj.strategies.back(), f, game.actions);
            tv_alpha = tv_distance(alpha_next, alpha);
            if (!order_ok(alpha_next, alpha, dir)) ++traj.monotone_violations;
            traj.action_states.push_back(alpha_next);
            alpha = std::move(alpha_next);
        }

        stopped = tv < opt.tol && (!action_coupled || tv_alpha < opt.tol);
    }

    // Verify the extremal best response to the final state as the candidate
    // equilibrium pair.
    {
        GameTable table(game, action_coupled ? alpha : f);
        const auto vi = value_iteration(table, opt.dp_tol, 100000, warm);
        const auto brs = best_response_set(table, vi.value, opt.eps_opt);
        Strategy mu_star = dir == Direction::Lower ? extract_smallest(brs)
                                                   : extract_largest(brs);
        run.equilibrium = check_equilibrium(mu_star, f, game, opt.dp_tol);
    }
    run.equilibrium.iterations = static_cast<int>(traj.tv_steps.size());
    run.equilibrium.converged = stopped;
    return run;
}

} // namespace

RunResult run_mld(const GameSpec& game, Direction dir, const DynamicsOptions& opt) {
    return run_dynamic(game, dir, Algo::Mld, opt);
}

RunResult run_brd(const GameSpec& game, Direction dir, const DynamicsOptions& opt) {
    return run_dynamic(game, dir, Algo::Brd, opt);
}

EquilibriumResult check_equilibrium(const Strategy& mu, const PopulationState& f,
                                    const GameSpec& game, double tol_value) {
    if (game.coupling == Coupling::Action) {
        const auto alpha = action_pushforward(mu, f, game.actions);
        return verify_pair(mu, f, alpha, game, tol_value);
    }
    return verify_pair(mu, f, f, game, tol_value);
}

EquilibriumResult check_equilibrium_against(const Strategy& mu,
                                            const PopulationState& own,
                                            const PopulationState& aggregate,
                                            const GameSpec& game,
                                            double tol_value) {
    return verify_pair(mu, own, aggregate, game, tol_value);
}

TypedRunResult run_mld_typed(const TypedGameSpec& typed, Direction dir,
                             const DynamicsOptions& opt) {
    typed.check();
    const auto& front = typed.types.front().game;
    const std::size_t ns = front.state_count();
    const std::size_t nt = typed.types.size();

    auto mix = [&](const std::vector<PopulationState>& parts) {
        std::vector<double> w(ns, 0.0);
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t x = 0; x < ns; ++x)
                w[x] += typed.types[i].mass * parts[i][x];
        return PopulationState(front.states, std::move(w));
    };

    std::vector<PopulationState> parts(
        nt, PopulationState::point_mass(front.states,
                                        dir == Direction::Lower ? 0 : ns - 1));
    PopulationState mixture = mix(parts);

    TypedRunResult res;
    res.mixture_trajectory.population_states.push_back(mixture);
    res.type_trajectories.resize(nt);
    for (std::size_t i = 0; i < nt; ++i)
        res.type_trajectories[i].population_states.push_back(parts[i]);
    std::vector<std::vector<double>> warm(nt);
    std::vector<Strategy> last_mu(nt);
    bool stopped = false;

    for (int t = 0; t < opt.max_iters && !stopped; ++t) {
        for (std::size_t i = 0; i < nt; ++i) {
            GameTable table(typed.types[i].game, mixture);
            const auto vi = value_iteration(table, opt.dp_tol, 100000, warm[i]);
            warm[i] = vi.value.values;
            const auto brs = best_response_set(table, vi.value, opt.eps_opt);
            last_mu[i] = dir == Direction::Lower ? extract_smallest(brs)
                                                 : extract_largest(brs);
            parts[i] = step_population(last_mu[i], table, parts[i]);

            auto& tt = res.type_trajectories[i];
            if (!last_mu[i].nondecreasing()) ++tt.strategy_violations;
            if (!tt.strategies.empty() &&
                !strategy_order_ok(last_mu[i], tt.strategies.back(), dir))
                ++tt.strategy_violations;
            if (!order_ok(parts[i], tt.population_states.back(), dir))
                ++tt.monotone_violations;
            tt.tv_steps.push_back(
                tv_distance(parts[i], tt.population_states.back()));
            tt.strategies.push_back(last_mu[i]);
            tt.population_states.push_back(parts[i]);
        }
        PopulationState next = mix(parts);
        const double tv = tv_distance(next, mixture);
        if (!order_ok(next, mixture, dir))
            ++res.mixture_trajectory.monotone_violations;
        res.mixture_trajectory.tv_steps.push_back(tv);
        res.mixture_trajectory.population_states.push_back(next);
        mixture = std::move(next);
        res.iterations = t + 1;
        stopped = tv < opt.tol;
    }
    res.converged = stopped;
    res.mixture = mixture;

    for (std::size_t i = 0; i < nt; ++i) {
        GameTable table(typed.types[i].game, mixture);
        const auto vi = value_iteration(table, opt.dp_tol, 100000, warm[i]);
        const auto brs = best_response_set(table, vi.value, opt.eps_opt);
        Strategy mu = dir == Direction::Lower ? extract_smallest(brs)
                                              : extract_largest(brs);
        auto check = check_equilibrium_against(mu, parts[i], mixture,
                                               typed.types[i].game, opt.dp_tol);
        check.iterations = res.iterations;
        check.converged = res.converged;
        res.per_type.push_back(std::move(check));
    }
    return res;
}

} // namespace mfg
