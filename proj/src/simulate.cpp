#include "mfg/simulate.hpp"

#include "mfg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfg {

namespace {

PopulationState empirical_state(const std::vector<int>& states, const GridPtr& grid) {
    std::vector<double> w(grid->size(), 0.0);
    const double share = 1.0 / static_cast<double>(states.size());
    for (int s : states) w[s] += share;
    return PopulationState(grid, std::move(w));
}

} // namespace

FiniteTrajectory simulate_finite_mld(const SimConfig& cfg) {
    cfg.game.check();
    if (cfg.players < 2)
        throw std::invalid_argument("simulate_finite_mld: need at least 2 players");
    if (cfg.steps < 0)
        throw std::invalid_argument("simulate_finite_mld: negative step count");
    if (cfg.game.coupling != Coupling::State)
        throw std::invalid_argument(
            "simulate_finite_mld: only state-coupled games are simulated");

    const std::size_t ns = cfg.game.state_count();
    const int start = cfg.direction == Direction::Lower ? 0 : static_cast<int>(ns) - 1;
    std::vector<int> states(cfg.players, start);

    FiniteTrajectory out;
    out.empirical.push_back(empirical_state(states, cfg.game.states));

    std::vector<double> warm;
    std::vector<double> cumulative(ns);
    std::vector<std::vector<double>> cum_rows(ns); // per origin state, lazily built
    std::vector<int> next(cfg.players);

    for (int t = 0; t < cfg.steps; ++t) {
        const PopulationState& f = out.empirical.back();
        GameTable table(cfg.game, f);
        const auto vi = value_iteration(table, cfg.dp_tol, 100000, warm);
        warm = vi.value.values;
        const auto brs = best_response_set(table, vi.value, cfg.eps_opt);
        const Strategy mu = cfg.direction == Direction::Lower ? extract_smallest(brs)
                                                              : extract_largest(brs);

        for (auto& r : cum_rows) r.clear();
        for (int i = 0; i < cfg.players; ++i) {
            const int x = states[i];
            auto& cum = cum_rows[x];
            if (cum.empty()) {
                const auto row = table.row(x, mu.action_index[x]);
                cum.resize(ns);
                double acc = 0.0;
                for (std::size_t y = 0; y < ns; ++y) {
                    acc += row[y];
                    cum[y] = acc;
                }
            }
            const double u = stream_uniform(cfg.seed, static_cast<std::uint64_t>(t),
                                            static_cast<std::uint64_t>(i));
            const auto it = std::upper_bound(cum.begin(), cum.end(), u);
            next[i] = static_cast<int>(std::min<std::ptrdiff_t>(
                it - cum.begin(), static_cast<std::ptrdiff_t>(ns) - 1));
        }
        states = next;
        auto emp = empirical_state(states, cfg.game.states);
        out.tv_steps.push_back(tv_distance(emp, out.empirical.back()));
        out.empirical.push_back(std::move(emp));
    }
    out.final_states = std::move(states);
    return out;
}

Trajectory fit_length(Trajectory mf, std::size_t states) {
    if (mf.population_states.empty())
        throw std::invalid_argument("fit_length: empty trajectory");
    while (mf.population_states.size() > states) mf.population_states.pop_back();
    while (mf.population_states.size() < states)
        mf.population_states.push_back(mf.population_states.back());
    return mf;
}

ComparisonSeries compare_to_meanfield(const FiniteTrajectory& fin,
                                      const Trajectory& mf) {
    if (fin.empirical.size() != mf.population_states.size())
        throw std::invalid_argument("compare_to_meanfield: trajectory length mismatch");
    ComparisonSeries out;
    out.tv.reserve(fin.empirical.size());
    for (std::size_t t = 0; t < fin.empirical.size(); ++t) {
        out.tv.push_back(tv_distance(fin.empirical[t], mf.population_states[t]));
        out.max_tv = std::max(out.max_tv, out.tv.back());
    }
    out.final_tv = out.tv.back();
    return out;
}

} // namespace mfg
