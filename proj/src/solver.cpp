#include "mfg/solver.hpp"

#include "mfg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mfg {

bool Strategy::nondecreasing() const {
    for (std::size_t x = 1; x < action_index.size(); ++x)
        if (action_index[x] < action_index[x - 1]) return false;
    return true;
}

bool coordinatewise_leq(const Strategy& a, const Strategy& b) {
    if (a.action_index.size() != b.action_index.size())
        throw std::invalid_argument("coordinatewise_leq: size mismatch");
    for (std::size_t x = 0; x < a.action_index.size(); ++x)
        if (a.action_index[x] > b.action_index[x]) return false;
    return true;
}

GameTable::GameTable(const GameSpec& game, PopulationState aggregate)
    : game_(&game), agg_(std::move(aggregate)) {
    game.check();
    if (!same_grid(agg_.grid(), *game.aggregate_grid()))
        throw std::invalid_argument("GameTable: aggregate lives on the wrong grid");

    const std::size_t ns = game.state_count();
    base_.resize(ns);
    std::size_t slots = 0;
    for (std::size_t x = 0; x < ns; ++x) {
        base_[x] = slots;
        slots += static_cast<std::size_t>(game.feasible[x].count());
    }
    payoff_.resize(slots);
    rows_.resize(slots * ns);

    for (std::size_t x = 0; x < ns; ++x) {
        const auto& r = game.feasible[x];
        for (int a = r.first; a <= r.last; ++a) {
            const std::size_t s = slot(static_cast<int>(x), a);
            payoff_[s] = game.payoff(static_cast<int>(x), a, agg_);
            std::span<double> row{rows_.data() + s * ns, ns};
            game.kernel(static_cast<int>(x), a, agg_, row);
        }
    }
}

double backup_value(const GameTable& t, std::span<const double> v, int x, int a) {
    const auto row = t.row(x, a);
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * v[i];
    return t.payoff(x, a) + t.game().discount * acc;
}

std::vector<double> bellman_backup(std::span<const double> v, const GameTable& t) {
    const std::size_t ns = t.state_count();
    if (v.size() != ns)
        throw std::invalid_argument("bellman_backup: value size mismatch");
    std::vector<double> out(ns);
    for (std::size_t x = 0; x < ns; ++x) {
        const auto& r = t.game().feasible[x];
        double best = backup_value(t, v, static_cast<int>(x), r.first);
        for (int a = r.first + 1; a <= r.last; ++a)
            best = std::max(best, backup_value(t, v, static_cast<int>(x), a));
        out[x] = best;
    }
    return out;
}

std::vector<double> bellman_backup(std::span<const double> v,
                                   const PopulationState& f, const GameSpec& game) {
    return bellman_backup(v, GameTable(game, f));
}

ValueIterationResult value_iteration(const GameTable& t, double tol, int max_iters,
                                     std::span<const double> warm_start) {
    if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be > 0");
    const std::size_t ns = t.state_count();
    std::vector<double> v(ns, 0.0);
    if (!warm_start.empty()) {
        if (warm_start.size() != ns)
            throw std::invalid_argument("value_iteration: warm start size mismatch");
        v.assign(warm_start.begin(), warm_start.end());
    }

    ValueIterationResult res{ValueFunction{{}, t.aggregate()}, 0, 0.0, 0.0};
    for (int k = 0; k < max_iters; ++k) {
        std::vector<double> next = bellman_backup(v, t);
        double l1 = 0.0, sup = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            const double d = std::abs(next[i] - v[i]);
            l1 += d;
            sup = std::max(sup, d);
        }
        v = std::move(next);
        res.iterations = k + 1;
        res.l1_residual = l1;
        res.sup_residual = sup;
        if (l1 < tol) {
            res.value.values = std::move(v);
            return res;
        }
    }
    throw ConvergenceError("value_iteration: no convergence after " +
                               std::to_string(max_iters) + " sweeps, sup residual " +
                               std::to_string(res.sup_residual),
                           res.sup_residual);
}

ValueIterationResult value_iteration(const PopulationState& f, const GameSpec& game,
                                     double tol, int max_iters) {
    return value_iteration(GameTable(game, f), tol, max_iters);
}

BestResponseSet best_response_set(const GameTable& t, const ValueFunction& v_star,
                                  double eps_opt) {
    if (!same_grid(v_star.population_state.grid(), t.aggregate().grid()) ||
        tv_distance(v_star.population_state, t.aggregate()) > 0.0)
        throw std::invalid_argument(
            "best_response_set: value was computed against a different aggregate");
    const std::size_t ns = t.state_count();
    BestResponseSet brs;
    brs.maximizers.resize(ns);
    std::vector<double> q;
    for (std::size_t x = 0; x < ns; ++x) {
        const auto& r = t.game().feasible[x];
        q.resize(static_cast<std::size_t>(r.count()));
        double best = -std::numeric_limits<double>::infinity();
        for (int a = r.first; a <= r.last; ++a) {
            q[a - r.first] = backup_value(t, v_star.values, static_cast<int>(x), a);
            best = std::max(best, q[a - r.first]);
        }
        for (int a = r.first; a <= r.last; ++a)
            if (q[a - r.first] >= best - eps_opt)
                brs.maximizers[x].push_back(a);
    }
    return brs;
}

Strategy extract_smallest(const BestResponseSet& brs) {
    Strategy mu;
    mu.action_index.reserve(brs.maximizers.size());
    for (const auto& set : brs.maximizers) {
        if (set.empty())
            throw std::invalid_argument("extract_smallest: empty maximizer set");
        mu.action_index.push_back(set.front());
    }
    return mu;
}

Strategy extract_largest(const BestResponseSet& brs) {
    Strategy mu;
    mu.action_index.reserve(brs.maximizers.size());
    for (const auto& set : brs.maximizers) {
        if (set.empty())
            throw std::invalid_argument("extract_largest: empty maximizer set");
        mu.action_index.push_back(set.back());
    }
    return mu;
}

namespace {

void check_feasible_strategy(const Strategy& mu, const GameSpec& game) {
    if (mu.action_index.size() != game.state_count())
        throw std::invalid_argument("policy_value: strategy size mismatch");
    for (std::size_t x = 0; x < mu.action_index.size(); ++x)
        if (!game.feasible[x].contains(mu.action_index[x]))
            throw std::invalid_argument("policy_value: infeasible action at state " +
                                        std::to_string(x));
}

} // namespace

ValueFunction policy_value(const Strategy& mu, const GameTable& t, double tol,
                           int max_iters) {
    check_feasible_strategy(mu, t.game());
    const std::size_t ns = t.state_count();
    const double beta = t.game().discount;

    if (ns <= 200) {
        // (I - beta * P_mu) V = payoff_mu
        std::vector<double> a(ns * ns, 0.0), b(ns);
        for (std::size_t x = 0; x < ns; ++x) {
            const auto row = t.row(static_cast<int>(x), mu.action_index[x]);
            for (std::size_t y = 0; y < ns; ++y)
                a[x * ns + y] = (x == y ? 1.0 : 0.0) - beta * row[y];
            b[x] = t.payoff(static_cast<int>(x), mu.action_index[x]);
        }
        return ValueFunction{solve_dense(std::move(a), std::move(b)), t.aggregate()};
    }

    std::vector<double> v(ns, 0.0), next(ns);
    for (int k = 0; k < max_iters; ++k) {
        double l1 = 0.0;
        for (std::size_t x = 0; x < ns; ++x) {
            next[x] = backup_value(t, v, static_cast<int>(x), mu.action_index[x]);
            l1 += std::abs(next[x] - v[x]);
        }
        v.swap(next);
        if (l1 < tol) return ValueFunction{std::move(v), t.aggregate()};
    }
    throw ConvergenceError("policy_value: no convergence", tol);
}

ValueFunction policy_value(const Strategy& mu, const PopulationState& f,
                           const GameSpec& game, double tol) {
    return policy_value(mu, GameTable(game, f), tol);
}

} // namespace mfg
