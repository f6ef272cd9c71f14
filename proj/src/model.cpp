#include "mfg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mfg {

PopulationState GameSpec::kernel_row(int x, int a,
                                     const PopulationState& agg) const {
    std::vector<double> row(state_count(), 0.0);
    kernel(x, a, agg, row);
    return PopulationState(states, std::move(row));
}

void GameSpec::check() const {
    if (!states || !actions) throw std::invalid_argument("GameSpec: missing grid");
    if (states->size() < 2)
        throw std::invalid_argument("GameSpec: state grid needs at least 2 points");
    if (!(discount > 0.0 && discount < 1.0))
        throw std::invalid_argument("GameSpec: discount must lie in (0,1)");
    if (!payoff || !kernel)
        throw std::invalid_argument("GameSpec: missing payoff or kernel");
    if (feasible.size() != states->size())
        throw std::invalid_argument("GameSpec: one feasible range per state required");
    const int na = static_cast<int>(actions->size());
    for (std::size_t x = 0; x < feasible.size(); ++x) {
        const auto& r = feasible[x];
        if (r.first < 0 || r.last >= na || r.first > r.last)
            throw std::invalid_argument("GameSpec: invalid feasible range at state " +
                                        std::to_string(x));
        if (x > 0 && (r.first < feasible[x - 1].first || r.last < feasible[x - 1].last))
            throw std::invalid_argument(
                "GameSpec: feasible ranges must be nondecreasing in the state");
    }
}

std::vector<ActionRange> GameSpec::full_range(std::size_t n_states,
                                              std::size_t n_actions) {
    return std::vector<ActionRange>(
        n_states, ActionRange{0, static_cast<int>(n_actions) - 1});
}

NoiseSpec::NoiseSpec(std::vector<int> offs, std::vector<double> ps)
    : offsets(std::move(offs)), probs(std::move(ps)) {
    if (offsets.empty() || offsets.size() != probs.size())
        throw std::invalid_argument("NoiseSpec: offsets/probs size mismatch");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("NoiseSpec: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("NoiseSpec: probabilities sum to " +
                                    std::to_string(sum) + ", not 1");
    for (double& p : probs) p /= sum;
}

NoiseSpec NoiseSpec::three_point(double q_minus, double q_zero, double q_plus) {
    return NoiseSpec({-1, 0, 1}, {q_minus, q_zero, q_plus});
}

double NoiseSpec::mean_offset() const {
    double m = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i) m += offsets[i] * probs[i];
    return m;
}

bool NoiseSpec::deterministic() const {
    for (double p : probs)
        if (p > 0.0 && p < 1.0) return false;
    return true;
}

void deposit_on_grid(const Grid& grid, double value, double mass,
                     std::span<double> out) {
    const std::size_t n = grid.size();
    if (value <= grid.min()) { out[0] += mass; return; }
    if (value >= grid.max()) { out[n - 1] += mass; return; }
    const double t = (value - grid.min()) / grid.step();
    double ipart = 0.0;
    double frac = std::modf(t, &ipart);
    std::size_t i = static_cast<std::size_t>(ipart);
    if (frac < 1e-9) { out[i] += mass; return; }
    if (frac > 1.0 - 1e-9) { out[i + 1] += mass; return; }
    out[i] += (1.0 - frac) * mass;
    out[i + 1] += frac * mass;
}

void truncated_shift(const Grid& grid, double target, const NoiseSpec& noise,
                     std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double step = grid.step();
    for (std::size_t k = 0; k < noise.offsets.size(); ++k)
        deposit_on_grid(grid, target + noise.offsets[k] * step, noise.probs[k], out);
}

KernelFn linear_truncated_kernel(double a_coef, double b_coef, NoiseSpec noise,
                                 GridPtr state_grid, GridPtr action_grid) {
    if (!(a_coef >= 0.0 && b_coef >= 0.0))
        throw std::invalid_argument("linear_truncated_kernel: coefficients must be >= 0");
    if (!state_grid->equally_spaced())
        throw std::invalid_argument("linear_truncated_kernel: state grid must be equally spaced");
    return [a_coef, b_coef, noise = std::move(noise), sg = std::move(state_grid),
            ag = std::move(action_grid)](int x, int a, const PopulationState&,
                                         std::span<double> out) {
        truncated_shift(*sg, a_coef * (*sg)[x] + b_coef * (*ag)[a], noise, out);
    };
}

ParamKernelFn truncated_shift_param_kernel(NoiseSpec noise, GridPtr state_grid) {
    if (!state_grid->equally_spaced())
        throw std::invalid_argument("truncated_shift_param_kernel: grid must be equally spaced");
    return [noise = std::move(noise), sg = std::move(state_grid)](
               double h, const PopulationState&, std::span<double> out) {
        truncated_shift(*sg, h, noise, out);
    };
}

KernelFn mixture_kernel(MixtureWeightFn q, PopulationState mix_high,
                        PopulationState mix_low, GridPtr state_grid,
                        GridPtr action_grid) {
    if (!same_grid(mix_high.grid(), *state_grid) ||
        !same_grid(mix_low.grid(), *state_grid))
        throw std::invalid_argument("mixture_kernel: mixture ends must live on the state grid");
    if (!sd_geq(mix_high, mix_low))
        throw std::invalid_argument(
            "mixture_kernel: upper end must stochastically dominate lower end");
    return [q = std::move(q), hi = std::move(mix_high), lo = std::move(mix_low),
            sg = std::move(state_grid), ag = std::move(action_grid)](
               int x, int a, const PopulationState& agg, std::span<double> out) {
        double w = q((*sg)[x], (*ag)[a], agg);
        if (w < -1e-9 || w > 1.0 + 1e-9)
            throw std::invalid_argument("mixture_kernel: weight outside [0,1]");
        w = std::clamp(w, 0.0, 1.0);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = w * hi[i] + (1.0 - w) * lo[i];
    };
}

void SeparableSpec::check() const {
    if (!states || !actions) throw std::invalid_argument("SeparableSpec: missing grid");
    if (states->size() < 2)
        throw std::invalid_argument("SeparableSpec: state grid needs at least 2 points");
    if (!(discount > 0.0 && discount < 1.0))
        throw std::invalid_argument("SeparableSpec: discount must lie in (0,1)");
    if (!utility || !cost || !kernel_param || !param_kernel)
        throw std::invalid_argument("SeparableSpec: missing evaluator");
    if (!payoff_monotone && !kernel_f_independent)
        throw std::invalid_argument(
            "SeparableSpec: non-monotone utility requires an f-independent kernel");
}

double SeparableTransform::min_cost(int x, int h_index) const {
    const auto& r = game.feasible[x];
    if (!r.contains(h_index))
        throw std::out_of_range("SeparableTransform: parameter not feasible at state");
    return costs[x][h_index - r.first];
}

int SeparableTransform::pullback_action(int x, int h_index) const {
    const auto& r = game.feasible[x];
    if (!r.contains(h_index))
        throw std::out_of_range("SeparableTransform: parameter not feasible at state");
    return actions[x][h_index - r.first];
}

std::vector<int>
SeparableTransform::pull_back(const std::vector<int>& parameter_choice) const {
    if (parameter_choice.size() != game.state_count())
        throw std::invalid_argument("pull_back: one parameter index per state required");
    std::vector<int> out(parameter_choice.size());
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = pullback_action(static_cast<int>(x), parameter_choice[x]);
    return out;
}

SeparableTransform separable_to_standard(const SeparableSpec& s) {
    s.check();
    const int ns = static_cast<int>(s.states->size());
    const int na = static_cast<int>(s.actions->size());

    std::vector<std::vector<double>> h(ns, std::vector<double>(na));
    double span = 0.0;
    for (int x = 0; x < ns; ++x) {
        for (int a = 0; a < na; ++a) {
            h[x][a] = s.kernel_param(x, a);
            span = std::max(span, std::abs(h[x][a]));
            if (a > 0 && h[x][a] < h[x][a - 1] - 1e-12)
                throw std::invalid_argument(
                    "separable_to_standard: kernel parameter decreasing in the action at state " +
                    std::to_string(x));
        }
        if (h[x].empty())
            throw std::invalid_argument("separable_to_standard: empty feasible set at state " +
                                        std::to_string(x));
    }
    const double tol = 1e-9 * std::max(1.0, span);

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(ns) * na);
    for (const auto& row : h) values.insert(values.end(), row.begin(), row.end());
    std::sort(values.begin(), values.end());
    std::vector<double> grid_values;
    for (double v : values)
        if (grid_values.empty() || v - grid_values.back() > tol) grid_values.push_back(v);
    auto param_grid = std::make_shared<Grid>(std::move(grid_values));

    auto index_of = [&](double v) {
        const int i = param_grid->find(v, tol);
        if (i < 0)
            throw std::logic_error("separable_to_standard: parameter value lost in dedup");
        return i;
    };

    SeparableTransform t;
    t.parameter_grid = param_grid;
    t.ranges.resize(ns);
    t.costs.resize(ns);
    t.actions.resize(ns);
    for (int x = 0; x < ns; ++x) {
        const int lo = index_of(h[x].front());
        const int hi = index_of(h[x].back());
        t.ranges[x] = ActionRange{lo, hi};
        t.costs[x].resize(hi - lo + 1);
        t.actions[x].resize(hi - lo + 1);
        for (int j = lo; j <= hi; ++j) {
            const double target = (*param_grid)[j];
            double best = 0.0;
            int best_a = -1;
            for (int a = 0; a < na; ++a) {
                if (std::abs(h[x][a] - target) > tol) continue;
                const double c = s.cost(a);
                if (best_a < 0 || c < best) { best = c; best_a = a; }
            }
            if (best_a < 0)
                throw std::invalid_argument(
                    "separable_to_standard: parameter value " + std::to_string(target) +
                    " inside the feasible window of state " + std::to_string(x) +
                    " is attained by no action (incommensurate grids)");
            t.costs[x][j - lo] = best;
            t.actions[x][j - lo] = best_a;
        }
    }

    GameSpec g;
    g.states = s.states;
    g.actions = param_grid;
    g.feasible = t.ranges;
    g.discount = s.discount;
    g.coupling = Coupling::State;
    {
        // Copy the tables into the closures so the transform stays valid
        // even if the caller discards the SeparableTransform.
        auto ranges = t.ranges;
        auto costs = t.costs;
        auto utility = s.utility;
        g.payoff = [ranges, costs, utility](int x, int hidx,
                                            const PopulationState& f) {
            const auto& r = ranges[x];
            if (!r.contains(hidx))
                throw std::out_of_range("transformed payoff: infeasible parameter index");
            return utility(x, f) - costs[x][hidx - r.first];
        };
    }
    g.kernel = [pk = s.param_kernel, pg = param_grid](int, int hidx,
                                                      const PopulationState& f,
                                                      std::span<double> out) {
        pk((*pg)[hidx], f, out);
    };
    g.check();
    t.game = std::move(g);
    return t;
}

SeparableSpec build_security_model(double kappa, double cost, double delta,
                                   NoiseSpec noise, double beta, int state_max,
                                   int action_max) {
    if (!(kappa > 0.0)) throw std::invalid_argument("security model: kappa must be > 0");
    if (!(cost >= 0.0)) throw std::invalid_argument("security model: cost must be >= 0");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("security model: delta must lie in [0,1]");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("security model: beta must lie in (0,1)");
    if (state_max < 1 || action_max < 1)
        throw std::invalid_argument("security model: grid bounds must be positive");

    SeparableSpec s;
    s.states = Grid::integer_range(0, state_max);
    s.actions = Grid::integer_range(0, action_max);
    s.discount = beta;

    std::vector<double> breach(s.states->size());
    for (std::size_t i = 0; i < breach.size(); ++i)
        breach[i] = 1.0 / (1.0 + kappa * (*s.states)[i]);

    s.utility = [breach, delta](int x, const PopulationState& f) {
        double avg_breach = 0.0;
        for (std::size_t y = 0; y < f.size(); ++y) avg_breach += f[y] * breach[y];
        return -breach[x] - delta * (1.0 - breach[x]) * avg_breach;
    };
    s.cost = [cost, actions = s.actions](int a) { return cost * (*actions)[a]; };
    s.kernel_param = [sg = s.states, ag = s.actions](int x, int a) {
        return (*sg)[x] + (*ag)[a];
    };
    s.param_kernel = truncated_shift_param_kernel(std::move(noise), s.states);
    s.payoff_monotone = true;
    s.kernel_f_independent = true;
    return s;
}

SeparableSpec build_coordination_model(double a_coef, double b_coef,
                                       int action_max, int state_span,
                                       NoiseSpec noise, double beta) {
    if (!(a_coef > 0.0 && b_coef > 0.0))
        throw std::invalid_argument("coordination model: coefficients must be > 0");
    if (action_max < 1 || state_span < 1)
        throw std::invalid_argument("coordination model: grid bounds must be positive");
    if (noise.mean_offset() > 1e-12)
        throw std::invalid_argument("coordination model: noise drift must be <= 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("coordination model: beta must lie in (0,1)");

    SeparableSpec s;
    s.states = Grid::integer_range(-state_span, state_span);
    s.actions = Grid::integer_range(0, action_max);
    s.discount = beta;
    s.utility = [sg = s.states](int x, const PopulationState& f) {
        const double d = (*sg)[x] - mean(f);
        return -d * d;
    };
    s.cost = [ag = s.actions](int a) {
        const double v = (*ag)[a];
        return v * v;
    };
    s.kernel_param = [a_coef, b_coef, sg = s.states, ag = s.actions](int x, int a) {
        return a_coef * (*sg)[x] + b_coef * (*ag)[a];
    };
    s.param_kernel = truncated_shift_param_kernel(std::move(noise), s.states);
    s.payoff_monotone = false;
    s.kernel_f_independent = true;
    return s;
}

GameSpec build_search_model(int state_max, int action_max,
                            std::vector<double> action_cost,
                            PopulationState mix_high, PopulationState mix_low,
                            double beta) {
    if (state_max < 1 || action_max < 1)
        throw std::invalid_argument("search model: grid bounds must be positive");
    if (action_cost.size() != static_cast<std::size_t>(action_max) + 1)
        throw std::invalid_argument("search model: one cost per action required");

    GameSpec g;
    g.states = Grid::integer_range(0, state_max);
    g.actions = Grid::integer_range(0, action_max);
    g.discount = beta;
    g.coupling = Coupling::Action;
    g.feasible = GameSpec::full_range(g.states->size(), g.actions->size());
    g.payoff = [cost = std::move(action_cost), sg = g.states,
                ag = g.actions](int x, int a, const PopulationState& alpha) {
        return (*sg)[x] * (*ag)[a] * mean(alpha) - cost[a];
    };
    const double denom = static_cast<double>(state_max) + 2.0 * action_max;
    g.kernel = mixture_kernel(
        [denom](double x, double a, const PopulationState& alpha) {
            return (x + a + mean(alpha)) / denom;
        },
        std::move(mix_high), std::move(mix_low), g.states, g.actions);
    g.check();
    return g;
}

void TypedGameSpec::check() const {
    if (types.empty()) throw std::invalid_argument("TypedGameSpec: no types");
    double sum = 0.0;
    for (const auto& t : types) {
        if (!(t.mass >= 0.0))
            throw std::invalid_argument("TypedGameSpec: negative type mass");
        sum += t.mass;
        t.game.check();
        if (!same_grid(*t.game.states, *types.front().game.states) ||
            !same_grid(*t.game.actions, *types.front().game.actions))
            throw std::invalid_argument("TypedGameSpec: types must share grids");
        if (t.game.coupling != Coupling::State)
            throw std::invalid_argument("TypedGameSpec: typed runs are state-coupled");
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("TypedGameSpec: type masses sum to " +
                                    std::to_string(sum) + ", not 1");
}

} // namespace mfg
