#include "mfg/commands.hpp"

#include "mfg/io.hpp"
#include "mfg/simulate.hpp"
#include "mfg/validate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace mfg {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct Audit {
    std::vector<std::string> checked;         // condition ids examined
    std::vector<Violation> violations;
};

/// Run the audit appropriate to the model: Definition-9 style checks for
/// separable models (plus the standard-game checks on the transformed game
/// when the utility is monotone), standard-game checks otherwise.
Audit audit_model(const LoadedModel& m, int probes, std::uint64_t seed) {
    Audit a;
    ValidateOptions opt;
    opt.probes = probes;
    opt.seed = seed;
    auto absorb = [&a](std::vector<Violation> v) {
        a.violations.insert(a.violations.end(), v.begin(), v.end());
    };
    if (m.separable) {
        a.checked = {"utility-nondecreasing-x", "utility-increasing-differences-x-f",
                     "cost-nondecreasing", "cost-convex",
                     "kernel-param-nondecreasing-x", "kernel-param-nondecreasing-a",
                     "kernel-param-supermodular-(x,a)", "kernel-param-concave-a",
                     "param-kernel-monotone-h", "param-kernel-monotone-f",
                     "param-kernel-increasing-differences-h-f"};
        absorb(check_separable(*m.separable_spec, opt));
        if (m.separable_spec->payoff_monotone) {
            a.checked.insert(a.checked.end(),
                             {"payoff-nondecreasing-x", "payoff-supermodular-(x,a)",
                              "payoff-increasing-differences-(x,a)-f",
                              "payoff-sup-nondecreasing-x", "kernel-monotone-x",
                              "kernel-monotone-a", "kernel-monotone-f",
                              "kernel-supermodular-(x,a)",
                              "kernel-increasing-differences-(x,a)-f"});
            auto pr = make_probes(m.game.aggregate_grid(), opt.probes, opt.seed);
            absorb(check_payoff(m.game, pr, opt));
            absorb(check_kernel(m.game, pr, opt));
        }
    } else {
        a.checked = {"payoff-nondecreasing-x", "payoff-supermodular-(x,a)",
                     "payoff-increasing-differences-(x,a)-f",
                     "payoff-sup-nondecreasing-x", "kernel-monotone-x",
                     "kernel-monotone-a", "kernel-monotone-f",
                     "kernel-supermodular-(x,a)",
                     "kernel-increasing-differences-(x,a)-f"};
        auto pr = make_probes(m.game.aggregate_grid(), opt.probes, opt.seed);
        absorb(check_payoff(m.game, pr, opt));
        absorb(check_kernel(m.game, pr, opt));
    }
    return a;
}

void write_violations_csv(const std::string& dir, const std::vector<Violation>& vs) {
    CsvFile csv(fs::path(dir) / "violations.csv",
                {"condition", "x", "x2", "a", "a2", "probe", "threshold", "lhs",
                 "rhs", "margin"});
    for (const auto& v : vs)
        csv.row({v.condition, std::to_string(v.x), std::to_string(v.x2),
                 std::to_string(v.a), std::to_string(v.a2), std::to_string(v.probe),
                 std::to_string(v.threshold), csv_number(v.lhs), csv_number(v.rhs),
                 csv_number(v.margin)});
}

void print_verdict_table(const Audit& a) {
    std::map<std::string, std::pair<int, double>> tally; // count, worst margin
    for (const auto& v : a.violations) {
        auto& t = tally[v.condition];
        ++t.first;
        t.second = std::min(t.second, v.margin);
    }
    std::printf("%-45s %-6s %10s %14s\n", "condition", "result", "violations",
                "worst margin");
    for (const auto& c : a.checked) {
        auto it = tally.find(c);
        if (it == tally.end())
            std::printf("%-45s %-6s %10d %14s\n", c.c_str(), "PASS", 0, "-");
        else
            std::printf("%-45s %-6s %10d %14.3e\n", c.c_str(), "FAIL",
                        it->second.first, it->second.second);
    }
}

std::string algorithm_label(const std::string& algorithm) {
    if (algorithm == "l-mld" || algorithm == "u-mld" || algorithm == "l-brd" ||
        algorithm == "u-brd")
        return algorithm;
    throw ConfigError("unknown algorithm '" + algorithm +
                      "' (expected l-mld, u-mld, l-brd, or u-brd)");
}

/// Original-action value for a transformed-game action index; identity for
/// untransformed games.
double action_value(const LoadedModel& m, int state, int action_index) {
    if (m.transform) {
        const int a = m.transform->pullback_action(state, action_index);
        return (*m.separable_spec->actions)[a];
    }
    return (*m.game.actions)[action_index];
}

void write_run_artifacts(const std::string& dir, const LoadedModel& m,
                         const RunResult& run) {
    const auto& states = m.game.states;
    {
        CsvFile csv(fs::path(dir) / "population.csv", {"iteration", "state", "weight"});
        for (std::size_t t = 0; t < run.trajectory.population_states.size(); ++t)
            for (std::size_t x = 0; x < states->size(); ++x)
                csv.row({std::to_string(t), csv_number((*states)[x]),
                         csv_number(run.trajectory.population_states[t][x])});
    }
    {
        CsvFile csv(fs::path(dir) / "strategy.csv", {"iteration", "state", "action"});
        for (std::size_t t = 0; t < run.trajectory.strategies.size(); ++t) {
            const auto& mu = run.trajectory.strategies[t];
            for (std::size_t x = 0; x < states->size(); ++x)
                csv.row({std::to_string(t), csv_number((*states)[x]),
                         csv_number(action_value(m, static_cast<int>(x),
                                                 mu.action_index[x]))});
        }
    }
    {
        CsvFile csv(fs::path(dir) / "convergence.csv", {"iteration", "tv_step"});
        for (std::size_t t = 0; t < run.trajectory.tv_steps.size(); ++t)
            csv.row({std::to_string(t + 1), csv_number(run.trajectory.tv_steps[t])});
    }
    {
        CsvFile csv(fs::path(dir) / "equilibrium.csv",
                    {"residual", "gap", "iterations", "converged"});
        csv.row({csv_number(run.equilibrium.fixed_point_residual),
                 csv_number(run.equilibrium.optimality_gap),
                 std::to_string(run.equilibrium.iterations),
                 run.equilibrium.converged ? "true" : "false"});
    }
    {
        const auto c = cdf(run.equilibrium.population_state);
        LineSeries s{"final", states->points(),
                     std::vector<double>(c.values().begin(), c.values().end())};
        write_line_svg(fs::path(dir) / "cdf.svg", "population state CDF", "state",
                       "cumulative mass", {s});
    }
}

void write_typed_artifacts(const std::string& dir, const LoadedModel& m,
                           const TypedRunResult& run) {
    const auto& states = m.game.states;
    {
        CsvFile csv(fs::path(dir) / "population.csv", {"iteration", "state", "weight"});
        for (std::size_t t = 0; t < run.mixture_trajectory.population_states.size(); ++t)
            for (std::size_t x = 0; x < states->size(); ++x)
                csv.row({std::to_string(t), csv_number((*states)[x]),
                         csv_number(run.mixture_trajectory.population_states[t][x])});
    }
    {
        CsvFile csv(fs::path(dir) / "convergence.csv", {"iteration", "tv_step"});
        for (std::size_t t = 0; t < run.mixture_trajectory.tv_steps.size(); ++t)
            csv.row({std::to_string(t + 1),
                     csv_number(run.mixture_trajectory.tv_steps[t])});
    }
    {
        CsvFile csv(fs::path(dir) / "equilibrium.csv",
                    {"type", "residual", "gap", "iterations", "converged"});
        for (std::size_t i = 0; i < run.per_type.size(); ++i)
            csv.row({m.type_labels[i],
                     csv_number(run.per_type[i].fixed_point_residual),
                     csv_number(run.per_type[i].optimality_gap),
                     std::to_string(run.per_type[i].iterations),
                     run.per_type[i].converged ? "true" : "false"});
    }
    for (std::size_t i = 0; i < run.per_type.size(); ++i) {
        const auto& label = m.type_labels[i];
        CsvFile pop(fs::path(dir) / ("population_" + label + ".csv"),
                    {"state", "weight"});
        CsvFile strat(fs::path(dir) / ("strategy_" + label + ".csv"),
                      {"state", "action"});
        const auto& r = run.per_type[i];
        for (std::size_t x = 0; x < states->size(); ++x) {
            pop.row({csv_number((*states)[x]), csv_number(r.population_state[x])});
            strat.row({csv_number((*states)[x]),
                       csv_number(action_value(m, static_cast<int>(x),
                                               r.strategy.action_index[x]))});
        }
    }
    {
        const auto c = cdf(run.mixture);
        LineSeries s{"mixture", states->points(),
                     std::vector<double>(c.values().begin(), c.values().end())};
        write_line_svg(fs::path(dir) / "cdf.svg", "mixture population CDF", "state",
                       "cumulative mass", {s});
    }
}

/// Shared pre-run validation gate for solve/sweep.
bool validation_gate(const LoadedModel& m, bool skip, const std::string& what) {
    if (skip) return true;
    const auto audit = audit_model(m, 60, m.seed);
    if (audit.violations.empty()) return true;
    std::fprintf(stderr,
                 "%s: model fails %zu complementarity check(s); "
                 "run the validate subcommand for details or pass --skip-validate\n",
                 what.c_str(), audit.violations.size());
    return false;
}

std::string sanitize(const std::string& label) {
    std::string out = label;
    for (char& c : out)
        if (c == '/' || c == '\\' || c == ' ') c = '-';
    return out;
}

struct SweepPoint {
    std::string label;
    bool typed = false;
    PopulationState final_state;
    double mean_state = 0.0;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    double gap = 0.0;
};

} // namespace

int worker_count(std::size_t jobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("MFG_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return static_cast<int>(std::min<std::size_t>(cap, std::max<std::size_t>(jobs, 1)));
}

int cmd_validate(const ValidateCmd& cmd) {
    const auto t0 = Clock::now();
    LoadedModel m;
    try {
        m = load_model_file(cmd.config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    }
    const std::uint64_t seed = cmd.seed.value_or(m.seed);
    const auto audit = audit_model(m, cmd.probes, seed);
    print_verdict_table(audit);

    ensure_dir(cmd.out_dir);
    write_violations_csv(cmd.out_dir, audit.violations);
    write_manifest(cmd.out_dir, "validate " + cmd.config_path, m.resolved, seed,
                   seconds_since(t0));
    if (audit.violations.empty()) {
        std::printf("verdict: PASS (%zu conditions)\n", audit.checked.size());
        return exit_ok;
    }
    std::printf("verdict: FAIL (%zu violation records in violations.csv)\n",
                audit.violations.size());
    return exit_violations;
}

int cmd_solve(const SolveCmd& cmd) {
    const auto t0 = Clock::now();
    LoadedModel m;
    std::string algorithm;
    try {
        m = load_model_file(cmd.config_path);
        algorithm = algorithm_label(cmd.algorithm);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    }
    if (cmd.tol) m.dynamics.tol = *cmd.tol;
    if (cmd.max_iters) m.dynamics.max_iters = *cmd.max_iters;
    if (!validation_gate(m, cmd.skip_validate, "solve")) return exit_violations;

    const Direction dir =
        algorithm[0] == 'l' ? Direction::Lower : Direction::Upper;
    const bool brd = algorithm.substr(2) == "brd";

    ensure_dir(cmd.out_dir);
    bool converged = false;
    try {
        if (m.typed) {
            if (brd)
                throw ConfigError("heterogeneous runs support l-mld and u-mld only");
            auto run = run_mld_typed(*m.typed, dir, m.dynamics);
            write_typed_artifacts(cmd.out_dir, m, run);
            converged = run.converged;
            std::printf("%s (typed): iterations=%d converged=%s mixture mean=%s\n",
                        algorithm.c_str(), run.iterations,
                        converged ? "true" : "false", csv_number(mean(run.mixture)).c_str());
        } else {
            auto run = brd ? run_brd(m.game, dir, m.dynamics)
                           : run_mld(m.game, dir, m.dynamics);
            write_run_artifacts(cmd.out_dir, m, run);
            converged = run.equilibrium.converged;
            if (!run.diagnostic.empty())
                std::fprintf(stderr, "diagnostic: %s\n", run.diagnostic.c_str());
            std::printf("%s: iterations=%d converged=%s residual=%s gap=%s\n",
                        algorithm.c_str(), run.equilibrium.iterations,
                        converged ? "true" : "false",
                        csv_number(run.equilibrium.fixed_point_residual).c_str(),
                        csv_number(run.equilibrium.optimality_gap).c_str());
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config_error;
    }
    write_manifest(cmd.out_dir, "solve --algorithm " + algorithm + " " +
                       cmd.config_path,
                   m.resolved, m.seed, seconds_since(t0));
    return converged ? exit_ok : exit_not_converged;
}

int cmd_sweep(const SweepCmd& cmd) {
    const auto t0 = Clock::now();
    ConfigDoc doc;
    LoadedModel base;
    try {
        doc = parse_config_file(cmd.config_path);
        base = build_model(doc);
        if (cmd.values.empty()) throw ConfigError("sweep needs at least one value");
        if (cmd.param != "cost" && cmd.param != "kappa" && cmd.param != "delta" &&
            cmd.param != "drift" && cmd.param != "fraction_low")
            throw ConfigError("unknown sweep parameter '" + cmd.param + "'");
        if (cmd.param != "drift" && cmd.param != "fraction_low" &&
            base.model != "security" && base.model != "custom")
            throw ConfigError("parameter '" + cmd.param +
                              "' is not available for model '" + base.model + "'");
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    }
    if (!validation_gate(base, cmd.skip_validate, "sweep")) return exit_violations;

    ensure_dir(cmd.out_dir);
    std::vector<SweepPoint> points(cmd.values.size());
    std::exception_ptr config_problem;
    std::mutex mu;

    parallel_for(cmd.values.size(), [&](std::size_t i) {
        const std::string& value = cmd.values[i];
        ConfigDoc local = doc;
        try {
            if (cmd.param == "drift") {
                const auto slash = value.find('/');
                if (slash == std::string::npos)
                    throw ConfigError("drift values look like q_minus/q_plus, got '" +
                                      value + "'");
                local.set("kernel", "q_minus", value.substr(0, slash));
                local.set("kernel", "q_plus", value.substr(slash + 1));
            } else if (cmd.param == "fraction_low") {
                local.set("payoff", "fraction_low", value);
            } else {
                local.set("payoff", cmd.param, value);
            }
            LoadedModel m = build_model(local);
            if (cmd.tol) m.dynamics.tol = *cmd.tol;
            if (cmd.max_iters) m.dynamics.max_iters = *cmd.max_iters;

            SweepPoint p;
            p.label = value;
            const std::string sub = ensure_dir(
                (fs::path(cmd.out_dir) / ("point_" + sanitize(value))).string());
            if (m.typed) {
                auto run = run_mld_typed(*m.typed, Direction::Lower, m.dynamics);
                write_typed_artifacts(sub, m, run);
                p.typed = true;
                p.final_state = run.mixture;
                p.iterations = run.iterations;
                p.converged = run.converged;
                for (const auto& r : run.per_type) {
                    p.residual = std::max(p.residual, r.fixed_point_residual);
                    p.gap = std::max(p.gap, r.optimality_gap);
                }
            } else {
                auto run = run_mld(m.game, Direction::Lower, m.dynamics);
                write_run_artifacts(sub, m, run);
                p.final_state = run.equilibrium.population_state;
                p.iterations = run.equilibrium.iterations;
                p.converged = run.equilibrium.converged;
                p.residual = run.equilibrium.fixed_point_residual;
                p.gap = run.equilibrium.optimality_gap;
            }
            p.mean_state = mean(p.final_state);
            points[i] = std::move(p);
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!config_problem) config_problem = std::current_exception();
        }
    });
    if (config_problem) {
        try {
            std::rethrow_exception(config_problem);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "sweep point failed: %s\n", e.what());
            return exit_config_error;
        }
    }

    {
        CsvFile csv(fs::path(cmd.out_dir) / "sweep_cdfs.csv",
                    {"value", "state", "weight", "cdf"});
        for (const auto& p : points) {
            const auto c = cdf(p.final_state);
            for (std::size_t x = 0; x < p.final_state.size(); ++x)
                csv.row({p.label, csv_number(p.final_state.grid()[x]),
                         csv_number(p.final_state[x]), csv_number(c[x])});
        }
    }
    {
        CsvFile csv(fs::path(cmd.out_dir) / "sweep_summary.csv",
                    {"value", "mean", "iterations", "converged", "residual", "gap"});
        for (const auto& p : points)
            csv.row({p.label, csv_number(p.mean_state), std::to_string(p.iterations),
                     p.converged ? "true" : "false", csv_number(p.residual),
                     csv_number(p.gap)});
    }
    int incomparable = 0;
    {
        CsvFile csv(fs::path(cmd.out_dir) / "sd_matrix.csv",
                    {"value_a", "value_b", "ordering"});
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                const auto o = sd_compare(points[i].final_state, points[j].final_state);
                if (o == SdOrdering::Incomparable) ++incomparable;
                csv.row({points[i].label, points[j].label, to_string(o)});
            }
    }
    bool up = true, down = true;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const auto o = sd_compare(points[i + 1].final_state, points[i].final_state);
        if (o != SdOrdering::FirstDominates && o != SdOrdering::Equal) up = false;
        if (o != SdOrdering::SecondDominates && o != SdOrdering::Equal) down = false;
    }
    std::string verdict = up && down  ? "constant"
                          : up        ? "sd-nondecreasing"
                          : down      ? "sd-nonincreasing"
                                      : "not-sd-monotone";
    if (incomparable > 0)
        verdict += " (" + std::to_string(incomparable) + " incomparable pairs)";
    std::printf("sweep %s over {", cmd.param.c_str());
    for (std::size_t i = 0; i < points.size(); ++i)
        std::printf("%s%s", i ? ", " : "", points[i].label.c_str());
    std::printf("}: %s\n", verdict.c_str());
    {
        std::ofstream out(fs::path(cmd.out_dir) / "verdict.txt", std::ios::binary);
        out << verdict << '\n';
    }
    {
        std::vector<LineSeries> series;
        for (const auto& p : points) {
            const auto c = cdf(p.final_state);
            series.push_back({cmd.param + "=" + p.label, p.final_state.grid().points(),
                              std::vector<double>(c.values().begin(), c.values().end())});
        }
        write_line_svg(fs::path(cmd.out_dir) / "cdf.svg",
                       "equilibrium CDFs by " + cmd.param, "state", "cumulative mass",
                       series);
    }
    write_manifest(cmd.out_dir, "sweep --param " + cmd.param + " " + cmd.config_path,
                   base.resolved, base.seed, seconds_since(t0));
    for (const auto& p : points)
        if (!p.converged) return exit_not_converged;
    return exit_ok;
}

int cmd_simulate(const SimulateCmd& cmd) {
    const auto t0 = Clock::now();
    LoadedModel m;
    try {
        m = load_model_file(cmd.config_path);
        if (cmd.players < 2) throw ConfigError("--players must be at least 2");
        if (cmd.replications < 1) throw ConfigError("--replications must be positive");
        if (cmd.direction != "lower" && cmd.direction != "upper")
            throw ConfigError("--direction must be lower or upper");
        if (m.typed)
            throw ConfigError("finite-player simulation runs homogeneous models");
        if (m.game.coupling != Coupling::State)
            throw ConfigError("finite-player simulation needs a state-coupled model");
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    }
    const Direction dir =
        cmd.direction == "lower" ? Direction::Lower : Direction::Upper;

    // mean-field reference of the same length
    DynamicsOptions ref_opt = m.dynamics;
    ref_opt.max_iters = cmd.steps;
    auto mf = run_mld(m.game, dir, ref_opt);
    const auto reference =
        fit_length(mf.trajectory, static_cast<std::size_t>(cmd.steps) + 1);

    std::vector<FiniteTrajectory> runs(cmd.replications);
    std::vector<ComparisonSeries> cmps(cmd.replications);
    parallel_for(runs.size(), [&](std::size_t r) {
        SimConfig sim;
        sim.players = cmd.players;
        sim.steps = cmd.steps;
        sim.seed = cmd.seed + r;
        sim.direction = dir;
        sim.game = m.game;
        sim.dp_tol = m.dynamics.dp_tol;
        runs[r] = simulate_finite_mld(sim);
        cmps[r] = compare_to_meanfield(runs[r], reference);
    });

    ensure_dir(cmd.out_dir);
    {
        CsvFile csv(fs::path(cmd.out_dir) / "tv_series.csv",
                    {"replication", "step", "tv_to_meanfield", "tv_step"});
        for (std::size_t r = 0; r < runs.size(); ++r)
            for (std::size_t t = 0; t < cmps[r].tv.size(); ++t)
                csv.row({std::to_string(r), std::to_string(t),
                         csv_number(cmps[r].tv[t]),
                         csv_number(t == 0 ? 0.0 : runs[r].tv_steps[t - 1])});
    }
    {
        CsvFile csv(fs::path(cmd.out_dir) / "empirical.csv",
                    {"replication", "state", "weight"});
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const auto& f = runs[r].empirical.back();
            for (std::size_t x = 0; x < f.size(); ++x)
                csv.row({std::to_string(r), csv_number(f.grid()[x]),
                         csv_number(f[x])});
        }
    }
    std::vector<double> finals;
    double max_final = 0.0;
    for (const auto& c : cmps) {
        finals.push_back(c.final_tv);
        max_final = std::max(max_final, c.final_tv);
    }
    std::sort(finals.begin(), finals.end());
    const std::size_t n = finals.size();
    const double median = n % 2 ? finals[n / 2]
                                : 0.5 * (finals[n / 2 - 1] + finals[n / 2]);
    {
        CsvFile csv(fs::path(cmd.out_dir) / "summary.csv",
                    {"players", "steps", "replications", "median_final_tv",
                     "max_final_tv"});
        csv.row({std::to_string(cmd.players), std::to_string(cmd.steps),
                 std::to_string(cmd.replications), csv_number(median),
                 csv_number(max_final)});
    }
    {
        std::vector<LineSeries> series;
        for (std::size_t r = 0; r < cmps.size(); ++r) {
            LineSeries s;
            s.name = "replication " + std::to_string(r);
            for (std::size_t t = 0; t < cmps[r].tv.size(); ++t) {
                s.xs.push_back(static_cast<double>(t));
                s.ys.push_back(cmps[r].tv[t]);
            }
            series.push_back(std::move(s));
        }
        write_line_svg(fs::path(cmd.out_dir) / "tv.svg",
                       "distance to the mean-field run (m=" +
                           std::to_string(cmd.players) + ")",
                       "step", "total variation", series);
    }
    write_manifest(cmd.out_dir, "simulate " + cmd.config_path, m.resolved, cmd.seed,
                   seconds_since(t0));
    std::printf("simulate: players=%d replications=%d median final TV=%s\n",
                cmd.players, cmd.replications, csv_number(median).c_str());
    return exit_ok;
}

} // namespace mfg
