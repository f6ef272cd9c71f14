#include "mfg/commands.hpp"
#include "mfg/io.hpp"

#include "CLI11.hpp"

#include <cstdio>

int main(int argc, char** argv) {
    CLI::App app{"mean field equilibrium solver for anonymous stochastic games "
                 "with complementarities"};
    app.set_version_flag("--version", std::string("mfgsolve ") + mfg::tool_version);
    app.require_subcommand(1);

    mfg::ValidateCmd validate;
    auto* cv = app.add_subcommand(
        "validate", "audit a model's monotonicity and complementarity conditions");
    cv->add_option("config", validate.config_path, "model config file")->required();
    cv->add_option("--out", validate.out_dir, "output directory");
    cv->add_option("--probes", validate.probes, "sampled probes per condition");
    std::uint64_t seed_opt = 0;
    auto* seed_flag = cv->add_option("--seed", seed_opt, "probe RNG seed");

    mfg::SolveCmd solve;
    auto* cs = app.add_subcommand("solve", "run a learning dynamic to equilibrium");
    cs->add_option("config", solve.config_path, "model config file")->required();
    cs->add_option("--algorithm", solve.algorithm, "l-mld | u-mld | l-brd | u-brd");
    cs->add_option("--out", solve.out_dir, "output directory");
    double tol = 0.0;
    auto* tol_flag = cs->add_option("--tol", tol, "successive-TV stopping tolerance");
    int max_iters = 0;
    auto* iters_flag = cs->add_option("--max-iters", max_iters, "iteration cap");
    cs->add_flag("--skip-validate", solve.skip_validate,
                 "skip the pre-run complementarity audit");

    mfg::SweepCmd sweep;
    auto* cw = app.add_subcommand("sweep",
                                  "comparative statics across a parameter range");
    cw->add_option("config", sweep.config_path, "model config file")->required();
    cw->add_option("--param", sweep.param,
                   "cost | kappa | delta | drift | fraction_low")
        ->required();
    cw->add_option("--values", sweep.values, "comma-separated parameter values")
        ->required()
        ->delimiter(',');
    cw->add_option("--out", sweep.out_dir, "output directory");
    double sweep_tol = 0.0;
    auto* sweep_tol_flag = cw->add_option("--tol", sweep_tol, "stopping tolerance");
    int sweep_iters = 0;
    auto* sweep_iters_flag = cw->add_option("--max-iters", sweep_iters, "iteration cap");
    cw->add_flag("--skip-validate", sweep.skip_validate,
                 "skip the pre-run complementarity audit");

    mfg::SimulateCmd simulate;
    auto* cm = app.add_subcommand("simulate",
                                  "finite-player Monte Carlo learning dynamics");
    cm->add_option("config", simulate.config_path, "model config file")->required();
    cm->add_option("--players", simulate.players, "number of players (>= 2)");
    cm->add_option("--steps", simulate.steps, "simulation steps");
    cm->add_option("--seed", simulate.seed, "base seed (replication r uses seed + r)");
    cm->add_option("--replications", simulate.replications, "independent runs");
    cm->add_option("--direction", simulate.direction, "lower | upper");
    cm->add_option("--out", simulate.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cv->parsed()) {
            if (*seed_flag) validate.seed = seed_opt;
            return mfg::cmd_validate(validate);
        }
        if (cs->parsed()) {
            if (*tol_flag) solve.tol = tol;
            if (*iters_flag) solve.max_iters = max_iters;
            return mfg::cmd_solve(solve);
        }
        if (cw->parsed()) {
            if (*sweep_tol_flag) sweep.tol = sweep_tol;
            if (*sweep_iters_flag) sweep.max_iters = sweep_iters;
            return mfg::cmd_sweep(sweep);
        }
        if (cm->parsed()) return mfg::cmd_simulate(simulate);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fatal: %s\n", e.what());
        return 70;
    }
    return 0;
}
