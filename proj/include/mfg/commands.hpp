#pragma once

#include "mfg/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mfg {

// Exit codes shared by all subcommands.
constexpr int exit_ok = 0;
constexpr int exit_violations = 1;
constexpr int exit_config_error = 2;
constexpr int exit_not_converged = 3;

struct ValidateCmd {
    std::string config_path;
    std::string out_dir = ".";
    int probes = 200;
    std::optional<std::uint64_t> seed;
};

struct SolveCmd {
    std::string config_path;
    std::string algorithm = "l-mld"; // l-mld | u-mld | l-brd | u-brd
    std::string out_dir = ".";
    std::optional<double> tol;
    std::optional<int> max_iters;
    bool skip_validate = false;
};

struct SweepCmd {
    std::string config_path;
    std::string param; // cost | kappa | delta | drift | fraction_low
    std::vector<std::string> values;
    std::string out_dir = ".";
    std::optional<double> tol;
    std::optional<int> max_iters;
    bool skip_validate = false;
};

struct SimulateCmd {
    std::string config_path;
    int players = 50;
    int steps = 1000;
    std::uint64_t seed = 1;
    int replications = 1;
    std::string direction = "lower";
    std::string out_dir = ".";
};

int cmd_validate(const ValidateCmd& cmd);
int cmd_solve(const SolveCmd& cmd);
int cmd_sweep(const SweepCmd& cmd);
int cmd_simulate(const SimulateCmd& cmd);

/// Worker-pool width: min(jobs, MFG_WORKERS or hardware concurrency).
int worker_count(std::size_t jobs);

} // namespace mfg
