#pragma once

#include "mfg/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mfg {

// Margins within +-check_tolerance count as satisfied (weak inequalities).
constexpr double check_tolerance = 1e-9;

/// One failed complementarity/monotonicity inequality, with the witness
/// needed to re-evaluate it: grid indices, the distribution-pair index into
/// the ProbeSet, and the step-function threshold for stochastic conditions.
struct Violation {
    std::string condition;
    int x = -1, x2 = -1;
    int a = -1, a2 = -1;
    int probe = -1;
    int threshold = -1;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; // lhs - rhs; recorded only when < -tol
};

/// SD-comparable distribution pairs (lo precedes hi).  Uniformly random
/// pairs are almost never comparable, so pairs are built as lattice
/// meet/join of Dirichlet draws, plus the extreme point masses.
struct ProbeSet {
    std::vector<std::pair<PopulationState, PopulationState>> f_pairs;
    std::uint64_t seed = 0;
};

ProbeSet make_probes(const GridPtr& grid, int count, std::uint64_t seed);

struct ValidateOptions {
    int probes = 200;          // sampled tuples per condition
    std::uint64_t seed = 12345;
    double tol = check_tolerance;
    int max_recorded = 100;    // per condition; checking continues past this
};

/// Payoff conditions of a game with complementarities: monotone in the
/// state, supermodular in (x,a), increasing differences in (x,a) and the
/// aggregate, and a nondecreasing per-state payoff supremum.
std::vector<Violation> check_payoff(const GameSpec& game, const ProbeSet& probes,
                                    const ValidateOptions& opt = {});

/// Kernel conditions, checked against every {0,1} step function on the grid
/// (exhaustive for first-order stochastic statements): stochastically
/// monotone in x, a, and the aggregate, stochastically supermodular in
/// (x,a), and stochastically increasing differences in (x,a) and the
/// aggregate.
std::vector<Violation> check_kernel(const GameSpec& game, const ProbeSet& probes,
                                    const ValidateOptions& opt = {});

/// Separable-game conditions: monotone utility (skipped under the
/// decoupled-kernel relaxation), increasing differences of the utility,
/// nondecreasing convex cost, kernel-parameter shape (monotone,
/// supermodular, concave in the action), and parameter-kernel monotonicity
/// and complementarity.
std::vector<Violation> check_separable(const SeparableSpec& s, const ProbeSet& probes,
                                       const ValidateOptions& opt = {});

/// Convenience wrappers generating probes from the options.
std::vector<Violation> check_payoff(const GameSpec& game, const ValidateOptions& opt = {});
std::vector<Violation> check_kernel(const GameSpec& game, const ValidateOptions& opt = {});
std::vector<Violation> check_separable(const SeparableSpec& s, const ValidateOptions& opt = {});

} // namespace mfg
