#include "mfg/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace mfg {

namespace {

PopulationState dirichlet(const GridPtr& grid, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> w(grid->size());
    double sum = 0.0;
    for (double& v : w) { v = exp1(rng); sum += v; }
    for (double& v : w) v /= sum;
    return PopulationState(grid, std::move(w));
}

class Recorder {
public:
    Recorder(std::vector<Violation>& out, const ValidateOptions& opt)
        : out_(&out), opt_(opt) {}

    void note(const char* condition, double lhs, double rhs, int x, int x2, int a,
              int a2, int probe, int threshold = -1) {
        const double margin = lhs - rhs;
        if (margin >= -opt_.tol) return;
        int& n = counts_[condition];
        ++n;
        if (n > opt_.max_recorded) return;
        out_->push_back(Violation{condition, x, x2, a, a2, probe, threshold,
                                  lhs, rhs, margin});
    }

private:
    std::vector<Violation>* out_;
    ValidateOptions opt_;
    std::map<std::string, int> counts_;
};

struct Tuple {
    int x, x2;        // x < x2
    int a;            // feasible at x
    int a2;           // feasible at x2
    int a2_geq;       // feasible at x2 and >= a
    int a_common;     // feasible at both, or -1
    int a_up;         // feasible at x and > a, or -1
    int probe;
};

std::vector<Tuple> make_tuples(const GameSpec& game, std::size_t n_pairs,
                               const ValidateOptions& opt) {
    const int ns = static_cast<int>(game.state_count());
    std::vector<Tuple> tuples;

    auto fill = [&](int x, int x2, int a, int a2, std::size_t idx) {
        const auto& rx = game.feasible[x];
        const auto& rx2 = game.feasible[x2];
        Tuple t;
        t.x = x;
        t.x2 = x2;
        t.a = a;
        t.a2 = a2;
        t.a2_geq = std::max(a, rx2.first);
        const int clo = rx2.first, chi = rx.last; // intersection of the ranges
        t.a_common = clo <= chi ? std::min(std::max(a, clo), chi) : -1;
        t.a_up = a < rx.last ? a + 1 : -1;
        t.probe = static_cast<int>(idx % n_pairs);
        return t;
    };

    const bool exhaustive =
        game.state_count() <= 12 && game.action_count() <= 8;
    if (exhaustive) {
        std::size_t idx = 0;
        for (int x = 0; x < ns; ++x)
            for (int x2 = x + 1; x2 < ns; ++x2)
                for (int a = game.feasible[x].first; a <= game.feasible[x].last; ++a)
                    for (int a2 = game.feasible[x2].first;
                         a2 <= game.feasible[x2].last; ++a2)
                        tuples.push_back(fill(x, x2, a, a2, idx++));
    } else {
        std::mt19937_64 rng(opt.seed + 1);
        std::uniform_int_distribution<int> xs(0, ns - 2);
        for (int i = 0; i < opt.probes; ++i) {
            const int x = xs(rng);
            std::uniform_int_distribution<int> x2s(x + 1, ns - 1);
            const int x2 = x2s(rng);
            std::uniform_int_distribution<int> as(game.feasible[x].first,
                                                  game.feasible[x].last);
            std::uniform_int_distribution<int> a2s(game.feasible[x2].first,
                                                   game.feasible[x2].last);
            tuples.push_back(fill(x, x2, as(rng), a2s(rng), static_cast<std::size_t>(i)));
        }
    }
    return tuples;
}

/// Survival function S[k] = P(next state >= k | x, a, agg).
void survival(const GameSpec& game, int x, int a, const PopulationState& agg,
              std::vector<double>& row, std::vector<double>& s) {
    row.resize(game.state_count());
    game.kernel(x, a, agg, row);
    const std::size_t n = row.size();
    s.resize(n);
    double acc = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        acc += row[k];
        s[k] = acc;
    }
}

/// Worst pointwise margin of lhs >= rhs over interior thresholds.
std::pair<double, int> worst_threshold(const std::vector<double>& lhs,
                                       const std::vector<double>& rhs) {
    double worst = 1e300;
    int at = -1;
    for (std::size_t k = 1; k < lhs.size(); ++k) {
        const double m = lhs[k] - rhs[k];
        if (m < worst) { worst = m; at = static_cast<int>(k); }
    }
    return {worst, at};
}

} // namespace

ProbeSet make_probes(const GridPtr& grid, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("make_probes: count must be positive");
    ProbeSet p;
    p.seed = seed;
    std::mt19937_64 rng(seed);
    p.f_pairs.emplace_back(PopulationState::point_mass(grid, 0),
                           PopulationState::point_mass(grid, grid->size() - 1));
    p.f_pairs.emplace_back(PopulationState::point_mass(grid, 0),
                           PopulationState::uniform(grid));
    while (p.f_pairs.size() < static_cast<std::size_t>(count)) {
        auto u = dirichlet(grid, rng);
        auto v = dirichlet(grid, rng);
        p.f_pairs.emplace_back(sd_inf(u, v), sd_sup(u, v));
    }
    return p;
}

std::vector<Violation> check_payoff(const GameSpec& game, const ProbeSet& probes,
                                    const ValidateOptions& opt) {
    game.check();
    if (probes.f_pairs.empty())
        throw std::invalid_argument("check_payoff: empty probe set");
    std::vector<Violation> out;
    Recorder rec(out, opt);
    const auto tuples = make_tuples(game, probes.f_pairs.size(), opt);

    auto sup_payoff = [&](int x, const PopulationState& f) {
        const auto& r = game.feasible[x];
        double best = game.payoff(x, r.first, f);
        for (int a = r.first + 1; a <= r.last; ++a)
            best = std::max(best, game.payoff(x, a, f));
        return best;
    };

    for (const auto& t : tuples) {
        const auto& lo = probes.f_pairs[t.probe].first;
        const auto& hi = probes.f_pairs[t.probe].second;

        for (const PopulationState* f : {&lo, &hi}) {
            if (t.a_common >= 0)
                rec.note("payoff-nondecreasing-x", game.payoff(t.x2, t.a_common, *f),
                         game.payoff(t.x, t.a_common, *f), t.x, t.x2, t.a_common, -1,
                         t.probe);

            const int join = std::max(t.a, t.a2);
            const int meet = std::min(t.a, t.a2);
            rec.note("payoff-supermodular-(x,a)",
                     game.payoff(t.x2, join, *f) + game.payoff(t.x, meet, *f),
                     game.payoff(t.x2, t.a2, *f) + game.payoff(t.x, t.a, *f), t.x,
                     t.x2, t.a, t.a2, t.probe);

            rec.note("payoff-sup-nondecreasing-x", sup_payoff(t.x2, *f),
                     sup_payoff(t.x, *f), t.x, t.x2, -1, -1, t.probe);
        }

        rec.note("payoff-increasing-differences-(x,a)-f",
                 game.payoff(t.x2, t.a2_geq, hi) - game.payoff(t.x, t.a, hi),
                 game.payoff(t.x2, t.a2_geq, lo) - game.payoff(t.x, t.a, lo), t.x,
                 t.x2, t.a, t.a2_geq, t.probe);
    }
    return out;
}

std::vector<Violation> check_kernel(const GameSpec& game, const ProbeSet& probes,
                                    const ValidateOptions& opt) {
    game.check();
    if (probes.f_pairs.empty())
        throw std::invalid_argument("check_kernel: empty probe set");
    std::vector<Violation> out;
    Recorder rec(out, opt);
    const auto tuples = make_tuples(game, probes.f_pairs.size(), opt);

    std::vector<double> row, sa, sb, sc, sd;
    auto surv = [&](int x, int a, const PopulationState& f, std::vector<double>& s) {
        survival(game, x, a, f, row, s);
    };

    for (const auto& t : tuples) {
        const auto& lo = probes.f_pairs[t.probe].first;
        const auto& hi = probes.f_pairs[t.probe].second;

        for (const PopulationState* f : {&lo, &hi}) {
            if (t.a_common >= 0) {
                surv(t.x2, t.a_common, *f, sa);
                surv(t.x, t.a_common, *f, sb);
                auto [m, k] = worst_threshold(sa, sb);
                rec.note("kernel-monotone-x", m, 0.0, t.x, t.x2, t.a_common, -1,
                         t.probe, k);
            }
            if (t.a_up >= 0) {
                surv(t.x, t.a_up, *f, sa);
                surv(t.x, t.a, *f, sb);
                auto [m, k] = worst_threshold(sa, sb);
                rec.note("kernel-monotone-a", m, 0.0, t.x, -1, t.a, t.a_up, t.probe, k);
            }
            {
                const int join = std::max(t.a, t.a2);
                const int meet = std::min(t.a, t.a2);
                surv(t.x2, join, *f, sa);
                surv(t.x, meet, *f, sb);
                surv(t.x2, t.a2, *f, sc);
                surv(t.x, t.a, *f, sd);
                double worst = 1e300;
                int at = -1;
                for (std::size_t k = 1; k < sa.size(); ++k) {
                    const double m = sa[k] + sb[k] - sc[k] - sd[k];
                    if (m < worst) { worst = m; at = static_cast<int>(k); }
                }
                rec.note("kernel-supermodular-(x,a)", worst, 0.0, t.x, t.x2, t.a,
                         t.a2, t.probe, at);
            }
        }

        {
            surv(t.x, t.a, hi, sa);
            surv(t.x, t.a, lo, sb);
            auto [m, k] = worst_threshold(sa, sb);
            rec.note("kernel-monotone-f", m, 0.0, t.x, -1, t.a, -1, t.probe, k);
        }
        {
            surv(t.x2, t.a2_geq, hi, sa);
            surv(t.x, t.a, hi, sb);
            surv(t.x2, t.a2_geq, lo, sc);
            surv(t.x, t.a, lo, sd);
            double worst = 1e300;
            int at = -1;
            for (std::size_t k = 1; k < sa.size(); ++k) {
                const double m = (sa[k] - sb[k]) - (sc[k] - sd[k]);
                if (m < worst) { worst = m; at = static_cast<int>(k); }
            }
            rec.note("kernel-increasing-differences-(x,a)-f", worst, 0.0, t.x, t.x2,
                     t.a, t.a2_geq, t.probe, at);
        }
    }
    return out;
}

std::vector<Violation> check_separable(const SeparableSpec& s, const ProbeSet& probes,
                                       const ValidateOptions& opt) {
    s.check();
    if (probes.f_pairs.empty())
        throw std::invalid_argument("check_separable: empty probe set");
    std::vector<Violation> out;
    Recorder rec(out, opt);
    const int ns = static_cast<int>(s.states->size());
    const int na = static_cast<int>(s.actions->size());

    // cost shape: nondecreasing, convex (divided differences)
    for (int a = 0; a + 1 < na; ++a)
        rec.note("cost-nondecreasing", s.cost(a + 1), s.cost(a), -1, -1, a, a + 1, -1);
    for (int a = 0; a + 2 < na; ++a) {
        const double d1 = (s.cost(a + 1) - s.cost(a)) /
                          ((*s.actions)[a + 1] - (*s.actions)[a]);
        const double d2 = (s.cost(a + 2) - s.cost(a + 1)) /
                          ((*s.actions)[a + 2] - (*s.actions)[a + 1]);
        rec.note("cost-convex", d2, d1, -1, -1, a, a + 2, -1);
    }

    // kernel-parameter shape
    for (int x = 0; x < ns; ++x)
        for (int a = 0; a + 1 < na; ++a)
            rec.note("kernel-param-nondecreasing-a", s.kernel_param(x, a + 1),
                     s.kernel_param(x, a), x, -1, a, a + 1, -1);
    for (int x = 0; x + 1 < ns; ++x)
        for (int a = 0; a < na; ++a)
            rec.note("kernel-param-nondecreasing-x", s.kernel_param(x + 1, a),
                     s.kernel_param(x, a), x, x + 1, a, -1, -1);
    for (int x = 0; x + 1 < ns; ++x)
        for (int a = 0; a + 1 < na; ++a)
            rec.note("kernel-param-supermodular-(x,a)",
                     s.kernel_param(x + 1, a + 1) + s.kernel_param(x, a),
                     s.kernel_param(x + 1, a) + s.kernel_param(x, a + 1), x, x + 1,
                     a, a + 1, -1);
    for (int x = 0; x < ns; ++x)
        for (int a = 0; a + 2 < na; ++a) {
            const double d1 = (s.kernel_param(x, a + 1) - s.kernel_param(x, a)) /
                              ((*s.actions)[a + 1] - (*s.actions)[a]);
            const double d2 = (s.kernel_param(x, a + 2) - s.kernel_param(x, a + 1)) /
                              ((*s.actions)[a + 2] - (*s.actions)[a + 1]);
            rec.note("kernel-param-concave-a", d1, d2, x, -1, a, a + 2, -1);
        }

    // utility conditions against sampled SD-ordered pairs
    std::mt19937_64 rng(opt.seed + 2);
    std::uniform_int_distribution<int> xs(0, ns - 2);
    const bool skip_monotone = !s.payoff_monotone && s.kernel_f_independent;
    for (int i = 0; i < opt.probes; ++i) {
        const int x = xs(rng);
        std::uniform_int_distribution<int> x2s(x + 1, ns - 1);
        const int x2 = x2s(rng);
        const int probe = i % static_cast<int>(probes.f_pairs.size());
        const auto& lo = probes.f_pairs[probe].first;
        const auto& hi = probes.f_pairs[probe].second;

        if (!skip_monotone) {
            rec.note("utility-nondecreasing-x", s.utility(x2, lo), s.utility(x, lo),
                     x, x2, -1, -1, probe);
            rec.note("utility-nondecreasing-x", s.utility(x2, hi), s.utility(x, hi),
                     x, x2, -1, -1, probe);
        }
        rec.note("utility-increasing-differences-x-f",
                 s.utility(x2, hi) - s.utility(x, hi),
                 s.utility(x2, lo) - s.utility(x, lo), x, x2, -1, -1, probe);
    }

    // parameter kernel: monotone in h and f, increasing differences, over the
    // attained parameter values and every step-function threshold
    std::vector<double> values;
    for (int x = 0; x < ns; ++x)
        for (int a = 0; a < na; ++a) values.push_back(s.kernel_param(x, a));
    std::sort(values.begin(), values.end());
    std::vector<double> hs;
    for (double v : values)
        if (hs.empty() || v - hs.back() > 1e-9) hs.push_back(v);

    std::vector<double> row(ns), sa(ns), sb(ns), sc(ns), sd(ns);
    auto surv = [&](double h, const PopulationState& f, std::vector<double>& sv) {
        std::span<double> r(row);
        s.param_kernel(h, f, r);
        double acc = 0.0;
        sv.resize(row.size());
        for (std::size_t k = row.size(); k-- > 0;) {
            acc += row[k];
            sv[k] = acc;
        }
    };

    for (std::size_t j = 0; j + 1 < hs.size(); ++j) {
        const int probe = static_cast<int>(j % probes.f_pairs.size());
        const auto& lo = probes.f_pairs[probe].first;
        const auto& hi = probes.f_pairs[probe].second;

        surv(hs[j + 1], lo, sa);
        surv(hs[j], lo, sb);
        auto [m1, k1] = worst_threshold(sa, sb);
        rec.note("param-kernel-monotone-h", m1, 0.0, static_cast<int>(j),
                 static_cast<int>(j + 1), -1, -1, probe, k1);

        surv(hs[j], hi, sc);
        auto [m2, k2] = worst_threshold(sc, sb);
        rec.note("param-kernel-monotone-f", m2, 0.0, static_cast<int>(j), -1, -1, -1,
                 probe, k2);

        surv(hs[j + 1], hi, sd);
        double worst = 1e300;
        int at = -1;
        for (std::size_t k = 1; k < sa.size(); ++k) {
            const double m = (sd[k] - sc[k]) - (sa[k] - sb[k]);
            if (m < worst) { worst = m; at = static_cast<int>(k); }
        }
        rec.note("param-kernel-increasing-differences-h-f", worst, 0.0,
                 static_cast<int>(j), static_cast<int>(j + 1), -1, -1, probe, at);
    }
    return out;
}

std::vector<Violation> check_payoff(const GameSpec& game, const ValidateOptions& opt) {
    return check_payoff(game, make_probes(game.aggregate_grid(), opt.probes, opt.seed),
                        opt);
}

std::vector<Violation> check_kernel(const GameSpec& game, const ValidateOptions& opt) {
    return check_kernel(game, make_probes(game.aggregate_grid(), opt.probes, opt.seed),
                        opt);
}

std::vector<Violation> check_separable(const SeparableSpec& s,
                                       const ValidateOptions& opt) {
    return check_separable(s, make_probes(s.states, opt.probes, opt.seed), opt);
}

} // namespace mfg
