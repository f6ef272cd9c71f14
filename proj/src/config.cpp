#include "mfg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mfg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Reads typed values out of one section, remembers which keys were touched
/// so unknown keys can be rejected, and records resolved values.
class SectionReader {
public:
    SectionReader(const ConfigDoc& doc, const std::string& section,
                  std::map<std::string, std::string>& resolved)
        : section_(section), resolved_(&resolved) {
        auto it = doc.sections.find(section);
        if (it != doc.sections.end()) keys_ = &it->second;
    }

    double number(const std::string& key, double fallback) {
        return parse_number(key, lookup(key), fallback);
    }

    int integer(const std::string& key, int fallback) {
        const double v = number(key, fallback);
        if (std::abs(v - std::round(v)) > 1e-9)
            throw ConfigError("[" + section_ + "] " + key + " must be an integer");
        return static_cast<int>(std::llround(v));
    }

    bool flag(const std::string& key, bool fallback) {
        auto raw = lookup(key);
        bool v = fallback;
        if (raw) {
            if (*raw == "true") v = true;
            else if (*raw == "false") v = false;
            else
                throw ConfigError("[" + section_ + "] " + key +
                                  " must be true or false");
        }
        record(key, v ? "true" : "false");
        return v;
    }

    std::optional<double> maybe_number(const std::string& key) {
        auto raw = lookup(key);
        if (!raw) return std::nullopt;
        return parse_number(key, raw, 0.0);
    }

    std::string text(const std::string& key, const std::string& fallback) {
        auto raw = lookup(key);
        const std::string v = raw ? *raw : fallback;
        record(key, v);
        return v;
    }

    /// Every key in the section must have been consumed by now.
    void finish() const {
        if (!keys_) return;
        for (const auto& [k, v] : *keys_)
            if (!used_.count(k))
                throw ConfigError("unknown key '" + k + "' in section [" + section_ +
                                  "]");
    }

private:
    std::optional<std::string> lookup(const std::string& key) {
        used_.insert(key);
        if (!keys_) return std::nullopt;
        auto it = keys_->find(key);
        if (it == keys_->end()) return std::nullopt;
        return it->second;
    }

    double parse_number(const std::string& key, const std::optional<std::string>& raw,
                        double fallback) {
        double v = fallback;
        if (raw) {
            try {
                std::size_t pos = 0;
                v = std::stod(*raw, &pos);
                if (pos != raw->size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError("[" + section_ + "] " + key +
                                  " is not a number: '" + *raw + "'");
            }
        }
        record(key, fmt(v));
        return v;
    }

    void record(const std::string& key, const std::string& value) {
        (*resolved_)[section_ + "." + key] = value;
    }

    std::string section_;
    const std::map<std::string, std::string>* keys_ = nullptr;
    std::map<std::string, std::string>* resolved_;
    std::set<std::string> used_;
};

NoiseSpec read_noise(SectionReader& kernel, double dm, double dz, double dp) {
    const double qm = kernel.number("q_minus", dm);
    const double qz = kernel.number("q_zero", dz);
    const double qp = kernel.number("q_plus", dp);
    try {
        return NoiseSpec::three_point(qm, qz, qp);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("[kernel] noise: ") + e.what());
    }
}

/// Fills the run options and seed; returns the discount factor for the
/// model builders.
double read_dynamics(SectionReader& dyn, LoadedModel& out, double beta_default) {
    DynamicsOptions opt;
    const double beta = dyn.number("beta", beta_default);
    if (!(beta > 0.0 && beta < 1.0))
        throw ConfigError("[dynamics] beta must lie in (0,1)");
    opt.tol = dyn.number("tol", dynamics_tolerance);
    opt.max_iters = dyn.integer("max_iters", dynamics_max_iters);
    opt.dp_tol = dyn.number("dp_tol", dp_tolerance);
    const double seed = dyn.number("seed", 12345);
    out.seed = static_cast<std::uint64_t>(seed);
    out.dynamics = opt;
    return beta;
}

void check_no_extra_sections(const ConfigDoc& doc,
                             const std::set<std::string>& allowed) {
    for (const auto& [name, kv] : doc.sections)
        if (!allowed.count(name))
            throw ConfigError("unknown section [" + name + "]");
}

void build_security(const ConfigDoc& doc, LoadedModel& out) {
    check_no_extra_sections(doc, {"grid", "actions", "payoff", "kernel", "dynamics"});
    SectionReader grid(doc, "grid", out.resolved);
    SectionReader actions(doc, "actions", out.resolved);
    SectionReader payoff(doc, "payoff", out.resolved);
    SectionReader kernel(doc, "kernel", out.resolved);
    SectionReader dyn(doc, "dynamics", out.resolved);

    const int xmax = grid.integer("max", 50);
    const int amax = actions.integer("max", 25);
    const double kappa = payoff.number("kappa", 0.05);
    const double cost = payoff.number("cost", 0.05);
    const double delta = payoff.number("delta", 1.0);
    const auto delta_low = payoff.maybe_number("delta_low");
    const auto delta_high = payoff.maybe_number("delta_high");
    const auto fraction_low = payoff.maybe_number("fraction_low");
    auto noise = read_noise(kernel, 0.4, 0.2, 0.4);
    const double beta = read_dynamics(dyn, out, 0.75);

    grid.finish(); actions.finish(); payoff.finish(); kernel.finish(); dyn.finish();

    auto make = [&](double d) {
        auto s = build_security_model(kappa, cost, d, noise, beta, xmax, amax);
        return s;
    };

    out.separable = true;
    out.separable_spec = make(delta);
    out.transform = separable_to_standard(*out.separable_spec);
    out.game = out.transform->game;

    if (fraction_low || delta_low || delta_high) {
        if (!(fraction_low && delta_low && delta_high))
            throw ConfigError("heterogeneity needs all of fraction_low, delta_low, "
                              "delta_high in [payoff]");
        if (*fraction_low < 0.0 || *fraction_low > 1.0)
            throw ConfigError("[payoff] fraction_low must lie in [0,1]");
        TypedGameSpec typed;
        typed.types.push_back(
            {"low", *fraction_low, separable_to_standard(make(*delta_low)).game});
        typed.types.push_back(
            {"high", 1.0 - *fraction_low, separable_to_standard(make(*delta_high)).game});
        typed.check();
        out.typed = std::move(typed);
        out.type_labels = {"low", "high"};
    }
}

void build_coordination(const ConfigDoc& doc, LoadedModel& out) {
    check_no_extra_sections(doc, {"grid", "actions", "kernel", "dynamics"});
    SectionReader grid(doc, "grid", out.resolved);
    SectionReader actions(doc, "actions", out.resolved);
    SectionReader kernel(doc, "kernel", out.resolved);
    SectionReader dyn(doc, "dynamics", out.resolved);

    const int span = grid.integer("span", 5);
    const int amax = actions.integer("max", 3);
    const double ca = kernel.number("A", 1.0);
    const double cb = kernel.number("B", 1.0);
    auto noise = read_noise(kernel, 0.45, 0.2, 0.35);
    const double beta = read_dynamics(dyn, out, 0.8);

    grid.finish(); actions.finish(); kernel.finish(); dyn.finish();

    out.separable = true;
    try {
        out.separable_spec = build_coordination_model(ca, cb, amax, span, noise, beta);
        out.transform = separable_to_standard(*out.separable_spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    out.game = out.transform->game;
}

void build_search(const ConfigDoc& doc, LoadedModel& out) {
    check_no_extra_sections(doc, {"grid", "actions", "payoff", "dynamics"});
    SectionReader grid(doc, "grid", out.resolved);
    SectionReader actions(doc, "actions", out.resolved);
    SectionReader payoff(doc, "payoff", out.resolved);
    SectionReader dyn(doc, "dynamics", out.resolved);

    const int xmax = grid.integer("max", 5);
    const int amax = actions.integer("max", 3);
    const double c0 = payoff.number("cost0", 0.0);
    const double c1 = payoff.number("cost1", 0.1);
    const double c2 = payoff.number("cost2", 0.0);
    const double beta = read_dynamics(dyn, out, 0.75);

    grid.finish(); actions.finish(); payoff.finish(); dyn.finish();

    std::vector<double> costs;
    for (int a = 0; a <= amax; ++a)
        costs.push_back(c0 + c1 * a + c2 * a * a);
    auto sg = Grid::integer_range(0, xmax);
    try {
        out.game = build_search_model(xmax, amax, std::move(costs),
                                      PopulationState::point_mass(sg, xmax),
                                      PopulationState::point_mass(sg, 0), beta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void build_custom(const ConfigDoc& doc, LoadedModel& out, const std::string& form,
                  const std::string& coupling) {
    check_no_extra_sections(doc, {"grid", "actions", "payoff", "kernel", "dynamics"});
    SectionReader grid(doc, "grid", out.resolved);
    SectionReader actions(doc, "actions", out.resolved);
    SectionReader payoff(doc, "payoff", out.resolved);
    SectionReader kernel(doc, "kernel", out.resolved);
    SectionReader dyn(doc, "dynamics", out.resolved);

    const int xmin = grid.integer("min", 0);
    const int xmax = grid.integer("max", 10);
    const int amin = actions.integer("min", 0);
    const int amax = actions.integer("max", 5);
    if (xmax <= xmin || amax < amin)
        throw ConfigError("empty state or action grid");
    auto sg = Grid::integer_range(xmin, xmax);
    auto ag = Grid::integer_range(amin, amax);

    const double beta = read_dynamics(dyn, out, 0.75);

    if (form == "separable") {
        if (coupling != "state")
            throw ConfigError("custom separable models are state-coupled");
        // v(x, f) = u0 + u1*x + u2*eta + u3*x*eta with eta = mean(f)
        const double u0 = payoff.number("u0", 0.0);
        const double u1 = payoff.number("u1", 1.0);
        const double u2 = payoff.number("u2", 0.0);
        const double u3 = payoff.number("u3", 0.0);
        const double c0 = payoff.number("cost0", 0.0);
        const double c1 = payoff.number("cost1", 0.1);
        const double c2 = payoff.number("cost2", 0.0);
        const bool monotone = payoff.flag("payoff_monotone", true);
        const double ca = kernel.number("A", 1.0);
        const double cb = kernel.number("B", 1.0);
        auto noise = read_noise(kernel, 0.4, 0.2, 0.4);
        grid.finish(); actions.finish(); payoff.finish(); kernel.finish(); dyn.finish();

        SeparableSpec s;
        s.states = sg;
        s.actions = ag;
        s.discount = beta;
        s.utility = [u0, u1, u2, u3, sg](int x, const PopulationState& f) {
            const double eta = mean(f);
            return u0 + u1 * (*sg)[x] + u2 * eta + u3 * (*sg)[x] * eta;
        };
        s.cost = [c0, c1, c2, ag](int a) {
            const double v = (*ag)[a];
            return c0 + c1 * v + c2 * v * v;
        };
        s.kernel_param = [ca, cb, sg, ag](int x, int a) {
            return ca * (*sg)[x] + cb * (*ag)[a];
        };
        s.param_kernel = truncated_shift_param_kernel(std::move(noise), sg);
        s.payoff_monotone = monotone;
        s.kernel_f_independent = true;
        try {
            out.separable = true;
            out.separable_spec = s;
            out.transform = separable_to_standard(s);
            out.game = out.transform->game;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        return;
    }

    if (form != "standard")
        throw ConfigError("form must be 'separable' or 'standard'");

    // pi = u0 + u1*x + u2*a + u3*x*a + u4*x*eta + u5*a*eta + u6*a^2
    const double u0 = payoff.number("u0", 0.0);
    const double u1 = payoff.number("u1", 1.0);
    const double u2 = payoff.number("u2", 0.0);
    const double u3 = payoff.number("u3", 0.0);
    const double u4 = payoff.number("u4", 0.0);
    const double u5 = payoff.number("u5", 0.0);
    const double u6 = payoff.number("u6", 0.0);
    const std::string kform = kernel.text("form", "linear_truncated");

    GameSpec g;
    g.states = sg;
    g.actions = ag;
    g.discount = beta;
    g.coupling = coupling == "action" ? Coupling::Action : Coupling::State;
    g.feasible = GameSpec::full_range(sg->size(), ag->size());
    g.payoff = [u0, u1, u2, u3, u4, u5, u6, sg, ag](int x, int a,
                                                    const PopulationState& agg) {
        const double xv = (*sg)[x], av = (*ag)[a];
        const double eta = mean(agg);
        return u0 + u1 * xv + u2 * av + u3 * xv * av + u4 * xv * eta +
               u5 * av * eta + u6 * av * av;
    };

    if (kform == "linear_truncated") {
        const double ca = kernel.number("A", 1.0);
        const double cb = kernel.number("B", 1.0);
        auto noise = read_noise(kernel, 0.4, 0.2, 0.4);
        try {
            g.kernel = linear_truncated_kernel(ca, cb, std::move(noise), sg, ag);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else if (kform == "mixture") {
        const double q_eta = kernel.number("q_eta", 1.0);
        const double q_denom =
            kernel.number("q_denom", (*sg).max() + (1.0 + q_eta) * (*ag).max());
        if (!(q_denom > 0.0)) throw ConfigError("[kernel] q_denom must be > 0");
        try {
            g.kernel = mixture_kernel(
                [q_eta, q_denom](double x, double a, const PopulationState& agg) {
                    return (x + a + q_eta * mean(agg)) / q_denom;
                },
                PopulationState::point_mass(sg, sg->size() - 1),
                PopulationState::point_mass(sg, 0), sg, ag);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else {
        throw ConfigError("[kernel] form must be 'linear_truncated' or 'mixture'");
    }

    grid.finish(); actions.finish(); payoff.finish(); kernel.finish(); dyn.finish();
    try {
        g.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    out.game = std::move(g);
}

} // namespace

void ConfigDoc::set(const std::string& section, const std::string& key,
                    const std::string& value) {
    if (section.empty()) top[key] = value;
    else sections[section][key] = value;
}

ConfigDoc parse_config_text(const std::string& text) {
    ConfigDoc doc;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        auto& target = section.empty() ? doc.top : doc.sections[section];
        if (target.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        target[key] = value;
    }
    return doc;
}

ConfigDoc parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

LoadedModel build_model(const ConfigDoc& doc) {
    LoadedModel out;
    std::set<std::string> top_allowed{"model", "form", "coupling"};
    for (const auto& [k, v] : doc.top)
        if (!top_allowed.count(k))
            throw ConfigError("unknown top-level key '" + k + "'");

    auto top_get = [&](const std::string& key, const std::string& fallback) {
        auto it = doc.top.find(key);
        const std::string v = it == doc.top.end() ? fallback : it->second;
        out.resolved[key] = v;
        return v;
    };

    out.model = top_get("model", "");
    if (out.model != "custom" && (doc.top.count("form") || doc.top.count("coupling")))
        throw ConfigError("'form' and 'coupling' apply only to custom models");
    const std::string form = top_get("form", "separable");
    const std::string coupling = top_get("coupling", "state");
    if (coupling != "state" && coupling != "action")
        throw ConfigError("coupling must be 'state' or 'action'");

    if (out.model == "security") build_security(doc, out);
    else if (out.model == "coordination") build_coordination(doc, out);
    else if (out.model == "search") build_search(doc, out);
    else if (out.model == "custom") build_custom(doc, out, form, coupling);
    else if (out.model.empty()) throw ConfigError("missing top-level 'model' key");
    else throw ConfigError("unknown model '" + out.model + "'");
    return out;
}

} // namespace mfg
