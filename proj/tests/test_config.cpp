#include "mfg/config.hpp"

#include "doctest.h"

using namespace mfg;

TEST_CASE("parser: sections, comments, quotes") {
    auto doc = parse_config_text("model = security # trailing comment\n"
                                 "\n"
                                 "[payoff]\n"
                                 "kappa = 0.1\n"
                                 "label = \"quoted value\"\n");
    CHECK(doc.top.at("model") == "security");
    CHECK(doc.sections.at("payoff").at("kappa") == "0.1");
    CHECK(doc.sections.at("payoff").at("label") == "quoted value");
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_config_text("just some words\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[unclosed\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("= novalue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("security model from defaults") {
    auto m = build_model(parse_config_text("model = security\n"));
    CHECK(m.model == "security");
    CHECK(m.separable);
    REQUIRE(m.transform.has_value());
    CHECK(m.game.state_count() == 51);
    CHECK(m.separable_spec->actions->size() == 26);
    CHECK(m.game.discount == doctest::Approx(0.75));
    CHECK_FALSE(m.typed.has_value());
    CHECK(m.resolved.at("payoff.kappa") == "0.05");
    CHECK(m.resolved.at("dynamics.tol") == "0.0005");
}

TEST_CASE("model selection and key validation") {
    CHECK_THROWS_AS(build_model(parse_config_text("")), ConfigError);
    CHECK_THROWS_AS(build_model(parse_config_text("model = nonsense\n")), ConfigError);
    CHECK_THROWS_AS(build_model(parse_config_text("model = security\n"
                                                  "[payoff]\nbogus = 1\n")),
                    ConfigError);
    CHECK_THROWS_AS(build_model(parse_config_text("model = security\n"
                                                  "[mystery]\nx = 1\n")),
                    ConfigError);
    CHECK_THROWS_AS(build_model(parse_config_text("model = security\n"
                                                  "[payoff]\nkappa = abc\n")),
                    ConfigError);
    CHECK_THROWS_AS(build_model(parse_config_text("model = security\n"
                                                  "[grid]\nmax = 10.5\n")),
                    ConfigError);
    CHECK_THROWS_AS(build_model(parse_config_text("model = security\n"
                                                  "[dynamics]\nbeta = 1.5\n")),
                    ConfigError);
    // form/coupling are custom-model keys
    CHECK_THROWS_AS(build_model(parse_config_text("model = security\nform = separable\n")),
                    ConfigError);
}

TEST_CASE("heterogeneity keys build a typed model") {
    auto m = build_model(parse_config_text("model = security\n"
                                           "[grid]\nmax = 12\n"
                                           "[actions]\nmax = 6\n"
                                           "[payoff]\n"
                                           "delta_low = 0.1\n"
                                           "delta_high = 0.9\n"
                                           "fraction_low = 0.25\n"));
    REQUIRE(m.typed.has_value());
    CHECK(m.typed->types.size() == 2);
    CHECK(m.typed->types[0].mass == doctest::Approx(0.25));
    CHECK(m.typed->types[1].mass == doctest::Approx(0.75));
    CHECK(m.type_labels == std::vector<std::string>{"low", "high"});

    CHECK_THROWS_AS(build_model(parse_config_text("model = security\n"
                                                  "[payoff]\nfraction_low = 0.5\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        build_model(parse_config_text("model = security\n[payoff]\n"
                                      "fraction_low = 2\ndelta_low = 0.1\n"
                                      "delta_high = 0.9\n")),
        ConfigError);
}

TEST_CASE("custom separable and custom standard models") {
    auto sep = build_model(parse_config_text("model = custom\n"
                                             "form = separable\n"
                                             "[grid]\nmax = 8\n"
                                             "[actions]\nmax = 3\n"
                                             "[payoff]\nu1 = 0.2\nu3 = 0.05\n"
                                             "cost1 = 0.2\n"));
    CHECK(sep.separable);
    CHECK(sep.game.coupling == Coupling::State);
    CHECK(sep.transform.has_value());

    auto std_game = build_model(parse_config_text("model = custom\n"
                                                  "form = standard\n"
                                                  "coupling = action\n"
                                                  "[grid]\nmax = 6\n"
                                                  "[actions]\nmax = 3\n"
                                                  "[payoff]\nu2 = 1.0\nu6 = -0.1\n"
                                                  "[kernel]\nform = mixture\n"
                                                  "q_eta = 0.0\nq_denom = 9\n"));
    CHECK_FALSE(std_game.separable);
    CHECK(std_game.game.coupling == Coupling::Action);

    CHECK_THROWS_AS(build_model(parse_config_text("model = custom\nform = weird\n")),
                    ConfigError);
    CHECK_THROWS_AS(build_model(parse_config_text("model = custom\n"
                                                  "form = standard\n"
                                                  "[kernel]\nform = strange\n")),
                    ConfigError);
}

TEST_CASE("document overrides drive parameter sweeps") {
    auto doc = parse_config_text("model = security\n"
                                 "[grid]\nmax = 12\n"
                                 "[actions]\nmax = 6\n");
    auto base = build_model(doc);
    doc.set("payoff", "cost", "0.01");
    doc.set("kernel", "q_minus", "0.5");
    doc.set("kernel", "q_plus", "0.3");
    auto shifted = build_model(doc);
    CHECK(base.resolved.at("payoff.cost") == "0.05");
    CHECK(shifted.resolved.at("payoff.cost") == "0.01");
    CHECK(shifted.resolved.at("kernel.q_minus") == "0.5");
}

TEST_CASE("dynamics settings land in the options") {
    auto m = build_model(parse_config_text("model = security\n"
                                           "[dynamics]\n"
                                           "tol = 1e-5\n"
                                           "max_iters = 77\n"
                                           "dp_tol = 1e-6\n"
                                           "seed = 4242\n"));
    CHECK(m.dynamics.tol == doctest::Approx(1e-5));
    CHECK(m.dynamics.max_iters == 77);
    CHECK(m.dynamics.dp_tol == doctest::Approx(1e-6));
    CHECK(m.seed == 4242);
}
