#pragma once

#include "mfg/dynamics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace mfg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed key/value document: top-level keys plus [section] groups.
/// Syntax: `key = value`, `[section]` headers, `#` comments.  Values may be
/// bare or double-quoted.  Duplicate keys are rejected.
struct ConfigDoc {
    std::map<std::string, std::string> top;
    std::map<std::string, std::map<std::string, std::string>> sections;

    void set(const std::string& section, const std::string& key,
             const std::string& value);
};

ConfigDoc parse_config_text(const std::string& text);
ConfigDoc parse_config_file(const std::string& path);

/// A model ready to solve, together with everything the CLI layer needs.
struct LoadedModel {
    std::string model;      // security | coordination | search | custom
    bool separable = false; // Definition-9 style audit applies
    std::optional<SeparableSpec> separable_spec;
    std::optional<SeparableTransform> transform; // set when separable
    GameSpec game;                               // the solvable game
    std::optional<TypedGameSpec> typed;          // heterogeneous population
    std::vector<std::string> type_labels;
    DynamicsOptions dynamics;
    std::uint64_t seed = 12345;
    /// Every effective setting (defaults applied), for the run manifest.
    std::map<std::string, std::string> resolved;
};

/// Build the model a document describes.  Rejects unknown sections/keys,
/// out-of-range values, and inconsistent heterogeneity settings.
LoadedModel build_model(const ConfigDoc& doc);

inline LoadedModel load_model_file(const std::string& path) {
    return build_model(parse_config_file(path));
}

} // namespace mfg
