#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace slln {

enum class ExperimentKind {
    ClassifyPsi,
    CheckConditions,
    Theorem5,
    Remark2,
    Example1,
    Simulate,
    Blocking,
    Dyadic,
    List,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);
std::vector<std::string> experiment_kind_names();

/// Whether the experiment draws random paths (and so needs a seed).
bool is_stochastic(ExperimentKind kind);

using ConfigValue = std::variant<bool, std::int64_t, std::uint64_t, double, std::string, std::vector<std::int64_t>,
                                 std::vector<double>, std::vector<std::string>>;

/// A fully resolved experiment description: every key that applies to the
/// experiment kind carries a value (given or defaulted), no other key does.
///
/// Text form is one `key = value` per line, '#' starts a comment, and list
/// values are separated by ';' (catalog ids may contain ',').
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::List;
    std::map<std::string, ConfigValue> values;

    bool has(const std::string& key) const { return values.contains(key); }
    bool flag(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::uint64_t seed() const;
    double real(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    const std::vector<std::int64_t>& integers(const std::string& key) const;
    const std::vector<double>& reals(const std::string& key) const;
    const std::vector<std::string>& texts(const std::string& key) const;

    /// Canonical string form of every value, keyed by name (experiment included).
    std::map<std::string, std::string> canonical() const;
    /// canonical() rendered as config text, sorted by key.
    std::string to_text() const;
};

/// Raw key/value pairs before typing and defaults.
using RawConfig = std::map<std::string, std::string>;

RawConfig parse_config_text(std::string_view text, std::string_view origin = "config");
RawConfig read_config_file(const std::string& path);

/// Types the raw values, fills defaults for the experiment kind and checks
/// ranges. Unknown or inapplicable keys are ConfigParse errors; bad ranges are
/// Validation errors; ids that do not resolve are UnknownId errors.
ExperimentConfig resolve_config(const RawConfig& raw);

/// Keys an experiment accepts, sorted.
std::vector<std::string> config_keys(ExperimentKind kind);

}  // namespace slln
