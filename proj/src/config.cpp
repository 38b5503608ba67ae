#include "slln/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "slln/error.hpp"
#include "slln/ids.hpp"
#include "slln/json_writer.hpp"
#include "slln/models.hpp"
#include "slln/psi.hpp"
#include "slln/sequences.hpp"

namespace slln {

namespace {

constexpr std::string_view kModule = "cli";

enum class Type { Bool, Int, Seed, Real, Text, IntList, RealList, TextList };

struct KeyDefault {
    std::string key;
    Type type;
    std::optional<std::string> fallback;  // nullopt: required
};

struct KindInfo {
    ExperimentKind kind;
    std::string_view name;
    bool stochastic;
};

constexpr KindInfo kKinds[] = {
    {ExperimentKind::ClassifyPsi, "classify-psi", false}, {ExperimentKind::CheckConditions, "check-conditions", false},
    {ExperimentKind::Theorem5, "theorem5", false},        {ExperimentKind::Remark2, "remark2", false},
    {ExperimentKind::Example1, "example1", true},         {ExperimentKind::Simulate, "simulate", true},
    {ExperimentKind::Blocking, "blocking", true},         {ExperimentKind::Dyadic, "dyadic", true},
    {ExperimentKind::List, "list", false},
};

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        out += out.empty() ? "" : "; ";
        out += item;
    }
    return out;
}

std::vector<KeyDefault> keys_for(ExperimentKind kind) {
    std::vector<KeyDefault> keys{{"format", Type::Text, "json"}};
    auto add = [&](std::string key, Type type, std::optional<std::string> fallback) {
        keys.push_back({std::move(key), type, std::move(fallback)});
    };
    if (is_stochastic(kind)) {
        add("seed", Type::Seed, std::nullopt);
    }
    switch (kind) {
        case ExperimentKind::ClassifyPsi:
            add("psi", Type::TextList, join(bundled_psi_ids()));
            add("horizon", Type::Int, "1000000");
            add("bases", Type::RealList, "1.5; 2; 2.7182818284590451; 10");
            add("geometric_horizon", Type::Int, "200");
            add("k", Type::Int, "4");
            add("margin", Type::Real, "0.05");
            break;
        case ExperimentKind::CheckConditions:
            add("norming", Type::Text, "poly:p=1");
            add("model", Type::Text, "iid-uniform:lo=0,hi=2");
            add("psi", Type::Text, "pow:delta=1");
            add("horizon", Type::Int, "10000");
            add("n_min", Type::Int, "1");
            add("window_min", Type::Int, "1");
            add("growth_factor", Type::Real, "4");
            break;
        case ExperimentKind::Theorem5:
            add("b", Type::Text, "remark2-b");
            add("norming", Type::Text, "exp2:half");
            add("psi", Type::Text, "pow:delta=1");
            add("horizon", Type::Int, "10000");
            add("exact_horizon", Type::Int, "200");
            add("bundled_cases", Type::Bool, "false");
            add("conclusion_first", Type::Int, "1");
            add("growth_factor", Type::Real, "4");
            add("k", Type::Int, "4");
            add("margin", Type::Real, "0.05");
            break;
        case ExperimentKind::Remark2:
            add("horizon", Type::Int, "10000");
            add("exact_horizon", Type::Int, "200");
            add("growth_horizon", Type::Int, "0");
            break;
        case ExperimentKind::Example1:
            add("paths", Type::Int, "10000");
            add("horizon", Type::Int, "10000");
            add("horizons", Type::IntList, "1000; 10000");
            add("exact_horizon", Type::Int, "200");
            break;
        case ExperimentKind::Simulate:
            add("paths", Type::Int, "200");
            add("model", Type::Text, "iid-uniform:lo=0,hi=2");
            add("norming", Type::Text, "poly:p=1");
            add("horizons", Type::IntList, "1000; 10000; 100000");
            break;
        case ExperimentKind::Blocking:
            add("paths", Type::Int, "10");
            add("model", Type::Text, "iid-uniform:lo=0,hi=2");
            add("norming", Type::Text, "poly:p=1");
            add("alpha", Type::RealList, "2");
            add("eps", Type::RealList, "0.1");
            add("horizon", Type::Int, "10000");
            add("A", Type::Text, "auto");
            add("exclude_truncated", Type::Bool, "false");
            break;
        case ExperimentKind::Dyadic:
            add("paths", Type::Int, "1000");
            add("model", Type::Text, "indep-var:profile=const:c=1");
            add("norming", Type::Text, "poly:p=1");
            add("psi", Type::Text, "pow:delta=1");
            add("eps", Type::Real, "0.5");
            add("levels", Type::IntList, "8; 10; 12");
            break;
        case ExperimentKind::List:
            break;
    }
    std::sort(keys.begin(), keys.end(), [](const auto& l, const auto& r) { return l.key < r.key; });
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(';', start);
        std::string item = trim(std::string_view(text).substr(start, pos == std::string::npos ? std::string::npos
                                                                                               : pos - start));
        if (!item.empty()) {
            out.push_back(std::move(item));
        }
        if (pos == std::string::npos) {
            return out;
        }
        start = pos + 1;
    }
}

ConfigValue parse_value(const KeyDefault& entry, const std::string& text) {
    const std::string key = entry.key;
    switch (entry.type) {
        case Type::Bool:
            if (text == "true" || text == "1" || text == "yes") {
                return true;
            }
            if (text == "false" || text == "0" || text == "no") {
                return false;
            }
            fail(ErrorCategory::ConfigParse, std::string(kModule), key, "expected true/false, got '" + text + "'");
        case Type::Int:
            return parse_int(text, kModule, key);
        case Type::Seed: {
            std::uint64_t v = 0;
            const auto* end = text.data() + text.size();
            const auto [ptr, ec] = std::from_chars(text.data(), end, v);
            if (ec != std::errc() || ptr != end || text.empty()) {
                fail(ErrorCategory::ConfigParse, std::string(kModule), key,
                     "expected an unsigned 64-bit integer, got '" + text + "'");
            }
            return v;
        }
        case Type::Real:
            return parse_double(text, kModule, key);
        case Type::Text:
            if (text.empty()) {
                fail(ErrorCategory::ConfigParse, std::string(kModule), key, "empty value");
            }
            return text;
        case Type::IntList: {
            std::vector<std::int64_t> out;
            for (const auto& item : split_list(text)) {
                out.push_back(parse_int(item, kModule, key));
            }
            return out;
        }
        case Type::RealList: {
            std::vector<double> out;
            for (const auto& item : split_list(text)) {
                out.push_back(parse_double(item, kModule, key));
            }
            return out;
        }
        case Type::TextList:
            return split_list(text);
    }
    return text;
}

std::string canonical_value(const ConfigValue& value) {
    struct Visitor {
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(const std::vector<std::int64_t>& v) const {
            std::vector<std::string> items;
            for (auto x : v) {
                items.push_back(std::to_string(x));
            }
            return join(items);
        }
        std::string operator()(const std::vector<double>& v) const {
            std::vector<std::string> items;
            for (auto x : v) {
                items.push_back(format_real(x));
            }
            return join(items);
        }
        std::string operator()(const std::vector<std::string>& v) const { return join(v); }
    };
    return std::visit(Visitor{}, value);
}

[[noreturn]] void invalid(const std::string& key, const std::string& message) {
    fail(ErrorCategory::Validation, std::string(kModule), key, message);
}

void require_range(const ExperimentConfig& c, const std::string& key, std::int64_t lo, std::int64_t hi) {
    if (!c.has(key)) {
        return;
    }
    const auto v = c.integer(key);
    if (v < lo || v > hi) {
        invalid(key, key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                         std::to_string(v));
    }
}

/// Rethrows catalog failures with the config key as the offending parameter.
template <typename Fn>
void resolve_id(const std::string& key, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        throw Error(e.category(), e.module(), key, e.what());
    }
}

void validate(const ExperimentConfig& c) {
    const auto kind = c.kind;
    const std::string& format = c.text("format");
    if (format != "json" && format != "csv" && format != "both") {
        fail(ErrorCategory::ConfigParse, std::string(kModule), "format",
             "format must be json, csv or both, got '" + format + "'");
    }
    switch (kind) {
        case ExperimentKind::ClassifyPsi:
            require_range(c, "horizon", 32, 1'000'000'000);
            require_range(c, "geometric_horizon", 16, 100'000);
            break;
        case ExperimentKind::CheckConditions:
            require_range(c, "horizon", 32, 50'000);
            break;
        case ExperimentKind::Theorem5:
            require_range(c, "horizon", 32, 1'000'000'000);
            break;
        case ExperimentKind::Remark2:
            require_range(c, "horizon", 32, 1'000'000'000);
            if (c.integer("growth_horizon") != 0) {
                require_range(c, "growth_horizon", c.integer("horizon") + 1, 1'000'000'000);
            }
            break;
        case ExperimentKind::Example1:
            require_range(c, "horizon", 2, 10'000'000);
            require_range(c, "paths", 100, 10'000'000);
            break;
        case ExperimentKind::Simulate:
            require_range(c, "paths", 100, 10'000'000);
            break;
        case ExperimentKind::Blocking:
            require_range(c, "horizon", 2, 10'000'000);
            require_range(c, "paths", 1, 1'000'000);
            break;
        case ExperimentKind::Dyadic:
            require_range(c, "paths", 1, 10'000'000);
            break;
        case ExperimentKind::List:
            break;
    }
    require_range(c, "exact_horizon", 3, 2000);
    require_range(c, "k", 1, 32);
    require_range(c, "conclusion_first", 1, 1'000'000);
    require_range(c, "n_min", 1, 1'000'000'000);
    require_range(c, "window_min", 1, 1'000'000'000);
    if (c.has("margin") && !(c.real("margin") > 0.0 && c.real("margin") < 1.0)) {
        invalid("margin", "margin must lie in (0, 1)");
    }
    if (c.has("growth_factor") && !(c.real("growth_factor") > 1.0)) {
        invalid("growth_factor", "growth_factor must exceed 1");
    }
    for (const std::string key : {"horizons"}) {
        if (!c.has(key)) {
            continue;
        }
        const auto& hs = c.integers(key);
        if (hs.empty()) {
            invalid(key, "horizons must not be empty");
        }
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (hs[i] < 2 || hs[i] > 10'000'000 || (i > 0 && hs[i] <= hs[i - 1])) {
                invalid(key, "horizons must be increasing integers in [2, 10^7]");
            }
        }
    }
    if (c.has("alpha")) {
        if (c.reals("alpha").empty()) {
            invalid("alpha", "alpha list must not be empty");
        }
        for (double a : c.reals("alpha")) {
            if (!(a > 1.0)) {
                fail(ErrorCategory::NumericDomain, std::string(kModule), "alpha", "alpha must exceed 1");
            }
        }
    }
    if (c.has("eps")) {
        const std::vector<double> eps = kind == ExperimentKind::Dyadic ? std::vector<double>{c.real("eps")}
                                                                        : c.reals("eps");
        if (eps.empty()) {
            invalid("eps", "eps list must not be empty");
        }
        for (double e : eps) {
            if (!(e > 0.0)) {
                fail(ErrorCategory::NumericDomain, std::string(kModule), "eps", "eps must be positive");
            }
        }
    }
    if (c.has("bases")) {
        for (double b : c.reals("bases")) {
            if (!(b > 1.0)) {
                fail(ErrorCategory::NumericDomain, std::string(kModule), "bases", "bases must exceed 1");
            }
        }
    }
    if (c.has("levels")) {
        if (c.integers("levels").empty()) {
            invalid("levels", "levels must not be empty");
        }
        for (auto l : c.integers("levels")) {
            if (l < 0 || l > 24) {
                invalid("levels", "levels must lie in [0, 24]");
            }
        }
    }
    if (c.has("A") && c.text("A") != "auto") {
        const double A = parse_double(c.text("A"), kModule, "A");
        if (!(A >= 0.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "A", "A must be nonnegative");
        }
    }

    // Every id must resolve against the catalogs.
    if (c.has("psi")) {
        const std::vector<std::string> ids =
            kind == ExperimentKind::ClassifyPsi ? c.texts("psi") : std::vector<std::string>{c.text("psi")};
        if (ids.empty()) {
            invalid("psi", "psi list must not be empty");
        }
        for (const auto& id : ids) {
            resolve_id("psi", [&] { (void)make_psi(id); });
        }
    }
    std::optional<ModelSpec> model;
    if (c.has("model")) {
        resolve_id("model", [&] { model = make_model(c.text("model")); });
    }
    if (c.has("norming")) {
        const bool weighted_norming = c.text("norming") == "W";
        if (weighted_norming) {
            if (kind != ExperimentKind::Simulate || !model || model->kind != ModelKind::Weighted) {
                invalid("norming", "norming 'W' needs a weighted model in a simulate experiment");
            }
        } else {
            resolve_id("norming", [&] { (void)make_norming(c.text("norming")); });
        }
    }
    if (c.has("b")) {
        resolve_id("b", [&] { (void)make_sequence(c.text("b")); });
    }
    if (model) {
        if (kind == ExperimentKind::Blocking && !model->nonnegative()) {
            fail(ErrorCategory::UnsupportedModel, std::string(kModule), "model",
                 "blocking needs a nonnegative model, got '" + model->id + "'");
        }
        if (kind == ExperimentKind::Dyadic && !model->independent()) {
            fail(ErrorCategory::UnsupportedModel, std::string(kModule), "model",
                 "dyadic needs an independent model, got '" + model->id + "'");
        }
    }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    for (const auto& info : kKinds) {
        if (info.kind == kind) {
            return info.name;
        }
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
    for (const auto& info : kKinds) {
        if (info.name == text) {
            return info.kind;
        }
    }
    fail(ErrorCategory::ConfigParse, std::string(kModule), "experiment",
         "unknown experiment kind '" + std::string(text) + "'");
}

std::vector<std::string> experiment_kind_names() {
    std::vector<std::string> out;
    for (const auto& info : kKinds) {
        out.emplace_back(info.name);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_stochastic(ExperimentKind kind) {
    for (const auto& info : kKinds) {
        if (info.kind == kind) {
            return info.stochastic;
        }
    }
    return false;
}

namespace {

template <typename T>
const T& get(const ExperimentConfig& c, const std::string& key) {
    auto it = c.values.find(key);
    if (it == c.values.end()) {
        fail(ErrorCategory::ConfigParse, std::string(kModule), key, "missing config key '" + key + "'");
    }
    if (const T* v = std::get_if<T>(&it->second)) {
        return *v;
    }
    fail(ErrorCategory::ConfigParse, std::string(kModule), key, "config key '" + key + "' has another type");
}

}  // namespace

bool ExperimentConfig::flag(const std::string& key) const { return get<bool>(*this, key); }
std::int64_t ExperimentConfig::integer(const std::string& key) const { return get<std::int64_t>(*this, key); }
std::uint64_t ExperimentConfig::seed() const { return get<std::uint64_t>(*this, "seed"); }
double ExperimentConfig::real(const std::string& key) const { return get<double>(*this, key); }
const std::string& ExperimentConfig::text(const std::string& key) const { return get<std::string>(*this, key); }
const std::vector<std::int64_t>& ExperimentConfig::integers(const std::string& key) const {
    return get<std::vector<std::int64_t>>(*this, key);
}
const std::vector<double>& ExperimentConfig::reals(const std::string& key) const {
    return get<std::vector<double>>(*this, key);
}
const std::vector<std::string>& ExperimentConfig::texts(const std::string& key) const {
    return get<std::vector<std::string>>(*this, key);
}

std::map<std::string, std::string> ExperimentConfig::canonical() const {
    std::map<std::string, std::string> out;
    out["experiment"] = std::string(to_string(kind));
    for (const auto& [key, value] : values) {
        out[key] = canonical_value(value);
    }
    return out;
}

std::string ExperimentConfig::to_text() const {
    std::string out;
    for (const auto& [key, value] : canonical()) {
        out += key + " = " + value + "\n";
    }
    return out;
}

RawConfig parse_config_text(std::string_view text, std::string_view origin) {
    RawConfig raw;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const std::string content = trim(line);
        if (content.empty()) {
            continue;
        }
        const auto eq = content.find('=');
        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        if (eq == std::string::npos) {
            fail(ErrorCategory::ConfigParse, std::string(kModule), where, where + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty()) {
            fail(ErrorCategory::ConfigParse, std::string(kModule), where, where + ": empty key");
        }
        if (!raw.emplace(key, value).second) {
            fail(ErrorCategory::ConfigParse, std::string(kModule), key, where + ": duplicate key '" + key + "'");
        }
    }
    return raw;
}

RawConfig read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCategory::Io, std::string(kModule), "config", "cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

ExperimentConfig resolve_config(const RawConfig& raw) {
    auto exp = raw.find("experiment");
    if (exp == raw.end()) {
        fail(ErrorCategory::ConfigParse, std::string(kModule), "experiment", "config has no 'experiment' key");
    }
    ExperimentConfig config;
    config.kind = parse_experiment_kind(exp->second);
    const auto keys = keys_for(config.kind);
    for (const auto& [key, value] : raw) {
        if (key == "experiment") {
            continue;
        }
        const bool known = std::any_of(keys.begin(), keys.end(), [&](const auto& k) { return k.key == key; });
        if (!known) {
            fail(ErrorCategory::ConfigParse, std::string(kModule), key,
                 "key '" + key + "' does not apply to experiment '" + exp->second + "'");
        }
    }
    for (const auto& entry : keys) {
        auto it = raw.find(entry.key);
        if (it == raw.end() && !entry.fallback) {
            fail(ErrorCategory::ConfigParse, std::string(kModule), entry.key,
                 "experiment '" + exp->second + "' requires '" + entry.key + "'");
        }
        config.values[entry.key] = parse_value(entry, it != raw.end() ? it->second : *entry.fallback);
    }
    validate(config);
    return config;
}

std::vector<std::string> config_keys(ExperimentKind kind) {
    std::vector<std::string> out{"experiment"};
    for (const auto& entry : keys_for(kind)) {
        out.push_back(entry.key);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace slln
