#include "slln/ids.hpp"

#include <charconv>

#include "slln/error.hpp"

namespace slln {

std::string_view id_family(std::string_view id) { return id.substr(0, id.find(':')); }

double parse_double(std::string_view text, std::string_view module, std::string_view parameter) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        fail(ErrorCategory::ConfigParse, std::string(module), std::string(parameter),
             "expected a number for '" + std::string(parameter) + "', got '" + std::string(text) + "'");
    }
    return value;
}

std::int64_t parse_int(std::string_view text, std::string_view module, std::string_view parameter) {
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        fail(ErrorCategory::ConfigParse, std::string(module), std::string(parameter),
             "expected an integer for '" + std::string(parameter) + "', got '" + std::string(text) + "'");
    }
    return value;
}

ParsedId parse_id(std::string_view id, const std::set<std::string>& known_keys,
                  const std::set<std::string>& trailing_keys, std::string_view module) {
    ParsedId out;
    const auto colon = id.find(':');
    out.family = std::string(id.substr(0, colon));
    if (colon == std::string_view::npos) {
        return out;
    }
    std::string_view rest = id.substr(colon + 1);
    auto starts_known_key = [&](std::string_view s) {
        const auto eq = s.find('=');
        return eq != std::string_view::npos && known_keys.contains(std::string(s.substr(0, eq)));
    };
    while (!rest.empty()) {
        const auto eq = rest.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorCategory::ConfigParse, std::string(module), std::string(id),
                 "malformed parameter list in '" + std::string(id) + "'");
        }
        std::string key(rest.substr(0, eq));
        if (!known_keys.contains(key)) {
            fail(ErrorCategory::ConfigParse, std::string(module), key,
                 "unknown parameter '" + key + "' in '" + std::string(id) + "'");
        }
        rest = rest.substr(eq + 1);
        std::size_t cut = rest.size();
        if (!trailing_keys.contains(key)) {
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (rest[i] == ',' && starts_known_key(rest.substr(i + 1))) {
                    cut = i;
                    break;
                }
            }
        }
        if (out.params.contains(key)) {
            fail(ErrorCategory::ConfigParse, std::string(module), key, "duplicate parameter '" + key + "'");
        }
        out.params[key] = std::string(rest.substr(0, cut));
        rest = cut < rest.size() ? rest.substr(cut + 1) : std::string_view{};
    }
    return out;
}

double ParsedId::number(const std::string& key, std::string_view module) const {
    return parse_double(text(key, module), module, key);
}

double ParsedId::number_or(const std::string& key, double fallback, std::string_view module) const {
    return has(key) ? number(key, module) : fallback;
}

std::int64_t ParsedId::integer(const std::string& key, std::string_view module) const {
    return parse_int(text(key, module), module, key);
}

const std::string& ParsedId::text(const std::string& key, std::string_view module) const {
    auto it = params.find(key);
    if (it == params.end()) {
        fail(ErrorCategory::ConfigParse, std::string(module), key,
             "missing parameter '" + key + "' for family '" + family + "'");
    }
    return it->second;
}

}  // namespace slln
