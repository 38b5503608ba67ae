#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace slln {

/// A catalog id split as "family:key=value,key=value".
///
/// Values may themselves be ids containing commas (for instance
/// "weighted:w=poly:p=1,base=iid-uniform:lo=0,hi=2"), so a comma only ends a
/// value when it is followed by one of the family's known keys, and keys
/// listed as trailing swallow the remainder of the string.
struct ParsedId {
    std::string family;
    std::map<std::string, std::string> params;

    double number(const std::string& key, std::string_view module) const;
    double number_or(const std::string& key, double fallback, std::string_view module) const;
    std::int64_t integer(const std::string& key, std::string_view module) const;
    const std::string& text(const std::string& key, std::string_view module) const;
    bool has(const std::string& key) const { return params.contains(key); }
};

ParsedId parse_id(std::string_view id, const std::set<std::string>& known_keys,
                  const std::set<std::string>& trailing_keys, std::string_view module);

/// Family part of an id, i.e. everything before the first ':'.
std::string_view id_family(std::string_view id);

double parse_double(std::string_view text, std::string_view module, std::string_view parameter);
std::int64_t parse_int(std::string_view text, std::string_view module, std::string_view parameter);

}  // namespace slln
