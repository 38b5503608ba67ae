#include "slln/tables.hpp"

#include <fstream>
#include <cctype>

#include "slln/error.hpp"
#include "slln/ids.hpp"

namespace slln {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::vector<std::pair<double, double>> read_table_csv(const std::string& path, std::string_view module) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCategory::Io, std::string(module), path, "cannot open table '" + path + "'");
    }
    std::vector<std::pair<double, double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        const auto comma = view.find(',');
        if (comma == std::string_view::npos) {
            fail(ErrorCategory::ConfigParse, std::string(module), path, "table rows need two columns: '" + line + "'");
        }
        const auto lhs = trim(view.substr(0, comma));
        const auto rhs = trim(view.substr(comma + 1));
        if (first && !lhs.empty() && !(std::isdigit(static_cast<unsigned char>(lhs.front())) || lhs.front() == '-' ||
                                       lhs.front() == '.' || lhs.front() == '+')) {
            first = false;
            continue;
        }
        first = false;
        rows.emplace_back(parse_double(lhs, module, path), parse_double(rhs, module, path));
    }
    if (rows.empty()) {
        fail(ErrorCategory::Validation, std::string(module), path, "table '" + path + "' has no rows");
    }
    return rows;
}

}  // namespace slln
