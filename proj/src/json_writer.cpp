#include "slln/json_writer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "slln/error.hpp"

namespace slln {

namespace {

void append_string(std::string& out, const std::string& s) {
    // nlohmann's escaping, without its number formatting.
    out += Json(s).dump();
}

void write(std::string& out, const Json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                out += first ? "" : ",\n";
                first = false;
                out += inner;
                append_string(out, it.key());
                out += ": ";
                write(out, it.value(), indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            const bool scalar_only =
                std::all_of(v.begin(), v.end(), [](const Json& e) { return !e.is_structured(); });
            if (scalar_only) {
                out += "[";
                bool first = true;
                for (const auto& e : v) {
                    out += first ? "" : ", ";
                    first = false;
                    write(out, e, indent + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : v) {
                out += first ? "" : ",\n";
                first = false;
                out += inner;
                write(out, e, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            if (std::isfinite(d)) {
                out += format_real(d);
            } else {
                append_string(out, format_real(d));
            }
            return;
        }
        default:
            out += v.dump();
            return;
    }
}

std::string leaf_text(const Json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_float()) {
        return format_real(v.get<double>());
    }
    return v.dump();
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            flatten(v[i], prefix + "." + std::to_string(i), out);
        }
    } else {
        out.emplace_back(prefix, leaf_text(v));
    }
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? "\"\"" : std::string(1, c);
    }
    return out + "\"";
}

}  // namespace

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string to_json_text(const Json& value) {
    std::string out;
    write(out, value, 0);
    out += "\n";
    return out;
}

std::vector<std::pair<std::string, std::string>> flatten_json(const Json& value) {
    std::vector<std::pair<std::string, std::string>> out;
    flatten(value, "", out);
    return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        row += (i ? "," : "") + format_real(values[i]);
    }
    rows_.push_back(std::move(row));
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        row += (i ? "," : "") + csv_cell(cells[i]);
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::text() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        out += (i ? "," : "") + csv_cell(header_[i]);
    }
    out += "\n";
    for (const auto& row : rows_) {
        out += row + "\n";
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorCategory::Io, "cli", "out", "cannot write '" + path.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        fail(ErrorCategory::Io, "cli", "out", "write failed for '" + path.string() + "'");
    }
}

}  // namespace slln
