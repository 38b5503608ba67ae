#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace slln {

using Json = nlohmann::json;

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double value);

/// Pretty-printed JSON with sorted keys, two-space indent, floats at 17
/// significant digits and a trailing newline. Non-finite floats become the
/// strings "inf", "-inf", "nan".
std::string to_json_text(const Json& value);

/// Leaves of a JSON document as (dotted.path, text) pairs in key order.
std::vector<std::pair<std::string, std::string>> flatten_json(const Json& value);

/// Builds a CSV document row by row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    void add_row(const std::vector<std::string>& cells);
    std::string text() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

/// Writes bytes exactly as given; Io error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace slln
