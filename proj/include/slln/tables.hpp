#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slln {

/// Reads a two-column numeric CSV (x,value). A non-numeric first row is
/// treated as a header; '#' lines are comments.
std::vector<std::pair<double, double>> read_table_csv(const std::string& path, std::string_view module);

}  // namespace slln
