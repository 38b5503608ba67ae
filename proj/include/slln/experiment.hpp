#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "slln/config.hpp"
#include "slln/json_writer.hpp"

namespace slln {

struct RunOutput {
    /// The summary document (also written as <experiment>.json).
    Json summary;
    /// File names written under the output directory, in write order.
    std::vector<std::string> files;
};

/// Computes the whole experiment in memory, then creates out_dir and writes
/// the artifacts. A failing experiment writes nothing.
RunOutput run(const ExperimentConfig& config, const std::filesystem::path& out_dir, unsigned threads);

/// Same computation without touching the filesystem: (file name, bytes).
std::vector<std::pair<std::string, std::string>> render(const ExperimentConfig& config, unsigned threads,
                                                        Json* summary = nullptr);

/// Sorted, duplicate-free inventory of psi, sequence and model ids plus
/// experiment kinds.
Json list_catalogs();

}  // namespace slln
