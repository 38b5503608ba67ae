#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "slln/config.hpp"
#include "slln/error.hpp"
#include "slln/experiment.hpp"
#include "slln/parallel.hpp"

namespace {

void report_error(slln::ErrorCategory category, const std::string& module, const std::string& parameter,
                  const std::string& message) {
    const slln::Json line{{"error", std::string(slln::to_string(category))},
                          {"module", module},
                          {"parameter", parameter},
                          {"message", message}};
    std::cerr << line.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-horizon diagnostics for generalized strong laws of large numbers", "slln_lab"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::int64_t> paths;
    std::optional<std::int64_t> horizon;
    std::optional<std::string> format;
    app.add_option("--config", config_path, "key = value experiment file");
    app.add_option("--seed", seed, "master seed (u64)");
    app.add_option("--out", out_dir, "output directory (default slln_out)");
    app.add_option("--paths", paths, "path count M");
    app.add_option("--horizon", horizon, "horizon N");
    app.add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));

    for (const auto& name : slln::experiment_kind_names()) {
        app.add_subcommand(name, name == "list" ? "print the id catalogs" : "run the " + name + " experiment");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        report_error(slln::ErrorCategory::ConfigParse, "cli", "argv", e.what());
        return slln::exit_code(slln::ErrorCategory::ConfigParse);
    }
    const std::string subcommand = app.get_subcommands().front()->get_name();

    try {
        slln::RawConfig raw;
        if (!config_path.empty()) {
            raw = slln::read_config_file(config_path);
        }
        if (auto it = raw.find("experiment"); it != raw.end() && it->second != subcommand) {
            slln::fail(slln::ErrorCategory::ConfigParse, "cli", "experiment",
                       "config is for '" + it->second + "' but the subcommand is '" + subcommand + "'");
        }
        raw["experiment"] = subcommand;
        const auto kind = slln::parse_experiment_kind(subcommand);
        const auto keys = slln::config_keys(kind);
        auto accepts = [&](const std::string& key) { return std::find(keys.begin(), keys.end(), key) != keys.end(); };
        auto set = [&](const std::string& key, const std::string& value) {
            if (!accepts(key)) {
                slln::fail(slln::ErrorCategory::ConfigParse, "cli", key,
                           "--" + key + " does not apply to '" + subcommand + "'");
            }
            raw[key] = value;
        };
        if (seed) {
            set("seed", std::to_string(*seed));
        }
        if (paths) {
            set("paths", std::to_string(*paths));
        }
        if (format) {
            set("format", *format);
        }
        if (horizon) {
            if (accepts("horizon")) {
                raw["horizon"] = std::to_string(*horizon);
            } else if (accepts("horizons")) {
                raw["horizons"] = std::to_string(*horizon);
            } else {
                set("horizon", std::to_string(*horizon));
            }
        }

        const slln::ExperimentConfig config = slln::resolve_config(raw);
        if (kind == slln::ExperimentKind::List) {
            std::cout << slln::to_json_text(slln::list_catalogs());
            if (out_dir) {
                slln::run(config, *out_dir, 1);
            }
            return 0;
        }
        const std::filesystem::path dir = out_dir.value_or("slln_out");
        const auto result = slln::run(config, dir, slln::threads_from_env());
        for (const auto& file : result.files) {
            std::cout << (dir / file).string() << '\n';
        }
        return 0;
    } catch (const slln::Error& e) {
        report_error(e.category(), e.module(), e.parameter(), e.what());
        return slln::exit_code(e.category());
    } catch (const std::exception& e) {
        report_error(slln::ErrorCategory::Io, "cli", "", e.what());
        return 1;
    }
}
