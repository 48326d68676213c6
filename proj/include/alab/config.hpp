#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alab/data.hpp"
#include "alab/engine.hpp"

namespace alab {

enum class DataKind { Synthetic, Csv };

struct DataSource {
    DataKind kind = DataKind::Synthetic;
    SynthSpec synth;
    std::filesystem::path csv;
    std::size_t labeled = 200;
    std::size_t val_per_class = 10;
    std::size_t test_per_class = 50;
    /// Re-expose the hidden unlabeled labels and train fully supervised.
    bool upper_bound = false;
};

struct RunConfig {
    std::string name = "run";
    DataSource data;
    EngineConfig engine;
    /// Source of engine.temperature: constant when set, otherwise adaptive with t_min.
    std::optional<double> constant_temperature;
    double t_min = kDefaultTMin;
    std::filesystem::path output_dir = "runs";
    std::vector<std::uint64_t> seeds{0};
};

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

/// Flat `key = value` entries with dotted sections, plus `sweep <key> in [a, b]` lines.
struct ConfigFile {
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<SweepAxis> sweeps;
};

ConfigFile parse_config_text(std::string_view text);

/// Reads a config file; a `.json` path is read as a result.json and its config echo is used.
ConfigFile load_config(const std::filesystem::path& path);

/// Applies entries on top of the defaults. Unknown keys and bad values throw ConfigError.
RunConfig resolve(const std::vector<std::pair<std::string, std::string>>& entries);

/// Every key with its resolved value; feeding these back to resolve() gives the same config.
std::vector<std::pair<std::string, std::string>> to_entries(const RunConfig& cfg);

std::string to_text(const std::vector<std::pair<std::string, std::string>>& entries);

/// Canonical key for a sweep axis (`delta` -> `vcq.delta`, ...).
std::string canonical_key(std::string_view key);

struct SweepPoint {
    std::string label;  ///< e.g. "vcq.delta=0.25"
    RunConfig config;
};

/// Cartesian product over the sweep axes; a single unlabeled point when there are none.
std::vector<SweepPoint> expand_sweep(const ConfigFile& file);

}  // namespace alab
