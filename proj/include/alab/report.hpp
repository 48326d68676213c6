#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alab/engine.hpp"
#include "json.hpp"

namespace alab {

/// Columns in EpochRecord field order; the histogram is `;`-separated in one cell.
std::string records_csv(std::span<const EpochRecord> records);
std::vector<EpochRecord> parse_records_csv(std::string_view text);

/// epoch,class,distance,frobenius_total (post-update marginals).
std::string distances_csv(const TrainOutput& out);

/// epoch,class,capacity,occupancy,tau
std::string queue_csv(const TrainOutput& out);

nlohmann::json to_json(const ClassStats& stats);

/// One ClassStats object per line, tagged with its epoch.
std::string stats_jsonl(const TrainOutput& out);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// Writes auc_vs_epoch.csv, frobenius_vs_epoch.csv and pseudo_histogram_vs_epoch.csv
/// into run_dir from run_dir/records.csv or run_dir/seed_*/records.csv.
/// Throws MissingRecords when neither exists.
std::vector<std::filesystem::path> export_plots(const std::filesystem::path& run_dir);

}  // namespace alab
