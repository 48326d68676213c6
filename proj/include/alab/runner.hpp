#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "alab/config.hpp"
#include "alab/engine.hpp"
#include "json.hpp"

namespace alab {

/// Builds the train/val/test split for one seed of a run.
DatasetSplit prepare_data(const RunConfig& cfg, std::uint64_t seed);

struct SeedOutcome {
    std::uint64_t seed = 0;
    TrainOutput train;
    Evaluation test;
    double wall_seconds = 0.0;
    /// Entropy (nats) of the final epoch's accepted pseudo-label histogram.
    double final_histogram_entropy = 0.0;
};

/// Trains and tests one seed without touching the filesystem.
SeedOutcome execute_seed(const RunConfig& cfg, std::uint64_t seed);

/// records.csv, result.json, distances.csv, queue.csv, stats.jsonl, trace.log, model.bin
void write_seed(const RunConfig& cfg, const SeedOutcome& outcome, const std::filesystem::path& dir);

nlohmann::json result_json(const RunConfig& cfg, const SeedOutcome& outcome);

/// Mean and sample standard deviation of final test AUC/MCA across seeds.
nlohmann::json summary_json(const RunConfig& cfg, const std::vector<SeedOutcome>& outcomes);

/// ALIGN_LAB_OUT when set, otherwise the configured output directory.
std::filesystem::path output_root(const RunConfig& cfg);

struct RunJob {
    RunConfig config;
    std::filesystem::path dir;  ///< receives seed_<s>/ subdirectories and summary.json
};

/// Runs every (job, seed) pair with up to `jobs` worker threads and writes all outputs.
/// Each job's outcomes are returned in seed order.
std::vector<std::vector<SeedOutcome>> run_jobs(const std::vector<RunJob>& runs, std::size_t jobs);

}  // namespace alab
