#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alab/alignment.hpp"
#include "alab/data.hpp"
#include "alab/metrics.hpp"
#include "alab/model.hpp"
#include "alab/tracker.hpp"
#include "alab/vcq.hpp"

namespace alab {

enum class AlignMode { None, Da, Csda };

std::string_view to_string(AlignMode mode) noexcept;
AlignMode parse_align_mode(std::string_view text);

struct TrainSchedule {
    std::size_t epochs = 256;
    std::size_t labeled_batch = 128;
    std::size_t unlabeled_batch = 128;
    double base_lr = 1e-4;
    std::vector<std::size_t> decay_epochs{50, 125};
    std::uint64_t seed = 0;
};

struct EngineConfig {
    TrainSchedule schedule;
    VcqConfig vcq;
    double omega = kDefaultOmega;
    AlignMode align = AlignMode::Csda;
    Temperature temperature = Temperature::adaptive();
    double eps = kDefaultEps;
    std::size_t hidden = 32;
    double jitter_sigma = 0.1;
    /// Never fill the queue: trains on labeled data only.
    bool supervised_only = false;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double eta = 0.0;
    double supervised_loss = 0.0;
    double unsupervised_loss = 0.0;
    double val_auc = 0.0;
    double val_mca = 0.0;
    std::vector<std::size_t> pseudo_label_histogram;
    double frobenius_distance = 0.0;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

/// Per-epoch state snapshots that do not fit the flat record.
struct EpochDiagnostics {
    ClassStats stats;
    ClassDistances distances_pre;   ///< before this epoch's unlabeled statistics update
    ClassDistances distances_post;  ///< after it (the value reported in EpochRecord)
    std::vector<std::size_t> capacity;
    std::vector<std::size_t> occupancy;
    std::vector<double> tau;
    std::size_t accepted = 0;
    std::size_t accepted_correct = 0;  ///< accepted items whose MAP matches the hidden label
};

struct TrainOutput {
    TwoStream model;
    std::vector<EpochRecord> records;
    std::vector<EpochDiagnostics> diagnostics;
    std::vector<std::string> trace;  ///< "<epoch>:<step>" in execution order
};

/// Unsupervised weight ramp epoch_t / epochs; throws OutOfRange outside [1, epochs].
double eta(std::size_t epoch_t, std::size_t epochs);

void validate(const EngineConfig& cfg, std::size_t n);

TrainOutput self_train(const DatasetSplit& data, const EngineConfig& cfg);

struct Evaluation {
    double auc = 0.0;
    double mca = 0.0;
    ConfusionMatrix confusion;
};

std::vector<ProbVec> predict_all(const MlpParams& params, const Dataset& ds);

/// Scores the encoder2 + head path.
Evaluation evaluate(const TwoStream& ts, const Dataset& eval);
Evaluation evaluate(const MlpParams& params, const Dataset& eval);

}  // namespace alab
