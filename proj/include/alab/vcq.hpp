#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "alab/prob.hpp"
#include "alab/random.hpp"
#include "alab/tracker.hpp"

namespace alab {

struct VcqConfig {
    std::size_t total_capacity = 512;  ///< L
    double gamma = 1.0;
    double delta = 0.25;
};

void validate(const VcqConfig& cfg, std::size_t n);

struct QueueItem {
    std::vector<double> features;
    ProbVec soft_label;
    std::size_t enqueue_epoch = 0;
    std::size_t origin = 0;  ///< row of the unlabeled set the item came from
};

/// len_i = floor(L * c_x[i]^gamma / sum_k c_x[k]^gamma), with 0^0 = 1.
std::vector<std::size_t> compute_lengths(const ClassStats& stats, const VcqConfig& cfg);

/// tau_i = min(c_u[i], delta).
double compute_threshold(const ClassStats& stats, ClassIndex i, const VcqConfig& cfg);

/// Per-class bounded FIFO queues of pseudo-labeled samples.
class Vcq {
public:
    /// Starts with uniform capacities floor(L / n) and thresholds delta.
    Vcq(std::size_t n, VcqConfig cfg);

    /// Recomputes capacities and thresholds from the statistics, dropping the
    /// oldest items of any queue that no longer fits.
    void refresh(const ClassStats& stats);

    /// Installs explicit limits. Throws InvalidQueueConfig if they exceed L.
    void set_limits(std::vector<std::size_t> capacities, std::vector<double> thresholds);

    /// Enqueues iff max(q~) > tau_i and capacity_i > 0 for i = argmax(q~); evicts the oldest item on overflow.
    bool offer(QueueItem item);

    /// Uniform draw without replacement across all stored items, features jittered.
    std::vector<QueueItem> sample_batch(std::size_t count, Rng& rng, double sigma_aug) const;

    /// Positions (global, in class-major storage order) drawn by sample_batch for the same rng state.
    std::vector<std::size_t> draw_positions(std::size_t count, Rng& rng) const;

    std::size_t classes() const noexcept { return queues_.size(); }
    const VcqConfig& config() const noexcept { return cfg_; }
    std::size_t capacity(ClassIndex i) const { return capacities_.at(i); }
    double threshold(ClassIndex i) const { return thresholds_.at(i); }
    std::size_t occupancy(ClassIndex i) const { return queues_.at(i).size(); }
    std::size_t total_size() const noexcept;
    const std::deque<QueueItem>& queue(ClassIndex i) const { return queues_.at(i); }
    const QueueItem& item_at(std::size_t position) const;

private:
    void truncate();

    VcqConfig cfg_;
    std::vector<std::deque<QueueItem>> queues_;
    std::vector<std::size_t> capacities_;
    std::vector<double> thresholds_;
};

}  // namespace alab
