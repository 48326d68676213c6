#include "alab/vcq.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "alab/data.hpp"
#include "alab/error.hpp"

namespace alab {

void validate(const VcqConfig& cfg, std::size_t n) {
    if (cfg.total_capacity < n) {
        throw Error(Errc::InvalidQueueConfig, "queue length L=" + std::to_string(cfg.total_capacity) +
                                                  " is smaller than the class count");
    }
    if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) throw Error(Errc::InvalidQueueConfig, "gamma must be >= 0");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw Error(Errc::InvalidQueueConfig, "delta must lie in (0, 1)");
}

std::vector<std::size_t> compute_lengths(const ClassStats& stats, const VcqConfig& cfg) {
    std::vector<double> weight(stats.n);
    double total = 0.0;
    for (ClassIndex i = 0; i < stats.n; ++i) {
        const double c = stats.labeled_conf[i];
        if (c < 0.0) throw Error(Errc::NegativeEntry, "negative labeled confidence");
        weight[i] = std::pow(c, cfg.gamma);  // pow(0, 0) == 1
        total += weight[i];
    }
    if (!(total > 0.0)) throw Error(Errc::AllZeroConfidence, "every labeled confidence is zero");
    std::vector<std::size_t> len(stats.n);
    const double capacity = static_cast<double>(cfg.total_capacity);
    for (ClassIndex i = 0; i < stats.n; ++i) len[i] = static_cast<std::size_t>(std::floor(capacity * weight[i] / total));
    return len;
}

double compute_threshold(const ClassStats& stats, ClassIndex i, const VcqConfig& cfg) {
    return std::min(stats.unlabeled_conf.at(i), cfg.delta);
}

Vcq::Vcq(std::size_t n, VcqConfig cfg) : cfg_(cfg), queues_(n) {
    if (n < 2) throw Error(Errc::InvalidClassCount, "need at least 2 classes");
    validate(cfg_, n);
    capacities_.assign(n, cfg_.total_capacity / n);
    thresholds_.assign(n, cfg_.delta);
}

void Vcq::refresh(const ClassStats& stats) {
    if (stats.n != queues_.size()) throw Error(Errc::DimensionMismatch, "statistics class count differs from queue");
    capacities_ = compute_lengths(stats, cfg_);
    for (ClassIndex i = 0; i < stats.n; ++i) thresholds_[i] = compute_threshold(stats, i, cfg_);
    truncate();
}

void Vcq::set_limits(std::vector<std::size_t> capacities, std::vector<double> thresholds) {
    if (capacities.size() != queues_.size() || thresholds.size() != queues_.size()) {
        throw Error(Errc::DimensionMismatch, "limit vectors must have one entry per class");
    }
    if (std::accumulate(capacities.begin(), capacities.end(), std::size_t{0}) > cfg_.total_capacity) {
        throw Error(Errc::InvalidQueueConfig, "capacities exceed the total queue length");
    }
    capacities_ = std::move(capacities);
    thresholds_ = std::move(thresholds);
    truncate();
}

void Vcq::truncate() {
    for (ClassIndex i = 0; i < queues_.size(); ++i) {
        while (queues_[i].size() > capacities_[i]) queues_[i].pop_front();
    }
}

bool Vcq::offer(QueueItem item) {
    if (item.soft_label.size() != queues_.size()) throw Error(Errc::DimensionMismatch, "soft label size");
    const ClassIndex i = argmax_class(item.soft_label);
    if (!(item.soft_label[i] > thresholds_[i]) || capacities_[i] == 0) return false;
    auto& q = queues_[i];
    q.push_back(std::move(item));
    while (q.size() > capacities_[i]) q.pop_front();
    return true;
}

std::size_t Vcq::total_size() const noexcept {
    std::size_t total = 0;
    for (const auto& q : queues_) total += q.size();
    return total;
}

const QueueItem& Vcq::item_at(std::size_t position) const {
    for (const auto& q : queues_) {
        if (position < q.size()) return q[position];
        position -= q.size();
    }
    throw Error(Errc::OutOfRange, "queue position past the stored items");
}

std::vector<std::size_t> Vcq::draw_positions(std::size_t count, Rng& rng) const {
    const std::size_t total = total_size();
    if (total == 0) throw Error(Errc::EmptyQueue, "no pseudo-labeled items stored");
    if (count == 0) throw Error(Errc::OutOfRange, "sample count must be >= 1");
    const std::size_t take = std::min(count, total);
    std::vector<std::size_t> pool(total);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t k = 0; k < take; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, total - 1);
        std::swap(pool[k], pool[pick(rng)]);
    }
    pool.resize(take);
    return pool;
}

std::vector<QueueItem> Vcq::sample_batch(std::size_t count, Rng& rng, double sigma_aug) const {
    const auto positions = draw_positions(count, rng);
    std::vector<QueueItem> out;
    out.reserve(positions.size());
    for (std::size_t pos : positions) {
        QueueItem item = item_at(pos);
        item.features = jitter(item.features, sigma_aug, rng);
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace alab
