#include "alab/tracker.hpp"

#include <algorithm>
#include <string>

#include "alab/error.hpp"

namespace alab {

namespace {

void check_omega(double omega) {
    if (!(omega > 0.0 && omega < 1.0)) {
        throw Error(Errc::InvalidOmega, "omega " + std::to_string(omega) + " outside (0, 1)");
    }
}

void check_batch(const ClassStats& stats, std::span<const Observation> batch) {
    if (batch.empty()) throw Error(Errc::EmptyBatch, "statistics update needs a non-empty batch");
    for (const auto& obs : batch) {
        if (obs.prediction.size() != stats.n) {
            throw Error(Errc::DimensionMismatch, "prediction size differs from class count");
        }
        if (obs.cls >= stats.n) throw Error(Errc::OutOfRange, "class index " + std::to_string(obs.cls));
    }
}

struct ClassSums {
    std::vector<std::vector<double>> sum;
    std::vector<std::size_t> count;
};

ClassSums per_class_sums(std::size_t n, std::span<const Observation> batch) {
    ClassSums s{std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)), std::vector<std::size_t>(n, 0)};
    for (const auto& obs : batch) {
        auto& row = s.sum[obs.cls];
        for (std::size_t j = 0; j < n; ++j) row[j] += obs.prediction[j];
        ++s.count[obs.cls];
    }
    return s;
}

ProbVec ema(const ProbVec& old, std::span<const double> sum, std::size_t count, double omega) {
    std::vector<double> blended(old.size());
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t j = 0; j < old.size(); ++j) blended[j] = old[j] * omega + sum[j] * inv * (1.0 - omega);
    return normalize(RawVec(std::move(blended)));
}

ProbVec batch_mean_ema(const ProbVec& old, std::span<const Observation> batch, double omega) {
    if (batch.empty()) throw Error(Errc::EmptyBatch, "marginal update needs a non-empty batch");
    std::vector<double> sum(old.size(), 0.0);
    for (const auto& obs : batch) {
        if (obs.prediction.size() != old.size()) {
            throw Error(Errc::DimensionMismatch, "prediction size differs from class count");
        }
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += obs.prediction[j];
    }
    return ema(old, sum, batch.size(), omega);
}

}  // namespace

ClassStats init_stats(std::size_t n, double omega) {
    if (n < 2) throw Error(Errc::InvalidClassCount, "need at least 2 classes");
    check_omega(omega);
    ClassStats s;
    s.n = n;
    s.omega = omega;
    s.labeled_marginal.assign(n, ProbVec::uniform(n));
    s.unlabeled_marginal.assign(n, ProbVec::uniform(n));
    s.labeled_conf.assign(n, 1.0 / static_cast<double>(n));
    s.unlabeled_conf.assign(n, 1.0 / static_cast<double>(n));
    return s;
}

ClassStats update_labeled(ClassStats stats, std::span<const Observation> batch) {
    check_batch(stats, batch);
    const auto sums = per_class_sums(stats.n, batch);
    for (ClassIndex i = 0; i < stats.n; ++i) {
        if (sums.count[i] == 0) continue;
        stats.labeled_marginal[i] = ema(stats.labeled_marginal[i], sums.sum[i], sums.count[i], stats.omega);
        stats.labeled_conf[i] = stats.labeled_marginal[i][i];
    }
    return stats;
}

double fallback_factor(const ClassStats& stats, double eps) {
    double total = 0.0;
    for (ClassIndex k = 0; k < stats.n; ++k) total += stats.unlabeled_conf[k] / std::max(stats.labeled_conf[k], eps);
    return total / static_cast<double>(stats.n);
}

ClassStats update_unlabeled(ClassStats stats, std::span<const Observation> batch, double eps) {
    check_batch(stats, batch);
    const auto sums = per_class_sums(stats.n, batch);
    const double factor = fallback_factor(stats, eps);
    for (ClassIndex i = 0; i < stats.n; ++i) {
        if (sums.count[i] > 0) {
            stats.unlabeled_marginal[i] = ema(stats.unlabeled_marginal[i], sums.sum[i], sums.count[i], stats.omega);
            stats.unlabeled_conf[i] = stats.unlabeled_marginal[i][i];
            continue;
        }
        stats.unlabeled_conf[i] = std::min(1.0, stats.labeled_conf[i] * factor);
        std::vector<double> scaled(stats.n);
        for (std::size_t j = 0; j < stats.n; ++j) scaled[j] = stats.labeled_marginal[i][j] * factor;
        // A zero factor (all previous unlabeled confidences zero) leaves the marginal as is.
        if (factor > 0.0) stats.unlabeled_marginal[i] = normalize(RawVec(std::move(scaled)));
    }
    return stats;
}

Temperature Temperature::adaptive(double t_min) {
    if (!(t_min > 0.0 && t_min < 1.0)) throw Error(Errc::InvalidTemperature, "t_min must lie in (0, 1)");
    return Temperature(true, t_min);
}

Temperature Temperature::constant(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw Error(Errc::InvalidTemperature, "constant temperature must lie in (0, 1]");
    return Temperature(false, t);
}

double Temperature::for_class(const ClassStats& stats, ClassIndex i) const {
    if (!adaptive_) return value_;
    return std::clamp(1.0 - stats.labeled_conf.at(i), value_, 1.0);
}

ProbVec scaled_labeled_marginal(const ClassStats& stats, ClassIndex i, const Temperature& temperature) {
    return temp_scale(stats.labeled_marginal.at(i), temperature.for_class(stats, i));
}

ProbVec scaled_labeled_marginal(const ClassStats& stats, ClassIndex i, double t_min) {
    return scaled_labeled_marginal(stats, i, Temperature::adaptive(t_min));
}

GlobalMarginals init_global(std::size_t n, double omega) {
    if (n < 2) throw Error(Errc::InvalidClassCount, "need at least 2 classes");
    check_omega(omega);
    return GlobalMarginals{ProbVec::uniform(n), ProbVec::uniform(n), omega};
}

GlobalMarginals update_global_labeled(GlobalMarginals g, std::span<const Observation> batch) {
    g.labeled = batch_mean_ema(g.labeled, batch, g.omega);
    return g;
}

GlobalMarginals update_global_unlabeled(GlobalMarginals g, std::span<const Observation> batch) {
    g.unlabeled = batch_mean_ema(g.unlabeled, batch, g.omega);
    return g;
}

}  // namespace alab
