#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alab/prob.hpp"

namespace alab {

inline constexpr double kDefaultOmega = 0.95;
inline constexpr double kDefaultTMin = 0.05;

/// Per-class EMA state of marginal predictions and mean class confidences.
///
/// labeled_marginal[i] is the smoothed mean prediction over labeled samples whose
/// true class is i; unlabeled_marginal[i] is the same over unlabeled samples whose
/// MAP class is i. The confidences are the own-class entries of those marginals,
/// except that the unlabeled confidence of a class absent from a batch is
/// re-estimated from the labeled confidence (see update_unlabeled).
struct ClassStats {
    std::size_t n = 0;
    std::vector<ProbVec> labeled_marginal;
    std::vector<ProbVec> unlabeled_marginal;
    std::vector<double> labeled_conf;
    std::vector<double> unlabeled_conf;
    double omega = kDefaultOmega;
};

/// One element of a batch: the model prediction and the class it is attributed to
/// (true label for labeled data, MAP class for unlabeled data).
struct Observation {
    ProbVec prediction;
    ClassIndex cls = 0;
};

ClassStats init_stats(std::size_t n, double omega = kDefaultOmega);

ClassStats update_labeled(ClassStats stats, std::span<const Observation> batch);

/// EMA update for classes present in the batch. A class with no batch members gets
///   c_u[i] = c_x[i] * mean_k(c_u_prev[k] / max(c_x[k], eps))
/// and its marginal is rebuilt from the labeled marginal scaled by the same factor.
ClassStats update_unlabeled(ClassStats stats, std::span<const Observation> batch, double eps = kDefaultEps);

/// The average c_u / c_x ratio used by the fallback, computed from the current state.
double fallback_factor(const ClassStats& stats, double eps = kDefaultEps);

/// Per-class temperature applied to the labeled marginal before alignment.
class Temperature {
public:
    /// T_i = clamp(1 - c_x[i], t_min, 1).
    static Temperature adaptive(double t_min = kDefaultTMin);
    /// T_i = t for every class.
    static Temperature constant(double t);

    bool is_adaptive() const noexcept { return adaptive_; }
    double value() const noexcept { return value_; }
    double for_class(const ClassStats& stats, ClassIndex i) const;

private:
    Temperature(bool adaptive, double value) : adaptive_(adaptive), value_(value) {}
    bool adaptive_;
    double value_;
};

ProbVec scaled_labeled_marginal(const ClassStats& stats, ClassIndex i, double t_min = kDefaultTMin);
ProbVec scaled_labeled_marginal(const ClassStats& stats, ClassIndex i, const Temperature& temperature);

/// Class-agnostic EMA marginals used by vanilla distribution alignment.
struct GlobalMarginals {
    ProbVec labeled;
    ProbVec unlabeled;
    double omega = kDefaultOmega;
};

GlobalMarginals init_global(std::size_t n, double omega = kDefaultOmega);
GlobalMarginals update_global_labeled(GlobalMarginals g, std::span<const Observation> batch);
GlobalMarginals update_global_unlabeled(GlobalMarginals g, std::span<const Observation> batch);

}  // namespace alab
