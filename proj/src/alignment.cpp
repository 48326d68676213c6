#include "alab/alignment.hpp"

#include <cmath>

#include "alab/error.hpp"

namespace alab {

AlignedGuess align_csda(const ProbVec& q, const ClassStats& stats, const Temperature& temperature, double eps) {
    if (q.size() != stats.n) throw Error(Errc::DimensionMismatch, "prediction size differs from class count");
    const ClassIndex i = argmax_class(q);
    const ProbVec target = scaled_labeled_marginal(stats, i, temperature);
    const RawVec ratio = hadamard_div(target, stats.unlabeled_marginal[i], eps);
    return AlignedGuess{normalize(hadamard_mul(q.values(), ratio.values())), i, q};
}

AlignedGuess align_csda(const ProbVec& q, const ClassStats& stats, double eps, double t_min) {
    return align_csda(q, stats, Temperature::adaptive(t_min), eps);
}

ProbVec align_da(const ProbVec& q, const ProbVec& labeled_global, const ProbVec& unlabeled_global, double eps) {
    if (q.size() != labeled_global.size()) throw Error(Errc::DimensionMismatch, "prediction and marginal sizes differ");
    const RawVec ratio = hadamard_div(labeled_global, unlabeled_global, eps);
    return normalize(hadamard_mul(q.values(), ratio.values()));
}

ClassDistances class_distance_matrix(const ClassStats& stats) {
    ClassDistances out;
    out.per_class.resize(stats.n);
    double total = 0.0;
    for (ClassIndex i = 0; i < stats.n; ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < stats.n; ++j) {
            const double diff = stats.labeled_marginal[i][j] - stats.unlabeled_marginal[i][j];
            sq += diff * diff;
        }
        out.per_class[i] = std::sqrt(sq);
        total += sq;
    }
    out.frobenius = std::sqrt(total);
    return out;
}

}  // namespace alab
