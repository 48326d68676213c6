#include "alab/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "alab/error.hpp"

namespace alab {

namespace {

std::size_t class_count(const EvalBatch& e) {
    if (e.scores.empty()) throw Error(Errc::EmptyEvalSet, "no predictions to score");
    if (e.scores.size() != e.truth.size()) throw Error(Errc::DimensionMismatch, "scores and truth differ in length");
    const std::size_t n = e.scores.front().size();
    for (std::size_t k = 0; k < e.scores.size(); ++k) {
        if (e.scores[k].size() != n) throw Error(Errc::DimensionMismatch, "score rows differ in width");
        if (e.truth[k] >= n) throw Error(Errc::OutOfRange, "true class outside score width");
    }
    return n;
}

}  // namespace

double auc_one_vs_rest(const EvalBatch& e, ClassIndex cls) {
    const std::size_t total = e.scores.size();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return e.scores[a][cls] < e.scores[b][cls]; });

    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t start = 0; start < total;) {
        std::size_t end = start + 1;
        while (end < total && e.scores[order[end]][cls] == e.scores[order[start]][cls]) ++end;
        // Ranks start..end-1 (0-based) share the midrank.
        const double midrank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t k = start; k < end; ++k) {
            if (e.truth[order[k]] == cls) {
                positive_rank_sum += midrank;
                ++positives;
            }
        }
        start = end;
    }
    const std::size_t negatives = total - positives;
    if (positives == 0 || negatives == 0) return -1.0;
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

double auc_macro(const EvalBatch& e) {
    const std::size_t n = class_count(e);
    double sum = 0.0;
    std::size_t eligible = 0;
    for (ClassIndex i = 0; i < n; ++i) {
        const double a = auc_one_vs_rest(e, i);
        if (a < 0.0) continue;
        sum += a;
        ++eligible;
    }
    if (eligible == 0) throw Error(Errc::Undefined, "no class has both positives and negatives");
    return sum / static_cast<double>(eligible);
}

ConfusionMatrix confusion(const EvalBatch& e) {
    const std::size_t n = class_count(e);
    ConfusionMatrix cm(n, std::vector<std::size_t>(n, 0));
    for (std::size_t k = 0; k < e.scores.size(); ++k) ++cm[e.truth[k]][argmax_class(e.scores[k])];
    return cm;
}

double mca_from_confusion(const ConfusionMatrix& cm) {
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) {
        const std::size_t row = std::accumulate(cm[i].begin(), cm[i].end(), std::size_t{0});
        if (row == 0) continue;
        sum += static_cast<double>(cm[i][i]) / static_cast<double>(row);
        ++present;
    }
    if (present == 0) throw Error(Errc::EmptyEvalSet, "confusion matrix is empty");
    return sum / static_cast<double>(present);
}

double mca(const EvalBatch& e) {
    const std::size_t n = class_count(e);
    std::vector<std::size_t> correct(n, 0), count(n, 0);
    for (std::size_t k = 0; k < e.scores.size(); ++k) {
        ++count[e.truth[k]];
        if (argmax_class(e.scores[k]) == e.truth[k]) ++correct[e.truth[k]];
    }
    double sum = 0.0;
    std::size_t present = 0;
    for (ClassIndex i = 0; i < n; ++i) {
        if (count[i] == 0) continue;
        sum += static_cast<double>(correct[i]) / static_cast<double>(count[i]);
        ++present;
    }
    return sum / static_cast<double>(present);
}

}  // namespace alab
