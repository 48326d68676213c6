#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alab/prob.hpp"

namespace alab {

/// K predictions (rows) with their true classes.
struct EvalBatch {
    std::vector<ProbVec> scores;
    std::vector<ClassIndex> truth;
};

/// Macro one-vs-rest AUC via Mann-Whitney midranks. Classes lacking positives or
/// negatives are skipped; throws Undefined if none is eligible.
double auc_macro(const EvalBatch& e);

/// One-vs-rest AUC for a single class, or a negative value if the class is ineligible.
double auc_one_vs_rest(const EvalBatch& e, ClassIndex cls);

/// Mean over classes present in truth of per-class recall.
double mca(const EvalBatch& e);

using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

/// entry[true][predicted].
ConfusionMatrix confusion(const EvalBatch& e);

double mca_from_confusion(const ConfusionMatrix& cm);

}  // namespace alab
