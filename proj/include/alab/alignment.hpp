#pragma once

#include <vector>

#include "alab/prob.hpp"
#include "alab/tracker.hpp"

namespace alab {

struct AlignedGuess {
    ProbVec q_tilde;
    ClassIndex source_class = 0;  ///< MAP class of the raw prediction; selects the marginal pair
    ProbVec raw;
};

/// Class-specific alignment: q~ = normalize(q * scaled(lx_i) / lu_i), i = argmax(q).
AlignedGuess align_csda(const ProbVec& q, const ClassStats& stats, const Temperature& temperature,
                        double eps = kDefaultEps);
AlignedGuess align_csda(const ProbVec& q, const ClassStats& stats, double eps = kDefaultEps,
                        double t_min = kDefaultTMin);

/// Vanilla alignment with class-agnostic marginals.
ProbVec align_da(const ProbVec& q, const ProbVec& labeled_global, const ProbVec& unlabeled_global,
                 double eps = kDefaultEps);

struct ClassDistances {
    std::vector<double> per_class;  ///< ||lx_i - lu_i||_2
    double frobenius = 0.0;
};

/// Distances between the unscaled labeled and unlabeled class marginals.
ClassDistances class_distance_matrix(const ClassStats& stats);

}  // namespace alab
