#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "alab/alignment.hpp"

using namespace alab;

namespace {

ProbVec random_prob(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng) + 1e-3;
    return normalize(v);
}

}  // namespace

TEST(AlignCsda, WorkedCaseFlipsMap) {
    ClassStats s = init_stats(2);
    s.labeled_marginal[0] = ProbVec({0.5, 0.5});
    s.unlabeled_marginal[0] = ProbVec({0.8, 0.2});
    const AlignedGuess g = align_csda(ProbVec({0.6, 0.4}), s, Temperature::constant(1.0));
    EXPECT_EQ(g.source_class, 0u);
    EXPECT_NEAR(g.q_tilde[0], 0.375 / 1.375, 1e-15);
    EXPECT_NEAR(g.q_tilde[1], 1.0 / 1.375, 1e-15);
    EXPECT_EQ(argmax_class(g.q_tilde), 1u);
}

TEST(AlignCsda, IdentityWhenMarginalsMatch) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + t % 6;
        ClassStats s = init_stats(n);
        const ProbVec q = random_prob(rng, n);
        const ClassIndex i = argmax_class(q);
        s.labeled_marginal[i] = random_prob(rng, n);
        s.unlabeled_marginal[i] = s.labeled_marginal[i];
        const ProbVec out = align_csda(q, s, Temperature::constant(1.0)).q_tilde;
        for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(out[j], q[j], 1e-12);
    }
}

TEST(AlignCsda, UniformFixedPoint) {
    const ClassStats s = init_stats(4);
    const ProbVec out = align_csda(ProbVec::uniform(4), s).q_tilde;
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(out[j], 0.25, 1e-15);
}

TEST(AlignCsda, MatchesDaWhenClassAgnostic) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + t % 6;
        const ProbVec q = random_prob(rng, n), a = random_prob(rng, n), b = random_prob(rng, n);
        ClassStats s = init_stats(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.labeled_marginal[i] = a;
            s.unlabeled_marginal[i] = b;
        }
        const ProbVec csda = align_csda(q, s, Temperature::constant(1.0)).q_tilde;
        const ProbVec da = align_da(q, a, b);
        for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(csda[j], da[j], 1e-12);
    }
}

TEST(AlignCsda, InvariantToMarginalRescaling) {
    // Scaling the labeled marginal by a positive constant before normalization is a no-op,
    // and so is scaling the unlabeled one.
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 3;
        const ProbVec q = random_prob(rng, n), a = random_prob(rng, n), b = random_prob(rng, n);
        const double k1 = scale(rng), k2 = scale(rng);
        std::vector<double> raw(n), scaled(n);
        for (std::size_t j = 0; j < n; ++j) {
            raw[j] = q[j] * a[j] / b[j];
            scaled[j] = q[j] * (k1 * a[j]) / (k2 * b[j]);
        }
        const ProbVec p1 = normalize(raw), p2 = normalize(scaled);
        ClassStats s = init_stats(n);
        const ClassIndex i = argmax_class(q);
        s.labeled_marginal[i] = a;
        s.unlabeled_marginal[i] = b;
        const ProbVec out = align_csda(q, s, Temperature::constant(1.0)).q_tilde;
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_NEAR(p1[j], p2[j], 1e-12);
            EXPECT_NEAR(out[j], p1[j], 1e-12);
        }
    }
}

TEST(AlignCsda, AdaptiveTemperatureUsesLabeledConfidence) {
    ClassStats s = init_stats(3);
    s.labeled_marginal[0] = ProbVec({0.7, 0.2, 0.1});
    s.labeled_conf[0] = 0.5;
    s.unlabeled_marginal[0] = ProbVec::uniform(3);
    const ProbVec q({0.5, 0.3, 0.2});
    const AlignedGuess g = align_csda(q, s);
    const ProbVec scaled = temp_scale(s.labeled_marginal[0], 0.5);
    std::vector<double> expect(3);
    for (std::size_t j = 0; j < 3; ++j) expect[j] = q[j] * scaled[j] / (1.0 / 3.0);
    const ProbVec e = normalize(expect);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(g.q_tilde[j], e[j], 1e-12);
    EXPECT_EQ(g.raw, q);
}

TEST(AlignDa, Examples) {
    const ProbVec q({0.6, 0.4});
    EXPECT_EQ(align_da(q, ProbVec({0.3, 0.7}), ProbVec({0.3, 0.7})), q);
    const ProbVec out = align_da(q, ProbVec({0.5, 0.5}), ProbVec({0.8, 0.2}));
    EXPECT_NEAR(out[0], 0.2727, 1e-4);
    EXPECT_NEAR(out[1], 0.7273, 1e-4);
    const ProbVec hot = align_da(ProbVec({0, 1, 0}), ProbVec({0.2, 0.3, 0.5}), ProbVec({0.5, 0.3, 0.2}));
    EXPECT_EQ(hot, ProbVec({0, 1, 0}));
}

TEST(ClassDistance, Examples) {
    const ClassDistances zero = class_distance_matrix(init_stats(4));
    EXPECT_EQ(zero.frobenius, 0.0);
    for (double d : zero.per_class) EXPECT_EQ(d, 0.0);

    ClassStats s = init_stats(2);
    s.labeled_marginal[0] = ProbVec({1, 0});
    s.unlabeled_marginal[0] = ProbVec({0, 1});
    const ClassDistances d = class_distance_matrix(s);
    EXPECT_NEAR(d.per_class[0], std::sqrt(2.0), 1e-15);
    EXPECT_EQ(d.per_class[1], 0.0);
    EXPECT_NEAR(d.frobenius, std::sqrt(2.0), 1e-15);
}

TEST(ClassDistance, BruteForce) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 6;
        ClassStats s = init_stats(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.labeled_marginal[i] = random_prob(rng, n);
            s.unlabeled_marginal[i] = random_prob(rng, n);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double diff = s.labeled_marginal[i][j] - s.unlabeled_marginal[i][j];
                sum += diff * diff;
            }
        EXPECT_NEAR(class_distance_matrix(s).frobenius, std::sqrt(sum), 1e-12);
    }
}

TEST(ClassDistance, IgnoresTemperature) {
    ClassStats s = init_stats(3);
    s.labeled_marginal[0] = ProbVec({0.7, 0.2, 0.1});
    s.labeled_conf[0] = 0.9;
    const double expected = std::sqrt(std::pow(0.7 - 1.0 / 3, 2) + std::pow(0.2 - 1.0 / 3, 2) +
                                      std::pow(0.1 - 1.0 / 3, 2));
    EXPECT_NEAR(class_distance_matrix(s).frobenius, expected, 1e-15);
}
