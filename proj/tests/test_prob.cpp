#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "alab/error.hpp"
#include "alab/prob.hpp"

using namespace alab;

namespace {

ProbVec random_prob(std::mt19937_64& rng, std::size_t n, bool allow_zero = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = (allow_zero && u(rng) < 0.2) ? 0.0 : u(rng) + 1e-3;
    v[n - 1] += 1e-3;
    return normalize(v);
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an alab::Error";
    return Errc::Undefined;
}

}  // namespace

TEST(Normalize, Examples) {
    EXPECT_EQ(normalize(std::vector<double>{2, 2}), ProbVec({0.5, 0.5}));
    EXPECT_EQ(normalize(std::vector<double>{1, 0, 0}), ProbVec({1, 0, 0}));
    const ProbVec p = normalize(std::vector<double>{0.375, 1.0});
    EXPECT_NEAR(p[0], 0.375 / 1.375, 1e-15);
    EXPECT_NEAR(p[1], 1.0 / 1.375, 1e-15);
    EXPECT_NEAR(p[0], 0.2727, 1e-4);
}

TEST(Normalize, Errors) {
    EXPECT_EQ(code_of([] { normalize(std::vector<double>{0, 0}); }), Errc::ZeroSum);
    EXPECT_EQ(code_of([] { normalize(std::vector<double>{1, -0.5}); }), Errc::NegativeEntry);
}

TEST(Normalize, Idempotent) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> v(2 + t % 6);
        for (auto& x : v) x = u(rng);
        const ProbVec once = normalize(v);
        const ProbVec twice = normalize(once.values());
        for (std::size_t j = 0; j < v.size(); ++j) EXPECT_NEAR(once[j], twice[j], 1e-12);
    }
}

TEST(ProbVec, RejectsInvalid) {
    EXPECT_EQ(code_of([] { ProbVec({0.5, 0.6}); }), Errc::InvalidProbVec);
    EXPECT_EQ(code_of([] { ProbVec({1.0}); }), Errc::InvalidProbVec);
    EXPECT_EQ(code_of([] { ProbVec({1.5, -0.5}); }), Errc::InvalidProbVec);
}

TEST(Hadamard, MulExamples) {
    EXPECT_EQ(hadamard_mul(ProbVec({0.5, 0.5}), ProbVec({0.5, 0.5})).values()[0], 0.25);
    const RawVec mask = hadamard_mul(ProbVec({1, 0}), ProbVec({0.3, 0.7}));
    EXPECT_DOUBLE_EQ(mask[0], 0.3);
    EXPECT_EQ(mask[1], 0.0);
    const RawVec r = hadamard_mul(ProbVec({0.6, 0.4}), ProbVec({0.5, 0.5}));
    EXPECT_DOUBLE_EQ(r[0], 0.3);
    EXPECT_DOUBLE_EQ(r[1], 0.2);
}

TEST(Hadamard, DivExamples) {
    const RawVec ones = hadamard_div(ProbVec({0.5, 0.5}), ProbVec({0.5, 0.5}));
    EXPECT_EQ(ones[0], 1.0);
    EXPECT_EQ(ones[1], 1.0);
    const RawVec r = hadamard_div(ProbVec({0.6, 0.4}), ProbVec({0.8, 0.2}));
    EXPECT_DOUBLE_EQ(r[0], 0.75);
    EXPECT_DOUBLE_EQ(r[1], 2.0);
    const RawVec floored = hadamard_div(ProbVec({0.5, 0.5}), ProbVec({0, 1}), 1e-8);
    EXPECT_DOUBLE_EQ(floored[0], 5e7);
    EXPECT_DOUBLE_EQ(floored[1], 0.5);
}

TEST(Hadamard, DimensionMismatch) {
    EXPECT_EQ(code_of([] { hadamard_mul(ProbVec({0.5, 0.5}), ProbVec({0.2, 0.3, 0.5})); }), Errc::DimensionMismatch);
    EXPECT_EQ(code_of([] { hadamard_div(ProbVec({0.5, 0.5}), ProbVec({0.2, 0.3, 0.5})); }), Errc::DimensionMismatch);
}

TEST(Hadamard, SelfRatioIsOnesAndCancels) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + t % 5;
        const ProbVec a = random_prob(rng, n);
        const ProbVec b = random_prob(rng, n);
        const RawVec ones = hadamard_div(b, b, kDefaultEps);
        for (std::size_t j = 0; j < n; ++j) EXPECT_DOUBLE_EQ(ones[j], 1.0);
        const ProbVec back = normalize(hadamard_mul(a.values(), ones.values()));
        for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(back[j], a[j], 1e-15);
    }
}

TEST(TempScale, Examples) {
    const ProbVec p({0.7, 0.2, 0.1});
    EXPECT_EQ(temp_scale(p, 1.0), p);
    const ProbVec u = ProbVec::uniform(4);
    const ProbVec su = temp_scale(u, 0.3);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(su[j], 0.25, 1e-15);

    // Oracle: long-double square roots, renormalized.
    const long double r0 = std::sqrt(0.7L), r1 = std::sqrt(0.2L), r2 = std::sqrt(0.1L);
    const long double total = r0 + r1 + r2;
    const ProbVec s = temp_scale(p, 0.5);
    EXPECT_NEAR(s[0], static_cast<double>(r0 / total), 1e-12);
    EXPECT_NEAR(s[1], static_cast<double>(r1 / total), 1e-12);
    EXPECT_NEAR(s[2], static_cast<double>(r2 / total), 1e-12);
    EXPECT_NEAR(s[0], 0.5229, 5e-5);
    EXPECT_NEAR(s[1], 0.2795, 5e-5);
    EXPECT_NEAR(s[2], 0.1976, 5e-5);
}

TEST(TempScale, ZeroStaysZero) {
    const ProbVec s = temp_scale(ProbVec({0.0, 0.9, 0.1}), 0.05);
    EXPECT_EQ(s[0], 0.0);
}

TEST(TempScale, InvalidTemperature) {
    const ProbVec p({0.5, 0.5});
    EXPECT_EQ(code_of([&] { temp_scale(p, 0.0); }), Errc::InvalidTemperature);
    EXPECT_EQ(code_of([&] { temp_scale(p, -1.0); }), Errc::InvalidTemperature);
    EXPECT_EQ(code_of([&] { temp_scale(p, 1.5); }), Errc::InvalidTemperature);
}

TEST(TempScale, PreservesArgmaxAndFlattens) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(1e-3, 1.0);
    for (int t = 0; t < 2000; ++t) {
        const ProbVec p = random_prob(rng, 2 + t % 7, t % 3 == 0);
        const double t1 = ut(rng), t2 = ut(rng);
        EXPECT_EQ(argmax_class(temp_scale(p, t1)), argmax_class(p));
        if (*std::min_element(p.values().begin(), p.values().end()) == 0.0) continue;
        const auto spread = [](const ProbVec& q) {
            const auto [lo, hi] = std::minmax_element(q.values().begin(), q.values().end());
            return *hi / *lo;
        };
        const double lo_t = std::min(t1, t2), hi_t = std::max(t1, t2);
        EXPECT_LE(spread(temp_scale(p, lo_t)), spread(temp_scale(p, hi_t)) * (1 + 1e-12));
    }
}

TEST(Argmax, TieBreakLowest) {
    EXPECT_EQ(argmax_class(ProbVec({0.1, 0.9})), 1u);
    EXPECT_EQ(argmax_class(ProbVec({0.5, 0.5})), 0u);
    EXPECT_EQ(argmax_class(std::vector<double>{0.2727, 0.7272}), 1u);
    EXPECT_EQ(argmax_class(ProbVec({0.2, 0.4, 0.4})), 1u);
}

TEST(HistogramEntropy, Basics) {
    EXPECT_EQ(histogram_entropy(std::vector<std::size_t>{0, 0}), 0.0);
    EXPECT_EQ(histogram_entropy(std::vector<std::size_t>{5, 0}), 0.0);
    EXPECT_NEAR(histogram_entropy(std::vector<std::size_t>{3, 3, 3, 3}), std::log(4.0), 1e-15);
}
