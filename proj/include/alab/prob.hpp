#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alab {

using ClassIndex = std::size_t;

inline constexpr double kDefaultEps = 1e-8;
inline constexpr double kProbSumTolerance = 1e-9;

/// Nonnegative vector, not necessarily normalized.
class RawVec {
public:
    RawVec() = default;
    /// Throws NegativeEntry (or NonFiniteInput) on invalid entries.
    explicit RawVec(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }
    double sum() const noexcept;

private:
    std::vector<double> values_;
};

/// Probability vector: n >= 2 nonnegative entries summing to 1 within 1e-9.
class ProbVec {
public:
    ProbVec() = default;
    /// Validates the invariants; throws InvalidProbVec otherwise.
    explicit ProbVec(std::vector<double> values);

    static ProbVec uniform(std::size_t n);
    static ProbVec one_hot(std::size_t n, ClassIndex i);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }
    double max() const noexcept;

    friend bool operator==(const ProbVec&, const ProbVec&) = default;

private:
    struct Trusted {};
    ProbVec(std::vector<double> values, Trusted) : values_(std::move(values)) {}
    friend ProbVec normalize(const RawVec& v);

    std::vector<double> values_;
};

/// v / sum(v). Throws ZeroSum if the sum is not positive.
ProbVec normalize(const RawVec& v);
ProbVec normalize(std::span<const double> v);

RawVec hadamard_mul(std::span<const double> a, std::span<const double> b);
inline RawVec hadamard_mul(const ProbVec& a, const ProbVec& b) { return hadamard_mul(a.values(), b.values()); }

/// a[j] / max(b[j], eps).
RawVec hadamard_div(std::span<const double> a, std::span<const double> b, double eps = kDefaultEps);
inline RawVec hadamard_div(const ProbVec& a, const ProbVec& b, double eps = kDefaultEps) {
    return hadamard_div(a.values(), b.values(), eps);
}

/// normalize(p^T) elementwise with 0^T = 0. T must lie in (0, 1].
ProbVec temp_scale(const ProbVec& p, double temperature);

/// Smallest index attaining the maximum.
ClassIndex argmax_class(std::span<const double> p);
inline ClassIndex argmax_class(const ProbVec& p) { return argmax_class(p.values()); }

/// Shannon entropy (nats) of a nonnegative histogram after normalization; 0 for an empty histogram.
double histogram_entropy(std::span<const std::size_t> counts);

}  // namespace alab
