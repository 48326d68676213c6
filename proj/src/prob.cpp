#include "alab/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "alab/error.hpp"

namespace alab {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::ZeroSum: return "ZeroSum";
        case Errc::NegativeEntry: return "NegativeEntry";
        case Errc::InvalidProbVec: return "InvalidProbVec";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::InvalidTemperature: return "InvalidTemperature";
        case Errc::InvalidOmega: return "InvalidOmega";
        case Errc::InvalidClassCount: return "InvalidClassCount";
        case Errc::EmptyBatch: return "EmptyBatch";
        case Errc::AllZeroConfidence: return "AllZeroConfidence";
        case Errc::InvalidQueueConfig: return "InvalidQueueConfig";
        case Errc::EmptyQueue: return "EmptyQueue";
        case Errc::NonFiniteInput: return "NonFiniteInput";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::EmptyLabeledSet: return "EmptyLabeledSet";
        case Errc::EmptyEvalSet: return "EmptyEvalSet";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::InfeasibleSplit: return "InfeasibleSplit";
        case Errc::ParseError: return "ParseError";
        case Errc::RaggedRow: return "RaggedRow";
        case Errc::UnknownLabel: return "UnknownLabel";
        case Errc::Undefined: return "Undefined";
        case Errc::MissingRecords: return "MissingRecords";
        case Errc::ConfigError: return "ConfigError";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

namespace {

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(Errc::DimensionMismatch,
                    "vector sizes " + std::to_string(a) + " and " + std::to_string(b) + " differ");
    }
}

}  // namespace

RawVec::RawVec(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(Errc::NonFiniteInput, "raw vector entry is not finite");
        if (v < 0.0) throw Error(Errc::NegativeEntry, "raw vector entry " + std::to_string(v) + " < 0");
    }
}

double RawVec::sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }

ProbVec::ProbVec(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw Error(Errc::InvalidProbVec, "probability vector needs at least 2 entries");
    double total = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) throw Error(Errc::InvalidProbVec, "entry outside [0, inf)");
        total += v;
    }
    if (std::abs(total - 1.0) > kProbSumTolerance) {
        throw Error(Errc::InvalidProbVec, "entries sum to " + std::to_string(total));
    }
}

ProbVec ProbVec::uniform(std::size_t n) { return ProbVec(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

ProbVec ProbVec::one_hot(std::size_t n, ClassIndex i) {
    std::vector<double> v(n, 0.0);
    v.at(i) = 1.0;
    return ProbVec(std::move(v));
}

double ProbVec::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

ProbVec normalize(const RawVec& v) {
    const double total = v.sum();
    if (!(total > 0.0)) throw Error(Errc::ZeroSum, "cannot normalize a vector with non-positive sum");
    std::vector<double> out(v.values().begin(), v.values().end());
    for (double& x : out) x /= total;
    if (out.size() < 2) throw Error(Errc::InvalidProbVec, "probability vector needs at least 2 entries");
    return ProbVec(std::move(out), ProbVec::Trusted{});
}

ProbVec normalize(std::span<const double> v) { return normalize(RawVec(std::vector<double>(v.begin(), v.end()))); }

RawVec hadamard_mul(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size());
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    return RawVec(std::move(out));
}

RawVec hadamard_div(std::span<const double> a, std::span<const double> b, double eps) {
    require_same_size(a.size(), b.size());
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] / std::max(b[j], eps);
    return RawVec(std::move(out));
}

ProbVec temp_scale(const ProbVec& p, double temperature) {
    if (!(temperature > 0.0) || temperature > 1.0) {
        throw Error(Errc::InvalidTemperature, "temperature " + std::to_string(temperature) + " outside (0, 1]");
    }
    if (temperature == 1.0) return p;
    std::vector<double> powered(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) powered[j] = p[j] > 0.0 ? std::pow(p[j], temperature) : 0.0;
    return normalize(RawVec(std::move(powered)));
}

ClassIndex argmax_class(std::span<const double> p) {
    ClassIndex best = 0;
    for (ClassIndex j = 1; j < p.size(); ++j) {
        if (p[j] > p[best]) best = j;
    }
    return best;
}

double histogram_entropy(std::span<const std::size_t> counts) {
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    if (total == 0.0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace alab
