#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "alab/random.hpp"

namespace alab {

inline constexpr int kUnlabeled = -1;

/// K x d feature matrix (row-major) with one label per row; -1 marks an unlabeled row.
class Dataset {
public:
    Dataset() = default;
    /// Throws DimensionMismatch / UnknownLabel if the fields are inconsistent.
    Dataset(std::size_t n, std::size_t d, std::vector<double> features, std::vector<int> labels);

    std::size_t classes() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }
    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }

    std::span<const double> row(std::size_t k) const { return {features_.data() + k * d_, d_}; }
    int label(std::size_t k) const { return labels_[k]; }
    std::span<const int> labels() const noexcept { return labels_; }
    std::span<const double> features() const noexcept { return features_; }

    /// Rows picked in the given order; labels kept unless hide_labels.
    Dataset subset(std::span<const std::size_t> rows, bool hide_labels = false) const;
    std::vector<std::size_t> class_counts() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> features_;
    std::vector<int> labels_;
};

struct SynthSpec {
    std::size_t n = 5;
    std::size_t d = 16;
    std::vector<double> priors{0.6, 0.2, 0.1, 0.06, 0.04};
    double mean_scale = 2.0;
    double sigma = 1.0;
    std::size_t total = 5800;
    std::uint64_t seed = 0;
};

/// Largest-remainder rounding of priors * total; ties go to the lower class index.
std::vector<std::size_t> prior_counts(std::span<const double> priors, std::size_t total);

/// Isotropic Gaussian mixture with exact class counts, rows shuffled.
Dataset gen_synthetic(const SynthSpec& spec);

struct DatasetSplit {
    Dataset labeled;
    Dataset unlabeled;                ///< labels hidden
    std::vector<int> unlabeled_truth;  ///< hidden labels, -1 where unknown
    Dataset val;
    Dataset test;
};

/// Stratified split. val/test take fixed per-class counts from the labeled rows;
/// labeled_count rows of the remainder become the labeled set with class
/// frequencies preserved (floor of one per class); the rest become unlabeled.
/// Rows already labeled -1 always go to the unlabeled set.
DatasetSplit split(const Dataset& ds, std::size_t labeled_count, std::size_t val_per_class,
                   std::size_t test_per_class, std::uint64_t seed);

/// Moves the unlabeled rows with known truth into the labeled set (full supervision).
DatasetSplit reveal_unlabeled(DatasetSplit s);

/// Reads `f0,...,f{d-1},label`. When n is not given it is max(label) + 1.
Dataset load_csv(const std::filesystem::path& path, std::optional<std::size_t> n = std::nullopt);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

/// x + N(0, sigma_aug^2) per coordinate. Leaves the generator untouched when sigma_aug is 0.
std::vector<double> jitter(std::span<const double> x, double sigma_aug, Rng& rng);

}  // namespace alab
