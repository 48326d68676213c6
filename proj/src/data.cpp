#include "alab/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "alab/error.hpp"

namespace alab {

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> features, std::vector<int> labels)
    : n_(n), d_(d), features_(std::move(features)), labels_(std::move(labels)) {
    if (d_ == 0) throw Error(Errc::DimensionMismatch, "feature dimension must be >= 1");
    if (features_.size() != labels_.size() * d_) {
        throw Error(Errc::DimensionMismatch, "feature matrix does not match label count");
    }
    for (int y : labels_) {
        if (y < kUnlabeled || y >= static_cast<int>(n_)) {
            throw Error(Errc::UnknownLabel, "label " + std::to_string(y) + " outside [-1, n)");
        }
    }
}

Dataset Dataset::subset(std::span<const std::size_t> rows, bool hide_labels) const {
    std::vector<double> f;
    f.reserve(rows.size() * d_);
    std::vector<int> y;
    y.reserve(rows.size());
    for (std::size_t k : rows) {
        auto r = row(k);
        f.insert(f.end(), r.begin(), r.end());
        y.push_back(hide_labels ? kUnlabeled : labels_[k]);
    }
    return Dataset(n_, d_, std::move(f), std::move(y));
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(n_, 0);
    for (int y : labels_) {
        if (y >= 0) ++counts[static_cast<std::size_t>(y)];
    }
    return counts;
}

std::vector<std::size_t> prior_counts(std::span<const double> priors, std::size_t total) {
    std::vector<std::size_t> counts(priors.size());
    std::vector<double> remainder(priors.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
        const double exact = priors[i] * static_cast<double>(total);
        // Guard against 600 being represented as 599.9999999.
        const double floored = std::floor(exact + 1e-9);
        counts[i] = static_cast<std::size_t>(floored);
        remainder[i] = exact - floored;
        assigned += counts[i];
    }
    std::vector<std::size_t> order(priors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size(), ++assigned) ++counts[order[k]];
    return counts;
}

Dataset gen_synthetic(const SynthSpec& spec) {
    if (spec.n < 2) throw Error(Errc::InvalidSpec, "need at least 2 classes");
    if (spec.d == 0) throw Error(Errc::InvalidSpec, "feature dimension must be >= 1");
    if (spec.priors.size() != spec.n) throw Error(Errc::InvalidSpec, "one prior per class required");
    double prior_sum = 0.0;
    for (double p : spec.priors) {
        if (!(p >= 0.0)) throw Error(Errc::InvalidSpec, "priors must be nonnegative");
        prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9) throw Error(Errc::InvalidSpec, "priors must sum to 1");
    if (!(spec.sigma > 0.0)) throw Error(Errc::InvalidSpec, "sigma must be > 0");
    if (!(spec.mean_scale >= 0.0)) throw Error(Errc::InvalidSpec, "mean scale must be >= 0");

    Rng rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> means(spec.n, std::vector<double>(spec.d));
    for (auto& mu : means) {
        double norm = 0.0;
        do {
            for (double& v : mu) v = gauss(rng);
            norm = std::sqrt(std::inner_product(mu.begin(), mu.end(), mu.begin(), 0.0));
        } while (norm == 0.0);
        for (double& v : mu) v = v / norm * spec.mean_scale;
    }

    const auto counts = prior_counts(spec.priors, spec.total);
    std::vector<double> features;
    features.reserve(spec.total * spec.d);
    std::vector<int> labels;
    labels.reserve(spec.total);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t k = 0; k < counts[i]; ++k) {
            for (std::size_t j = 0; j < spec.d; ++j) features.push_back(means[i][j] + spec.sigma * gauss(rng));
            labels.push_back(static_cast<int>(i));
        }
    }
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    return Dataset(spec.n, spec.d, std::move(features), std::move(labels)).subset(order);
}

namespace {

std::vector<std::size_t> allocate_labeled(std::span<const std::size_t> pool, std::size_t labeled_count) {
    const std::size_t n = pool.size();
    const std::size_t available = std::accumulate(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> alloc(n, 0);
    if (labeled_count >= available) return {pool.begin(), pool.end()};
    std::vector<double> target(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = static_cast<double>(labeled_count) * static_cast<double>(pool[i]) / static_cast<double>(available);
        alloc[i] = std::min(pool[i], std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(target[i]))));
    }
    auto total = [&] { return std::accumulate(alloc.begin(), alloc.end(), std::size_t{0}); };
    while (total() < labeled_count) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (alloc[i] >= pool[i]) continue;
            if (best == n || target[i] - alloc[i] > target[best] - alloc[best]) best = i;
        }
        ++alloc[best];
    }
    while (total() > labeled_count) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (alloc[i] <= 1) continue;
            if (best == n || alloc[i] - target[i] > alloc[best] - target[best]) best = i;
        }
        if (best == n) throw Error(Errc::InfeasibleSplit, "labeled count cannot give every class one sample");
        --alloc[best];
    }
    return alloc;
}

}  // namespace

DatasetSplit split(const Dataset& ds, std::size_t labeled_count, std::size_t val_per_class,
                   std::size_t test_per_class, std::uint64_t seed) {
    const std::size_t n = ds.classes();
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> by_class(n);
    std::vector<std::size_t> already_unlabeled;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        if (ds.label(k) == kUnlabeled) {
            already_unlabeled.push_back(k);
        } else {
            by_class[static_cast<std::size_t>(ds.label(k))].push_back(k);
        }
    }
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (by_class[i].size() < val_per_class + test_per_class + 1) {
            throw Error(Errc::InfeasibleSplit, "class " + std::to_string(i) + " has " +
                                                   std::to_string(by_class[i].size()) +
                                                   " rows, too few for val/test plus one labeled sample");
        }
        std::shuffle(by_class[i].begin(), by_class[i].end(), rng);
        pool[i] = by_class[i].size() - val_per_class - test_per_class;
    }
    if (labeled_count < n) throw Error(Errc::InfeasibleSplit, "labeled count must be at least the class count");
    const auto alloc = allocate_labeled(pool, labeled_count);

    std::vector<std::size_t> val_rows, test_rows, labeled_rows, unlabeled_rows = already_unlabeled;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rows = by_class[i];
        auto it = rows.begin();
        val_rows.insert(val_rows.end(), it, it + val_per_class);
        it += val_per_class;
        test_rows.insert(test_rows.end(), it, it + test_per_class);
        it += test_per_class;
        labeled_rows.insert(labeled_rows.end(), it, it + alloc[i]);
        it += alloc[i];
        unlabeled_rows.insert(unlabeled_rows.end(), it, rows.end());
    }
    for (auto* rows : {&val_rows, &test_rows, &labeled_rows, &unlabeled_rows}) std::sort(rows->begin(), rows->end());

    DatasetSplit out;
    out.labeled = ds.subset(labeled_rows);
    out.unlabeled = ds.subset(unlabeled_rows, true);
    out.unlabeled_truth.reserve(unlabeled_rows.size());
    for (std::size_t k : unlabeled_rows) out.unlabeled_truth.push_back(ds.label(k));
    out.val = ds.subset(val_rows);
    out.test = ds.subset(test_rows);
    return out;
}

DatasetSplit reveal_unlabeled(DatasetSplit s) {
    std::vector<double> f(s.labeled.features().begin(), s.labeled.features().end());
    std::vector<int> y(s.labeled.labels().begin(), s.labeled.labels().end());
    std::vector<std::size_t> still_hidden;
    for (std::size_t k = 0; k < s.unlabeled.size(); ++k) {
        if (s.unlabeled_truth[k] == kUnlabeled) {
            still_hidden.push_back(k);
            continue;
        }
        auto r = s.unlabeled.row(k);
        f.insert(f.end(), r.begin(), r.end());
        y.push_back(s.unlabeled_truth[k]);
    }
    const std::size_t n = s.labeled.classes();
    const std::size_t d = s.labeled.dim();
    s.labeled = Dataset(n, d, std::move(f), std::move(y));
    s.unlabeled = s.unlabeled.subset(still_hidden, true);
    s.unlabeled_truth.assign(still_hidden.size(), kUnlabeled);
    return s;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        cells.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

Dataset load_csv(const std::filesystem::path& path, std::optional<std::size_t> n) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::ParseError, at_line(1) + ": missing header");
    const auto header = split_commas(trim(line));
    if (header.size() < 2 || trim(header.back()) != "label") {
        throw Error(Errc::ParseError, at_line(1) + ": header must end with 'label'");
    }
    const std::size_t d = header.size() - 1;
    for (std::size_t j = 0; j < d; ++j) {
        if (trim(header[j]) != "f" + std::to_string(j)) {
            throw Error(Errc::ParseError, at_line(1) + ": expected column f" + std::to_string(j));
        }
    }

    std::vector<double> features;
    std::vector<int> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto cells = split_commas(body);
        if (cells.size() != d + 1) {
            throw Error(Errc::RaggedRow, at_line(line_no) + ": expected " + std::to_string(d + 1) + " cells, got " +
                                             std::to_string(cells.size()));
        }
        for (std::size_t j = 0; j < d; ++j) {
            const auto cell = trim(cells[j]);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw Error(Errc::ParseError, at_line(line_no) + ": bad number '" + std::string(cell) + "'");
            }
            features.push_back(v);
        }
        const auto cell = trim(cells[d]);
        int y = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), y);
        if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw Error(Errc::ParseError, at_line(line_no) + ": bad label '" + std::string(cell) + "'");
        }
        if (y < kUnlabeled || (n && y >= static_cast<int>(*n))) {
            throw Error(Errc::UnknownLabel, at_line(line_no) + ": label " + std::to_string(y));
        }
        labels.push_back(y);
    }
    std::size_t classes = n.value_or(0);
    if (!n) {
        const int max_label = labels.empty() ? -1 : *std::max_element(labels.begin(), labels.end());
        classes = static_cast<std::size_t>(std::max(2, max_label + 1));
    }
    return Dataset(classes, d, std::move(features), std::move(labels));
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    for (std::size_t j = 0; j < ds.dim(); ++j) out << 'f' << j << ',';
    out << "label\n";
    char buf[32];
    for (std::size_t k = 0; k < ds.size(); ++k) {
        for (double v : ds.row(k)) {
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out.write(buf, res.ptr - buf);
            out << ',';
        }
        out << ds.label(k) << '\n';
    }
}

std::vector<double> jitter(std::span<const double> x, double sigma_aug, Rng& rng) {
    std::vector<double> out(x.begin(), x.end());
    if (sigma_aug == 0.0) return out;
    std::normal_distribution<double> gauss(0.0, sigma_aug);
    for (double& v : out) v += gauss(rng);
    return out;
}

}  // namespace alab
