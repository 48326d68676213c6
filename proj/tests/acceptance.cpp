// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "alab/alignment.hpp"
#include "alab/config.hpp"
#include "alab/error.hpp"
#include "alab/metrics.hpp"
#include "alab/report.hpp"
#include "alab/runner.hpp"
#include "alab/tracker.hpp"
#include "alab/vcq.hpp"
#include "oracles.hpp"

using namespace alab;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
}

void criterion_1() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + t % 7;
        const ProbVec q = oracle::random_prob(rng, n), a = oracle::random_prob(rng, n), b = oracle::random_prob(rng, n);
        ClassStats s = init_stats(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.labeled_marginal[i] = a;
            s.unlabeled_marginal[i] = b;
            s.labeled_conf[i] = a[i];
            s.unlabeled_conf[i] = b[i];
        }
        const ProbVec csda = align_csda(q, s, Temperature::constant(1.0)).q_tilde;
        const ProbVec da = align_da(q, a, b);
        for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(csda[j] - da[j]));
    }
    const double secs = seconds_since(t0);
    report(1, "DA special case", worst <= 1e-12 && secs < 1.0,
           fmt::format("max |csda - da| = {:.3g} over 1000 instances (tol 1e-12), {:.3f}s (< 1s)", worst, secs));
}

void criterion_2() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(202);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        auto g = oracle::random_grad_instance(rng, 3, 4, 3);
        for (double eta_v : {0.0, 0.5, 1.0})
            worst = std::max(worst, oracle::max_gradient_error(g.params, g.labeled, g.unlabeled, eta_v));
    }
    const double secs = seconds_since(t0);
    report(2, "Gradient oracle", worst < 1e-4 && secs < 10.0,
           fmt::format("max relative error = {:.3g} over 100 instances x eta {{0, 0.5, 1}} (tol 1e-4), {:.3f}s (< 10s)",
                       worst, secs));
}

void criterion_3() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + t % 7;
        const ProbVec q = oracle::random_prob(rng, n);
        ClassStats s = init_stats(n);
        const ClassIndex i = argmax_class(q);
        s.labeled_marginal[i] = oracle::random_prob(rng, n);
        s.unlabeled_marginal[i] = s.labeled_marginal[i];
        const ProbVec out = align_csda(q, s, Temperature::constant(1.0)).q_tilde;
        for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(out[j] - q[j]));
    }
    ClassStats s = init_stats(2);
    s.labeled_marginal[0] = ProbVec({0.5, 0.5});
    s.unlabeled_marginal[0] = ProbVec({0.8, 0.2});
    const ProbVec worked = align_csda(ProbVec({0.6, 0.4}), s, Temperature::constant(1.0)).q_tilde;
    const bool worked_ok = std::round(worked[0] * 1e4) == 2727 && std::round(worked[1] * 1e4) == 7273 &&
                           std::abs(worked[0] - 0.2727) < 1e-4 && std::abs(worked[1] - 0.7272) < 1e-4;
    report(3, "Alignment identity", worst <= 1e-12 && worked_ok,
           fmt::format("max |q~ - q| = {:.3g} over 1000 q (tol 1e-12); worked case -> [{:.6f}, {:.6f}]", worst,
                       worked[0], worked[1]));
}

void criterion_4() {
    ClassStats s = init_stats(2);
    s.labeled_conf = {0.8, 0.6};
    s.unlabeled_conf = {0.4, 0.3};
    s = update_unlabeled(s, std::vector<Observation>{{ProbVec({0.7, 0.3}), 0}});
    const bool exact = s.unlabeled_conf[1] == 0.3;

    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + t % 6;
        ClassStats st = init_stats(n);
        const double r = u(rng);
        for (std::size_t k = 0; k < n; ++k) {
            st.labeled_conf[k] = u(rng);
            st.unlabeled_conf[k] = r * st.labeled_conf[k];
        }
        const double cx_last = st.labeled_conf[n - 1];
        std::vector<double> q(n, 0.1 / static_cast<double>(n - 1));
        q[0] = 0.9;
        st = update_unlabeled(st, std::vector<Observation>{{normalize(q), 0}});
        worst = std::max(worst, std::abs(st.unlabeled_conf[n - 1] - r * cx_last));
    }
    report(4, "Zero-confidence fallback", exact && worst <= 1e-12,
           fmt::format("worked c_u[1] = {} (expected 0.3 exactly); uniform-ratio max error = {:.3g} over 1000 r (tol 1e-12)",
                       s.unlabeled_conf[1], worst));
}

void criterion_5() {
    const auto t0 = Clock::now();
    ClassStats base = init_stats(3);
    base.labeled_conf = {0.5, 0.3, 0.2};
    const auto lens = compute_lengths(base, VcqConfig{512, 1.0, 0.25});
    const bool lens_ok = lens == std::vector<std::size_t>{256, 153, 102};

    const std::size_t n = 6;
    const VcqConfig cfg{512, 1.0, 0.6};
    Vcq q(n, cfg);
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::gamma_distribution<double> conc(1.0, 1.0);
    std::size_t offers = 0, accepted = 0, violations = 0;
    for (int round = 0; round < 100; ++round) {
        ClassStats st = init_stats(n);
        for (std::size_t i = 0; i < n; ++i) {
            st.labeled_conf[i] = u(rng) + 1e-3;
            st.unlabeled_conf[i] = u(rng);
        }
        q.refresh(st);
        violations += q.total_size() > cfg.total_capacity;
        for (int k = 0; k < 1000; ++k, ++offers) {
            std::vector<double> p(n);
            for (auto& x : p) x = conc(rng) + 1e-12;
            const ProbVec label = normalize(p);
            const ClassIndex i = argmax_class(label);
            const bool ok = q.offer(QueueItem{{u(rng)}, label, static_cast<std::size_t>(round), offers});
            accepted += ok;
            if (ok && !(label.max() > q.threshold(i))) ++violations;
            if (q.occupancy(i) > q.capacity(i)) ++violations;
            if (q.total_size() > cfg.total_capacity) ++violations;
        }
    }
    const double secs = seconds_since(t0);
    report(5, "VCQ invariants", lens_ok && violations == 0 && secs < 5.0,
           fmt::format("lengths [{}, {}, {}]; {} offers, {} accepted, {} violations; {:.3f}s (< 5s)", lens[0], lens[1],
                       lens[2], offers, accepted, violations, secs));
}

double entropy(const ProbVec& p) {
    double h = 0.0;
    for (double v : p.values())
        if (v > 0) h -= v * std::log(v);
    return h;
}

void criterion_6() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> ut(1e-3, 1.0), u(0.0, 1.0);
    std::size_t argmax_breaks = 0, flatten_breaks = 0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t n = 2 + t % 9;
        std::vector<double> v(n);
        for (auto& x : v) x = u(rng) < 0.1 ? 0.0 : u(rng);
        v[t % n] += 1e-3;
        const ProbVec p = normalize(v);
        const double t1 = ut(rng), t2 = ut(rng);
        const ProbVec s1 = temp_scale(p, std::min(t1, t2)), s2 = temp_scale(p, std::max(t1, t2));
        argmax_breaks += argmax_class(s1) != argmax_class(p);
        flatten_breaks += entropy(s1) < entropy(s2) - 1e-12;
        flatten_breaks += s1.max() > s2.max() + 1e-12;
    }
    const double secs = seconds_since(t0);
    report(6, "Temperature properties", argmax_breaks == 0 && flatten_breaks == 0 && secs < 1.0,
           fmt::format("10000 (p, T) pairs: {} argmax changes, {} flattening violations; {:.3f}s (< 1s)", argmax_breaks,
                       flatten_breaks, secs));
}

void criterion_7() {
    std::mt19937_64 rng(707);
    std::uniform_int_distribution<std::size_t> size(2, 100);
    std::uniform_int_distribution<int> level(1, 5);
    std::size_t auc_mismatch = 0, mca_mismatch = 0, checked = 0;
    while (checked < 100) {
        const std::size_t n = 2 + checked % 5, k = size(rng);
        std::uniform_int_distribution<std::size_t> cls(0, n - 1);
        EvalBatch e;
        for (std::size_t r = 0; r < k; ++r) {
            if (checked % 2 == 0) {
                std::vector<double> v(n);
                for (auto& x : v) x = level(rng);
                e.scores.push_back(normalize(v));
            } else {
                e.scores.push_back(oracle::random_prob(rng, n));
            }
            e.truth.push_back(cls(rng));
        }
        bool eligible = false;
        for (std::size_t c = 0; c < n; ++c) eligible |= auc_one_vs_rest(e, c) >= 0.0;
        if (!eligible) continue;
        auc_mismatch += auc_macro(e) != oracle::brute_auc_macro(e);
        mca_mismatch += mca_from_confusion(confusion(e)) != mca(e);
        ++checked;
    }
    report(7, "Metric oracles", auc_mismatch == 0 && mca_mismatch == 0,
           fmt::format("100 instances: {} AUC mismatches vs pairwise count, {} MCA mismatches vs confusion",
                       auc_mismatch, mca_mismatch));
}

struct ModeResult {
    double mean_mca = 0.0;
    std::vector<double> entropy;
};

ModeResult run_mode(const RunConfig& base, AlignMode mode, bool supervised_only) {
    RunConfig cfg = base;
    cfg.engine.align = mode;
    cfg.engine.supervised_only = supervised_only;
    ModeResult r;
    for (auto seed : cfg.seeds) {
        const SeedOutcome o = execute_seed(cfg, seed);
        r.mean_mca += o.test.mca / static_cast<double>(cfg.seeds.size());
        r.entropy.push_back(o.final_histogram_entropy);
    }
    return r;
}

void criterion_8() {
    const auto t0 = Clock::now();
    const RunConfig bench = expand_sweep(load_config(fs::path(ALAB_SOURCE_DIR) / "configs" / "benchmark.cfg"))
                                .front()
                                .config;
    const ModeResult sup = run_mode(bench, AlignMode::None, true);
    const ModeResult none = run_mode(bench, AlignMode::None, false);
    const ModeResult da = run_mode(bench, AlignMode::Da, false);
    const ModeResult csda = run_mode(bench, AlignMode::Csda, false);
    std::size_t wins = 0;
    for (std::size_t k = 0; k < csda.entropy.size(); ++k) wins += csda.entropy[k] > none.entropy[k];
    const double secs = seconds_since(t0);
    const bool pass = csda.mean_mca >= sup.mean_mca + 0.02 && csda.mean_mca >= da.mean_mca - 0.01 && wins >= 8 &&
                      secs < 600.0;
    report(8, "Desk-scale directional experiment", pass,
           fmt::format("mean test MCA csda {:.4f}, supervised {:.4f} (need >= {:.4f}), da {:.4f} (need csda >= {:.4f}), "
                       "none {:.4f}; entropy csda > none on {}/{} seeds (need >= 8); {:.1f}s (< 600s)",
                       csda.mean_mca, sup.mean_mca, sup.mean_mca + 0.02, da.mean_mca, da.mean_mca - 0.01,
                       none.mean_mca, wins, csda.entropy.size(), secs));
}

void criterion_9() {
    RunConfig cfg = expand_sweep(load_config(fs::path(ALAB_SOURCE_DIR) / "configs" / "benchmark.cfg")).front().config;
    cfg.seeds = {1};
    const fs::path root = fs::temp_directory_path() / ("alab_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    run_jobs({{cfg, root / "a"}, {cfg, root / "b"}}, 2);
    const std::string a = read_text(root / "a" / "seed_1" / "records.csv");
    const std::string b = read_text(root / "b" / "seed_1" / "records.csv");
    fs::remove_all(root);
    report(9, "Determinism", !a.empty() && a == b,
           fmt::format("two concurrent runs of the benchmark (seed 1): records.csv {} ({} bytes)",
                       a == b ? "byte-identical" : "differ", a.size()));
}

}  // namespace

int main() {
    const std::vector<void (*)()> criteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                           criterion_6, criterion_7, criterion_8, criterion_9};
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            criteria[k]();
        } catch (const std::exception& e) {
            report(static_cast<int>(k + 1), "criterion", false, std::string("threw: ") + e.what());
        }
    }
    std::printf("%s: %d of %zu criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures, criteria.size());
    return failures ? 1 : 0;
}
