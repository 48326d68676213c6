#include "alab/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "alab/error.hpp"
#include "alab/report.hpp"

namespace alab {

namespace fs = std::filesystem;

namespace {

enum DataStream : std::uint64_t { kGenerate = 10, kSplit = 11 };

}  // namespace

DatasetSplit prepare_data(const RunConfig& cfg, std::uint64_t seed) {
    const auto& d = cfg.data;
    Dataset full;
    if (d.kind == DataKind::Synthetic) {
        SynthSpec spec = d.synth;
        spec.seed = derive_seed(seed, kGenerate);
        full = gen_synthetic(spec);
    } else {
        full = load_csv(d.csv);
    }
    DatasetSplit s = split(full, d.labeled, d.val_per_class, d.test_per_class, derive_seed(seed, kSplit));
    if (d.upper_bound) s = reveal_unlabeled(std::move(s));
    return s;
}

SeedOutcome execute_seed(const RunConfig& cfg, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const DatasetSplit data = prepare_data(cfg, seed);
    EngineConfig engine = cfg.engine;
    engine.schedule.seed = seed;
    SeedOutcome out;
    out.seed = seed;
    out.train = self_train(data, engine);
    out.test = evaluate(out.train.model, data.test);
    out.final_histogram_entropy = histogram_entropy(out.train.records.back().pseudo_label_histogram);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

nlohmann::json result_json(const RunConfig& cfg, const SeedOutcome& o) {
    nlohmann::json config = nlohmann::json::array();
    for (const auto& [k, v] : to_entries(cfg)) config.push_back({k, v});
    const auto& last = o.train.records.back();
    const auto& diag = o.train.diagnostics.back();
    return {
        {"seed", o.seed},
        {"test", {{"auc", o.test.auc}, {"mca", o.test.mca}, {"confusion", o.test.confusion}}},
        {"final_val", {{"auc", last.val_auc}, {"mca", last.val_mca}}},
        {"final_pseudo_label_histogram", last.pseudo_label_histogram},
        {"final_pseudo_label_entropy", o.final_histogram_entropy},
        {"final_pseudo_label_accuracy",
         diag.accepted ? static_cast<double>(diag.accepted_correct) / static_cast<double>(diag.accepted) : 0.0},
        {"metadata",
         {{"auc_averaging", "macro one-vs-rest"},
          {"distance_marginals", "unscaled labeled vs unlabeled class marginals"},
          {"evaluation_model", "encoder2 + head"}}},
        {"wall_time_seconds", o.wall_seconds},
        {"config", config},
    };
}

void write_seed(const RunConfig& cfg, const SeedOutcome& o, const fs::path& dir) {
    fs::create_directories(dir);
    write_text(dir / "records.csv", records_csv(o.train.records));
    write_text(dir / "distances.csv", distances_csv(o.train));
    write_text(dir / "queue.csv", queue_csv(o.train));
    write_text(dir / "stats.jsonl", stats_jsonl(o.train));
    std::string trace;
    for (const auto& t : o.train.trace) trace += t + "\n";
    write_text(dir / "trace.log", trace);
    write_text(dir / "result.json", result_json(cfg, o).dump(2) + "\n");
    save_params(o.train.model, dir / "model.bin");
}

namespace {

nlohmann::json mean_std(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
    return {{"mean", mean}, {"std", sd}};
}

}  // namespace

nlohmann::json summary_json(const RunConfig& cfg, const std::vector<SeedOutcome>& outcomes) {
    std::vector<double> auc, mca_values, entropy;
    nlohmann::json per_seed = nlohmann::json::array();
    for (const auto& o : outcomes) {
        auc.push_back(o.test.auc);
        mca_values.push_back(o.test.mca);
        entropy.push_back(o.final_histogram_entropy);
        per_seed.push_back({{"seed", o.seed}, {"test_auc", o.test.auc}, {"test_mca", o.test.mca}});
    }
    return {{"name", cfg.name},
            {"align_mode", to_string(cfg.engine.align)},
            {"seeds", cfg.seeds},
            {"test_auc", mean_std(auc)},
            {"test_mca", mean_std(mca_values)},
            {"final_pseudo_label_entropy", mean_std(entropy)},
            {"per_seed", per_seed}};
}

fs::path output_root(const RunConfig& cfg) {
    if (const char* env = std::getenv("ALIGN_LAB_OUT"); env && *env) return fs::path(env);
    return cfg.output_dir;
}

std::vector<std::vector<SeedOutcome>> run_jobs(const std::vector<RunJob>& runs, std::size_t jobs) {
    struct Task {
        std::size_t run;
        std::size_t slot;
    };
    std::vector<Task> tasks;
    std::vector<std::vector<SeedOutcome>> results(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        results[r].resize(runs[r].config.seeds.size());
        for (std::size_t s = 0; s < runs[r].config.seeds.size(); ++s) tasks.push_back({r, s});
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const auto& task = tasks[t];
            const auto& job = runs[task.run];
            try {
                const std::uint64_t seed = job.config.seeds[task.slot];
                auto outcome = execute_seed(job.config, seed);
                write_seed(job.config, outcome, job.dir / fmt::format("seed_{}", seed));
                results[task.run][task.slot] = std::move(outcome);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = tasks.size();
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, tasks.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t r = 0; r < runs.size(); ++r) {
        fs::create_directories(runs[r].dir);
        write_text(runs[r].dir / "summary.json", summary_json(runs[r].config, results[r]).dump(2) + "\n");
    }
    return results;
}

}  // namespace alab
