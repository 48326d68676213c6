// Experiment runner for class-specific distribution alignment self-training.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "alab/config.hpp"
#include "alab/error.hpp"
#include "alab/report.hpp"
#include "alab/runner.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Options {
    std::string target;
    bool dry_run = false;
    std::size_t jobs = 1;
    std::optional<std::uint64_t> seed_override;
};

std::vector<alab::SweepPoint> resolve_points(const Options& opt, bool as_sweep) {
    alab::ConfigFile file = alab::load_config(opt.target);
    if (!as_sweep && !file.sweeps.empty()) {
        std::cerr << "note: ignoring " << file.sweeps.size() << " sweep declaration(s); use `sweep` to fan out\n";
        file.sweeps.clear();
    }
    if (opt.seed_override) file.entries.emplace_back("seeds", std::to_string(*opt.seed_override));
    return alab::expand_sweep(file);
}

int execute(const Options& opt, bool as_sweep) {
    std::vector<alab::SweepPoint> points;
    try {
        points = resolve_points(opt, as_sweep);
    } catch (const alab::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    if (opt.dry_run) {
        for (const auto& p : points) {
            if (!p.label.empty()) std::cout << "# sweep point " << p.label << "\n";
            std::cout << alab::to_text(alab::to_entries(p.config)) << "\n";
        }
        return 0;
    }
    std::vector<alab::RunJob> jobs;
    for (const auto& p : points) {
        auto dir = alab::output_root(p.config) / p.config.name;
        if (!p.label.empty()) dir /= p.label;
        jobs.push_back({p.config, dir});
    }
    try {
        const auto results = alab::run_jobs(jobs, opt.jobs);
        for (std::size_t r = 0; r < jobs.size(); ++r) {
            const auto summary = alab::summary_json(jobs[r].config, results[r]);
            std::printf("%s  test_auc %.4f +- %.4f  test_mca %.4f +- %.4f\n", jobs[r].dir.string().c_str(),
                        summary["test_auc"]["mean"].get<double>(), summary["test_auc"]["std"].get<double>(),
                        summary["test_mca"]["mean"].get<double>(), summary["test_mca"]["std"].get<double>());
        }
    } catch (const alab::Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return e.code() == alab::Errc::ConfigError ? kConfigError : kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"align_lab: class-specific distribution alignment self-training experiments"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--dry-run", opt.dry_run, "Print the resolved configuration and exit");
    app.add_option("--jobs", opt.jobs, "Concurrent seeds/sweep points")->check(CLI::PositiveNumber);
    app.add_option("--seed-override", opt.seed_override, "Replace the configured seed list with one seed");

    auto* run = app.add_subcommand("run", "Run every seed of one configuration");
    run->add_option("config", opt.target, "Config file (or a result.json to re-run)")->required();
    auto* sweep = app.add_subcommand("sweep", "Fan out over the `sweep <key> in [...]` declarations");
    sweep->add_option("config", opt.target, "Config file")->required();
    auto* plots = app.add_subcommand("export-plots", "Write tidy plot CSVs from a run directory");
    plots->add_option("dir", opt.target, "Run directory")->required();

    for (auto* sub : {run, sweep}) {
        sub->add_flag("--dry-run", opt.dry_run, "Print the resolved configuration and exit");
        sub->add_option("--jobs", opt.jobs, "Concurrent seeds/sweep points")->check(CLI::PositiveNumber);
        sub->add_option("--seed-override", opt.seed_override, "Replace the configured seed list with one seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kConfigError;
    }

    if (*run) return execute(opt, false);
    if (*sweep) return execute(opt, true);
    try {
        for (const auto& p : alab::export_plots(opt.target)) std::cout << p.string() << "\n";
    } catch (const alab::Error& e) {
        std::cerr << "export error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
