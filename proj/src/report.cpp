#include "alab/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "alab/error.hpp"

namespace alab {

namespace fs = std::filesystem;

std::string records_csv(std::span<const EpochRecord> records) {
    std::string out =
        "epoch,eta,supervised_loss,unsupervised_loss,val_auc,val_mca,pseudo_label_histogram,frobenius_distance\n";
    for (const auto& r : records) {
        std::string hist;
        for (std::size_t i = 0; i < r.pseudo_label_histogram.size(); ++i) {
            if (i) hist += ';';
            hist += std::to_string(r.pseudo_label_histogram[i]);
        }
        out += fmt::format("{},{},{},{},{},{},{},{}\n", r.epoch, r.eta, r.supervised_loss, r.unsupervised_loss,
                           r.val_auc, r.val_mca, hist, r.frobenius_distance);
    }
    return out;
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        cells.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

template <typename T>
T parse_number(const std::string& cell, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw Error(Errc::ParseError, fmt::format("records line {}: bad value '{}'", line, cell));
    }
    return v;
}

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> lines;
    for (auto& l : split(text, '\n')) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        if (!l.empty()) lines.push_back(std::move(l));
    }
    return lines;
}

}  // namespace

std::vector<EpochRecord> parse_records_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front().rfind("epoch,", 0) != 0) throw Error(Errc::ParseError, "records.csv header missing");
    std::vector<EpochRecord> out;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto cells = split(lines[k], ',');
        if (cells.size() != 8) throw Error(Errc::RaggedRow, fmt::format("records line {}", k + 1));
        EpochRecord r;
        r.epoch = parse_number<std::size_t>(cells[0], k + 1);
        r.eta = parse_number<double>(cells[1], k + 1);
        r.supervised_loss = parse_number<double>(cells[2], k + 1);
        r.unsupervised_loss = parse_number<double>(cells[3], k + 1);
        r.val_auc = parse_number<double>(cells[4], k + 1);
        r.val_mca = parse_number<double>(cells[5], k + 1);
        for (const auto& c : split(cells[6], ';')) r.pseudo_label_histogram.push_back(parse_number<std::size_t>(c, k + 1));
        r.frobenius_distance = parse_number<double>(cells[7], k + 1);
        out.push_back(std::move(r));
    }
    return out;
}

std::string distances_csv(const TrainOutput& out) {
    std::string s = "epoch,class,distance,frobenius_total\n";
    for (std::size_t e = 0; e < out.diagnostics.size(); ++e) {
        const auto& d = out.diagnostics[e].distances_post;
        for (std::size_t i = 0; i < d.per_class.size(); ++i) {
            s += fmt::format("{},{},{},{}\n", out.records[e].epoch, i, d.per_class[i], d.frobenius);
        }
    }
    return s;
}

std::string queue_csv(const TrainOutput& out) {
    std::string s = "epoch,class,capacity,occupancy,tau\n";
    for (std::size_t e = 0; e < out.diagnostics.size(); ++e) {
        const auto& d = out.diagnostics[e];
        for (std::size_t i = 0; i < d.capacity.size(); ++i) {
            s += fmt::format("{},{},{},{},{}\n", out.records[e].epoch, i, d.capacity[i], d.occupancy[i], d.tau[i]);
        }
    }
    return s;
}

nlohmann::json to_json(const ClassStats& stats) {
    auto rows = [](const std::vector<ProbVec>& ms) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& m : ms) a.push_back(std::vector<double>(m.values().begin(), m.values().end()));
        return a;
    };
    return {{"labeled_marginal", rows(stats.labeled_marginal)},
            {"unlabeled_marginal", rows(stats.unlabeled_marginal)},
            {"labeled_conf", stats.labeled_conf},
            {"unlabeled_conf", stats.unlabeled_conf}};
}

std::string stats_jsonl(const TrainOutput& out) {
    std::string s;
    for (std::size_t e = 0; e < out.diagnostics.size(); ++e) {
        auto j = to_json(out.diagnostics[e].stats);
        j["epoch"] = out.records[e].epoch;
        j["frobenius_pre"] = out.diagnostics[e].distances_pre.frobenius;
        j["frobenius_post"] = out.diagnostics[e].distances_post.frobenius;
        s += j.dump() + "\n";
    }
    return s;
}

void write_text(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<fs::path> export_plots(const fs::path& run_dir) {
    std::vector<std::pair<std::string, fs::path>> sources;
    if (fs::exists(run_dir / "records.csv")) {
        std::string seed = "0";
        if (fs::exists(run_dir / "result.json")) {
            seed = std::to_string(nlohmann::json::parse(read_text(run_dir / "result.json")).at("seed").get<std::uint64_t>());
        }
        sources.emplace_back(seed, run_dir / "records.csv");
    } else if (fs::is_directory(run_dir)) {
        for (const auto& entry : fs::directory_iterator(run_dir)) {
            const auto name = entry.path().filename().string();
            if (entry.is_directory() && name.rfind("seed_", 0) == 0 && fs::exists(entry.path() / "records.csv")) {
                sources.emplace_back(name.substr(5), entry.path() / "records.csv");
            }
        }
        std::sort(sources.begin(), sources.end(), [](const auto& a, const auto& b) {
            return std::stoull(a.first) < std::stoull(b.first);
        });
    }
    if (sources.empty()) throw Error(Errc::MissingRecords, "no records.csv under " + run_dir.string());

    std::string auc = "seed,epoch,val_auc,val_mca\n";
    std::string frob = "seed,epoch,frobenius_distance\n";
    std::string hist = "seed,epoch,class,count\n";
    for (const auto& [seed, path] : sources) {
        for (const auto& r : parse_records_csv(read_text(path))) {
            auc += fmt::format("{},{},{},{}\n", seed, r.epoch, r.val_auc, r.val_mca);
            frob += fmt::format("{},{},{}\n", seed, r.epoch, r.frobenius_distance);
            for (std::size_t i = 0; i < r.pseudo_label_histogram.size(); ++i) {
                hist += fmt::format("{},{},{},{}\n", seed, r.epoch, i, r.pseudo_label_histogram[i]);
            }
        }
    }
    std::vector<fs::path> written{run_dir / "auc_vs_epoch.csv", run_dir / "frobenius_vs_epoch.csv",
                                  run_dir / "pseudo_histogram_vs_epoch.csv"};
    write_text(written[0], auc);
    write_text(written[1], frob);
    write_text(written[2], hist);
    return written;
}

}  // namespace alab
