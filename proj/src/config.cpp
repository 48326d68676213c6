#include "alab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "alab/error.hpp"
#include "json.hpp"

namespace alab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw Error(Errc::ConfigError,
                fmt::format("{}: expected {}, got '{}'", key, expected, value));
}

std::vector<std::string_view> split_list(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = trim(s.substr(1, s.size() - 2));
    std::vector<std::string_view> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(',', start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v, "a number");
    return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
    v = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a nonnegative integer");
    return out;
}

std::size_t parse_size(std::string_view key, std::string_view v) { return static_cast<std::size_t>(parse_u64(key, v)); }

bool parse_bool(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "true or false");
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& f) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) out += ", ";
        out += f(xs[k]);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"name", [](RunConfig& c, auto, auto v) { c.name = std::string(trim(v)); }},
        {"seeds",
         [](RunConfig& c, auto k, auto v) {
             c.seeds.clear();
             for (auto item : split_list(v)) c.seeds.push_back(parse_u64(k, item));
         }},
        {"output.dir", [](RunConfig& c, auto, auto v) { c.output_dir = std::string(trim(v)); }},
        {"data.source",
         [](RunConfig& c, auto k, auto v) {
             v = trim(v);
             if (v == "synthetic") c.data.kind = DataKind::Synthetic;
             else if (v == "csv") c.data.kind = DataKind::Csv;
             else bad_value(k, v, "synthetic or csv");
         }},
        {"data.csv", [](RunConfig& c, auto, auto v) { c.data.csv = std::string(trim(v)); }},
        {"data.classes", [](RunConfig& c, auto k, auto v) { c.data.synth.n = parse_size(k, v); }},
        {"data.dim", [](RunConfig& c, auto k, auto v) { c.data.synth.d = parse_size(k, v); }},
        {"data.priors",
         [](RunConfig& c, auto k, auto v) {
             c.data.synth.priors.clear();
             for (auto item : split_list(v)) c.data.synth.priors.push_back(parse_double(k, item));
         }},
        {"data.total", [](RunConfig& c, auto k, auto v) { c.data.synth.total = parse_size(k, v); }},
        {"data.mean_scale", [](RunConfig& c, auto k, auto v) { c.data.synth.mean_scale = parse_double(k, v); }},
        {"data.sigma", [](RunConfig& c, auto k, auto v) { c.data.synth.sigma = parse_double(k, v); }},
        {"data.labeled", [](RunConfig& c, auto k, auto v) { c.data.labeled = parse_size(k, v); }},
        {"data.val_per_class", [](RunConfig& c, auto k, auto v) { c.data.val_per_class = parse_size(k, v); }},
        {"data.test_per_class", [](RunConfig& c, auto k, auto v) { c.data.test_per_class = parse_size(k, v); }},
        {"data.upper_bound", [](RunConfig& c, auto k, auto v) { c.data.upper_bound = parse_bool(k, v); }},
        {"train.epochs", [](RunConfig& c, auto k, auto v) { c.engine.schedule.epochs = parse_size(k, v); }},
        {"train.labeled_batch", [](RunConfig& c, auto k, auto v) { c.engine.schedule.labeled_batch = parse_size(k, v); }},
        {"train.unlabeled_batch",
         [](RunConfig& c, auto k, auto v) { c.engine.schedule.unlabeled_batch = parse_size(k, v); }},
        {"train.base_lr", [](RunConfig& c, auto k, auto v) { c.engine.schedule.base_lr = parse_double(k, v); }},
        {"train.decay_epochs",
         [](RunConfig& c, auto k, auto v) {
             c.engine.schedule.decay_epochs.clear();
             for (auto item : split_list(v)) c.engine.schedule.decay_epochs.push_back(parse_size(k, item));
         }},
        {"train.jitter", [](RunConfig& c, auto k, auto v) { c.engine.jitter_sigma = parse_double(k, v); }},
        {"train.supervised_only", [](RunConfig& c, auto k, auto v) { c.engine.supervised_only = parse_bool(k, v); }},
        {"model.hidden", [](RunConfig& c, auto k, auto v) { c.engine.hidden = parse_size(k, v); }},
        {"omega", [](RunConfig& c, auto k, auto v) { c.engine.omega = parse_double(k, v); }},
        {"vcq.L", [](RunConfig& c, auto k, auto v) { c.engine.vcq.total_capacity = parse_size(k, v); }},
        {"vcq.gamma", [](RunConfig& c, auto k, auto v) { c.engine.vcq.gamma = parse_double(k, v); }},
        {"vcq.delta", [](RunConfig& c, auto k, auto v) { c.engine.vcq.delta = parse_double(k, v); }},
        {"align.mode", [](RunConfig& c, auto, auto v) { c.engine.align = parse_align_mode(trim(v)); }},
        {"align.temperature",
         [](RunConfig& c, auto k, auto v) {
             v = trim(v);
             if (v == "adaptive") {
                 c.constant_temperature.reset();
                 return;
             }
             const double t = parse_double(k, v);
             if (!(t > 0.0 && t <= 1.0)) bad_value(k, v, "adaptive or a constant in (0, 1]");
             c.constant_temperature = t;
         }},
        {"align.t_min",
         [](RunConfig& c, auto k, auto v) {
             const double t = parse_double(k, v);
             if (!(t > 0.0 && t < 1.0)) bad_value(k, v, "a value in (0, 1)");
             c.t_min = t;
         }},
        {"align.eps", [](RunConfig& c, auto k, auto v) { c.engine.eps = parse_double(k, v); }},
    };
    return table;
}

void check(const RunConfig& c) {
    if (c.seeds.empty()) throw Error(Errc::ConfigError, "seeds must list at least one seed");
    if (c.name.empty() || c.name.find('/') != std::string::npos) throw Error(Errc::ConfigError, "name must be a plain word");
    if (c.data.kind == DataKind::Csv && c.data.csv.empty()) throw Error(Errc::ConfigError, "data.csv is required for csv data");
    if (c.data.kind == DataKind::Synthetic && !c.data.csv.empty()) {
        throw Error(Errc::ConfigError, "data.csv given but data.source is synthetic; choose one data source");
    }
    if (c.data.kind == DataKind::Synthetic && c.data.synth.priors.size() != c.data.synth.n) {
        throw Error(Errc::ConfigError, "data.priors must list one prior per class");
    }
    try {
        validate(c.engine, c.data.kind == DataKind::Synthetic ? c.data.synth.n : 2);
    } catch (const Error& e) {
        throw Error(Errc::ConfigError, e.what());
    }
}

}  // namespace

std::string canonical_key(std::string_view key) {
    key = trim(key);
    if (key == "delta") return "vcq.delta";
    if (key == "L") return "vcq.L";
    if (key == "gamma") return "vcq.gamma";
    if (key == "temperature") return "align.temperature";
    if (key == "mode" || key == "alignment") return "align.mode";
    if (key == "omega") return "omega";
    return std::string(key);
}

ConfigFile parse_config_text(std::string_view text) {
    ConfigFile out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("sweep ", 0) == 0) {
            const auto rest = trim(line.substr(6));
            const auto in = rest.find(" in ");
            if (in == std::string_view::npos) {
                throw Error(Errc::ConfigError, fmt::format("line {}: expected 'sweep <key> in [v1, v2, ...]'", line_no));
            }
            SweepAxis axis{canonical_key(rest.substr(0, in)), {}};
            for (auto v : split_list(rest.substr(in + 4))) axis.values.emplace_back(v);
            if (axis.values.empty()) throw Error(Errc::ConfigError, fmt::format("line {}: empty sweep list", line_no));
            out.sweeps.push_back(std::move(axis));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Errc::ConfigError, fmt::format("line {}: expected 'key = value'", line_no));
        }
        out.entries.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (path.extension() == ".json") {
        ConfigFile out;
        try {
            const auto doc = nlohmann::json::parse(buffer.str());
            for (const auto& item : doc.at("config")) {
                out.entries.emplace_back(item.at(0).get<std::string>(), item.at(1).get<std::string>());
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ConfigError, std::string("result.json config echo unreadable: ") + e.what());
        }
        return out;
    }
    return parse_config_text(buffer.str());
}

RunConfig resolve(const std::vector<std::pair<std::string, std::string>>& entries) {
    RunConfig cfg;
    const auto& table = setters();
    for (const auto& [key, value] : entries) {
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
        if (it == table.end()) throw Error(Errc::ConfigError, "unknown key '" + key + "'");
        it->second(cfg, key, value);
    }
    cfg.engine.temperature = cfg.constant_temperature ? Temperature::constant(*cfg.constant_temperature)
                                                      : Temperature::adaptive(cfg.t_min);
    check(cfg);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> to_entries(const RunConfig& c) {
    const auto& s = c.engine.schedule;
    const auto& synth = c.data.synth;
    std::vector<std::pair<std::string, std::string>> out = {
        {"name", c.name},
        {"seeds", join(c.seeds, [](std::uint64_t v) { return std::to_string(v); })},
        {"output.dir", c.output_dir.string()},
        {"data.source", c.data.kind == DataKind::Csv ? "csv" : "synthetic"},
    };
    if (c.data.kind == DataKind::Csv) out.emplace_back("data.csv", c.data.csv.string());
    const std::vector<std::pair<std::string, std::string>> rest = {
        {"data.classes", std::to_string(synth.n)},
        {"data.dim", std::to_string(synth.d)},
        {"data.priors", join(synth.priors, fmt_double)},
        {"data.total", std::to_string(synth.total)},
        {"data.mean_scale", fmt_double(synth.mean_scale)},
        {"data.sigma", fmt_double(synth.sigma)},
        {"data.labeled", std::to_string(c.data.labeled)},
        {"data.val_per_class", std::to_string(c.data.val_per_class)},
        {"data.test_per_class", std::to_string(c.data.test_per_class)},
        {"data.upper_bound", c.data.upper_bound ? "true" : "false"},
        {"train.epochs", std::to_string(s.epochs)},
        {"train.labeled_batch", std::to_string(s.labeled_batch)},
        {"train.unlabeled_batch", std::to_string(s.unlabeled_batch)},
        {"train.base_lr", fmt_double(s.base_lr)},
        {"train.decay_epochs", join(s.decay_epochs, [](std::size_t v) { return std::to_string(v); })},
        {"train.jitter", fmt_double(c.engine.jitter_sigma)},
        {"train.supervised_only", c.engine.supervised_only ? "true" : "false"},
        {"model.hidden", std::to_string(c.engine.hidden)},
        {"omega", fmt_double(c.engine.omega)},
        {"vcq.L", std::to_string(c.engine.vcq.total_capacity)},
        {"vcq.gamma", fmt_double(c.engine.vcq.gamma)},
        {"vcq.delta", fmt_double(c.engine.vcq.delta)},
        {"align.mode", std::string(to_string(c.engine.align))},
        {"align.temperature", c.constant_temperature ? fmt_double(*c.constant_temperature) : std::string("adaptive")},
        {"align.t_min", fmt_double(c.t_min)},
        {"align.eps", fmt_double(c.engine.eps)},
    };
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

std::string to_text(const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    return out;
}

std::vector<SweepPoint> expand_sweep(const ConfigFile& file) {
    std::vector<SweepPoint> points{{"", resolve(file.entries)}};
    std::vector<std::vector<std::pair<std::string, std::string>>> overrides{{}};
    for (const auto& axis : file.sweeps) {
        std::vector<std::vector<std::pair<std::string, std::string>>> next;
        for (const auto& base : overrides) {
            for (const auto& value : axis.values) {
                auto o = base;
                o.emplace_back(axis.key, value);
                next.push_back(std::move(o));
            }
        }
        overrides = std::move(next);
    }
    if (file.sweeps.empty()) return points;
    points.clear();
    for (const auto& o : overrides) {
        auto entries = file.entries;
        std::string label;
        for (const auto& [k, v] : o) {
            entries.emplace_back(k, v);
            if (!label.empty()) label += "_";
            label += k + "=" + v;
        }
        points.push_back({label, resolve(entries)});
    }
    return points;
}

}  // namespace alab
