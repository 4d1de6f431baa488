#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <nlohmann/json.hpp>

#include "mlcs/beam_search.hpp"
#include "mlcs/hyper_heuristics.hpp"
#include "mlcs/random.hpp"
#include "mlcs/strings.hpp"

namespace mlcs {

enum class Method { bs_ex, k_uncor, k_cor, gcov, ub_hh, te_hh };

inline constexpr Method all_methods[] = {Method::bs_ex, Method::k_uncor, Method::k_cor,
                                         Method::gcov,  Method::ub_hh,   Method::te_hh};

constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::bs_ex:
        return "bs-ex";
    case Method::k_uncor:
        return "k-uncor";
    case Method::k_cor:
        return "k-cor";
    case Method::gcov:
        return "gcov";
    case Method::ub_hh:
        return "ub-hh";
    case Method::te_hh:
        return "te-hh";
    }
    return "?";
}

inline std::optional<Method> parse_method(std::string_view name) noexcept {
    for (auto m : all_methods) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

constexpr std::optional<HeuristicKind> base_heuristic(Method m) noexcept {
    switch (m) {
    case Method::bs_ex:
        return HeuristicKind::bs_ex;
    case Method::k_uncor:
        return HeuristicKind::k_analytic_uncor;
    case Method::k_cor:
        return HeuristicKind::k_analytic_cor;
    case Method::gcov:
        return HeuristicKind::gcov;
    default:
        return std::nullopt;
    }
}

enum class Scenario { low_time, balanced_time_quality, high_quality };

constexpr std::size_t scenario_beta(Scenario s) noexcept {
    switch (s) {
    case Scenario::low_time:
        return 50;
    case Scenario::balanced_time_quality:
        return 200;
    case Scenario::high_quality:
        return 600;
    }
    return 200;
}

constexpr std::string_view to_string(Scenario s) noexcept {
    switch (s) {
    case Scenario::low_time:
        return "low-time";
    case Scenario::balanced_time_quality:
        return "balanced-time-quality";
    case Scenario::high_quality:
        return "high-quality";
    }
    return "?";
}

inline std::optional<Scenario> parse_scenario(std::string_view name) noexcept {
    for (auto s : {Scenario::low_time, Scenario::balanced_time_quality, Scenario::high_quality}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

struct RunRecord {
    std::string instance;
    std::size_t m = 0;
    std::size_t l = 0;
    std::size_t n = 0;
    std::string heuristic;
    std::size_t beta = 0;
    std::uint64_t seed = 0;
    std::size_t lcs_len = 0;
    double time_ms = 0.0;
    /// Empty for base heuristics; "label:ubs:chosen" for ub-hh, "trial:length:chosen" for te-hh.
    std::string dispatch;
    /// Time spent choosing the heuristic (ub-hh) or piloting (te-hh). Not serialised.
    double select_ms = 0.0;

    friend bool operator==(const RunRecord& a, const RunRecord& b) noexcept {
        return a.instance == b.instance && a.m == b.m && a.l == b.l && a.n == b.n && a.heuristic == b.heuristic &&
               a.beta == b.beta && a.seed == b.seed && a.lcs_len == b.lcs_len && a.time_ms == b.time_ms &&
               a.dispatch == b.dispatch;
    }
};

struct BenchInstance {
    std::string id;
    /// Used directly when present; otherwise the instance is read from path.
    std::optional<StringSet> set;
    std::string path;
    /// Detected from the file contents when unset.
    std::optional<InstanceFormat> format;
};

struct BenchSettings {
    std::size_t beta = scenario_beta(Scenario::balanced_time_quality);
    std::uint64_t seed = 0;
    unsigned workers = 1;
    HeuristicParams params;
    UbHhConfig ub_hh;
    TeHhConfig te_hh;
};

struct BenchFailure {
    std::string instance;
    std::string message;
};

struct BenchResult {
    std::vector<RunRecord> records;
    std::vector<BenchFailure> failures;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline StringSet load_instance(const std::string& path, std::optional<InstanceFormat> format = std::nullopt) {
    const auto text = read_file(path);
    return parse_instance(text, format ? *format : detect_format(text));
}

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string describe(const Dispatch& d) {
    return std::string(to_string(d.label.type)) + ':' + (d.ubs ? format_fixed(*d.ubs, 6) : std::string{}) + ':' +
           std::string(to_string(d.chosen));
}

/// Runs one method on one instance.
inline RunRecord run_one(const StringSet& s, const std::string& id, Method method, const BenchSettings& cfg,
                         std::uint64_t seed, unsigned workers = 1) {
    RunRecord rec;
    rec.instance = id;
    rec.m = s.alphabet_size();
    rec.l = s.max_length();
    rec.n = s.size();
    rec.heuristic = std::string(to_string(method));
    rec.beta = cfg.beta;
    rec.seed = seed;

    const auto start = std::chrono::steady_clock::now();
    if (auto kind = base_heuristic(method)) {
        rec.lcs_len = beam_search(s, *kind, cfg.beta, cfg.params, workers).length();
    } else if (method == Method::ub_hh) {
        const auto res = ub_hh_solve(s, cfg.beta, cfg.ub_hh, cfg.params, seed, workers);
        rec.lcs_len = res.solution.length();
        rec.dispatch = describe(res.dispatch);
        rec.select_ms = std::chrono::duration<double, std::milli>(res.dispatch.decide_time).count();
    } else {
        const auto res = te_hh_solve(s, cfg.beta, cfg.te_hh, cfg.params, workers);
        rec.lcs_len = res.solution.length();
        const auto best = *std::max_element(res.trial_lengths.begin(), res.trial_lengths.end());
        rec.dispatch = "trial:" + std::to_string(best) + ':' + std::string(to_string(res.chosen));
        rec.select_ms = std::chrono::duration<double, std::milli>(res.trial_time).count();
    }
    rec.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

/// One record per (instance, method), ordered by instance then method whatever
/// the worker count. Instance i uses the seed derived from (seed, i).
/// Unreadable instances are reported in failures and skipped.
inline BenchResult run_bench(const std::vector<BenchInstance>& instances, const std::vector<Method>& methods,
                             const BenchSettings& cfg) {
    if (methods.empty()) throw std::invalid_argument("at least one method is required");
    std::vector<std::vector<RunRecord>> rows(instances.size());
    std::vector<std::optional<std::string>> errors(instances.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
            const auto& inst = instances[i];
            try {
                std::optional<StringSet> loaded;
                if (!inst.set) loaded.emplace(load_instance(inst.path, inst.format));
                const StringSet& s = inst.set ? *inst.set : *loaded;
                const auto seed = derive_seed(cfg.seed, i);
                for (auto m : methods) rows[i].push_back(run_one(s, inst.id, m, cfg, seed));
            } catch (const std::exception& e) {
                rows[i].clear();
                errors[i] = e.what();
            }
        }
    };
    {
        const auto count = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(instances.size())));
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < count; ++w) pool.emplace_back(worker);
        worker();
    }

    BenchResult result;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (errors[i]) result.failures.push_back({instances[i].id, *errors[i]});
        for (auto& r : rows[i]) result.records.push_back(std::move(r));
    }
    return result;
}

/// Mean LCS length per method, in order of first appearance.
inline std::vector<std::pair<std::string, double>> group_averages(const std::vector<RunRecord>& records) {
    std::vector<std::pair<std::string, double>> out;
    std::vector<std::size_t> counts;
    for (const auto& r : records) {
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == r.heuristic; });
        if (it == out.end()) {
            out.emplace_back(r.heuristic, 0.0);
            counts.push_back(0);
            it = out.end() - 1;
        }
        it->second += static_cast<double>(r.lcs_len);
        ++counts[static_cast<std::size_t>(it - out.begin())];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].second /= static_cast<double>(counts[i]);
    return out;
}

struct FriedmanResult {
    std::vector<double> mean_ranks;
    double statistic = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;

    bool significant(double alpha = 0.05) const noexcept { return p_value < alpha; }
};

/// Friedman rank test over an instances x methods matrix of LCS lengths.
/// Within each row the longest result gets rank 1; ties share the average rank.
inline FriedmanResult friedman_ranks(const std::vector<std::vector<double>>& results) {
    if (results.size() < 2) throw std::invalid_argument("Friedman test needs at least two instances");
    const auto k = results.front().size();
    if (k < 2) throw std::invalid_argument("Friedman test needs at least two methods");
    for (const auto& row : results) {
        if (row.size() != k) throw std::invalid_argument("result matrix has missing cells");
        for (double v : row) {
            if (std::isnan(v)) throw std::invalid_argument("result matrix has missing cells");
        }
    }

    std::vector<double> rank_sum(k, 0.0);
    std::vector<std::size_t> order(k);
    for (const auto& row : results) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
        for (std::size_t start = 0; start < k;) {
            std::size_t end = start + 1;
            while (end < k && row[order[end]] == row[order[start]]) ++end;
            const double shared = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
            for (std::size_t t = start; t < end; ++t) rank_sum[order[t]] += shared;
            start = end;
        }
    }

    FriedmanResult out;
    const double rows = static_cast<double>(results.size());
    const double kk = static_cast<double>(k);
    double squares = 0.0;
    for (double sum : rank_sum) {
        const double mean = sum / rows;
        out.mean_ranks.push_back(mean);
        squares += mean * mean;
    }
    out.statistic = 12.0 * rows / (kk * (kk + 1.0)) * (squares - kk * (kk + 1.0) * (kk + 1.0) / 4.0);
    if (out.statistic < 0.0 && out.statistic > -1e-9) out.statistic = 0.0;
    out.df = k - 1;
    const boost::math::chi_squared dist(static_cast<double>(out.df));
    out.p_value = boost::math::cdf(boost::math::complement(dist, std::max(0.0, out.statistic)));
    return out;
}

struct ResultMatrix {
    std::vector<std::string> instances;
    std::vector<std::string> methods;
    std::vector<std::vector<double>> lengths;
};

/// Pivots records into instances x methods, in order of first appearance.
inline ResultMatrix pivot_lengths(const std::vector<RunRecord>& records) {
    ResultMatrix out;
    auto index_of = [](std::vector<std::string>& names, const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
        names.push_back(name);
        return names.size() - 1;
    };
    for (const auto& r : records) {
        index_of(out.instances, r.instance);
        index_of(out.methods, r.heuristic);
    }
    out.lengths.assign(out.instances.size(), std::vector<double>(out.methods.size(), std::nan("")));
    for (const auto& r : records) {
        out.lengths[index_of(out.instances, r.instance)][index_of(out.methods, r.heuristic)] =
            static_cast<double>(r.lcs_len);
    }
    return out;
}

enum class ReportFormat { csv, json };

inline constexpr std::string_view csv_header = "instance,m,l,n,heuristic,beta,seed,lcs_len,time_ms,dispatch";

namespace detail {

inline std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::vector<std::string> csv_split(std::string_view line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

inline std::uint64_t to_u64(const std::string& s) {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
    return v;
}

}  // namespace detail

/// CSV: fixed column order, LF line ends, time_ms with three decimals.
/// JSON: array of objects with the same keys in the same order.
inline std::string report(const std::vector<RunRecord>& records, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::string out(csv_header);
        out += '\n';
        for (const auto& r : records) {
            out += detail::csv_field(r.instance) + ',' + std::to_string(r.m) + ',' + std::to_string(r.l) + ',' +
                   std::to_string(r.n) + ',' + detail::csv_field(r.heuristic) + ',' + std::to_string(r.beta) + ',' +
                   std::to_string(r.seed) + ',' + std::to_string(r.lcs_len) + ',' + format_fixed(r.time_ms, 3) + ',' +
                   detail::csv_field(r.dispatch) + '\n';
        }
        return out;
    }
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json o;
        o["instance"] = r.instance;
        o["m"] = r.m;
        o["l"] = r.l;
        o["n"] = r.n;
        o["heuristic"] = r.heuristic;
        o["beta"] = r.beta;
        o["seed"] = r.seed;
        o["lcs_len"] = r.lcs_len;
        o["time_ms"] = r.time_ms;
        o["dispatch"] = r.dispatch;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + '\n';
}

inline std::vector<RunRecord> parse_report(std::string_view text, ReportFormat format) {
    std::vector<RunRecord> out;
    if (format == ReportFormat::json) {
        const auto arr = nlohmann::json::parse(text);
        for (const auto& o : arr) {
            RunRecord r;
            r.instance = o.at("instance").get<std::string>();
            r.m = o.at("m").get<std::size_t>();
            r.l = o.at("l").get<std::size_t>();
            r.n = o.at("n").get<std::size_t>();
            r.heuristic = o.at("heuristic").get<std::string>();
            r.beta = o.at("beta").get<std::size_t>();
            r.seed = o.at("seed").get<std::uint64_t>();
            r.lcs_len = o.at("lcs_len").get<std::size_t>();
            r.time_ms = o.at("time_ms").get<double>();
            r.dispatch = o.at("dispatch").get<std::string>();
            out.push_back(std::move(r));
        }
        return out;
    }
    const auto lines = detail::split_lines(text);
    bool header_seen = false;
    for (auto line : lines) {
        if (detail::trim(line).empty()) continue;
        if (!header_seen) {
            if (line != csv_header) throw ParseError("unexpected CSV header");
            header_seen = true;
            continue;
        }
        const auto f = detail::csv_split(line);
        if (f.size() != 10) throw ParseError("CSV row does not have 10 fields");
        RunRecord r;
        r.instance = f[0];
        r.m = detail::to_u64(f[1]);
        r.l = detail::to_u64(f[2]);
        r.n = detail::to_u64(f[3]);
        r.heuristic = f[4];
        r.beta = detail::to_u64(f[5]);
        r.seed = detail::to_u64(f[6]);
        r.lcs_len = detail::to_u64(f[7]);
        r.time_ms = std::stod(f[8]);
        r.dispatch = f[9];
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mlcs
