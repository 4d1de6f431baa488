// Command-line front end: solve, classify, generate, bench, stats.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mlcs/mlcs.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

unsigned default_workers() {
    if (const char* env = std::getenv("MLCS_WORKERS")) {
        try {
            const auto v = std::stoul(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

struct Common {
    std::string input_format = "auto";
    std::uint64_t seed = 0;
    unsigned workers = default_workers();
    std::string out;
};

struct Tuning {
    std::size_t beta = 200;
    std::optional<std::string> scenario;
    std::size_t beta_h = 50;
    std::optional<std::size_t> ei;
    double tr = 5.0;
    std::optional<std::size_t> iterations;
    double theta1 = 0.54;
    double theta2 = 0.9;

    std::size_t width() const {
        if (!scenario) return beta;
        const auto s = mlcs::parse_scenario(*scenario);
        if (!s) throw std::invalid_argument("unknown scenario " + *scenario);
        return mlcs::scenario_beta(*s);
    }

    mlcs::S2dConfig classifier(std::uint64_t seed) const {
        mlcs::S2dConfig c;
        c.ei = ei;
        c.tr = tr;
        c.iterations = iterations;
        c.seed = seed;
        return c;
    }

    mlcs::BenchSettings settings(const Common& common) const {
        mlcs::BenchSettings s;
        s.beta = width();
        s.seed = common.seed;
        s.workers = common.workers;
        s.ub_hh.theta1 = theta1;
        s.ub_hh.theta2 = theta2;
        s.ub_hh.classifier = classifier(common.seed);
        s.te_hh.trial_beta = beta_h;
        return s;
    }
};

std::optional<mlcs::InstanceFormat> input_format(const std::string& name) {
    if (name == "header") return mlcs::InstanceFormat::header;
    if (name == "raw") return mlcs::InstanceFormat::raw;
    return std::nullopt;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
    cmd->add_option("--input-format", c.input_format, "Instance format")
        ->check(CLI::IsMember({"auto", "header", "raw"}))
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd->add_option("--workers", c.workers, "Worker threads (default from MLCS_WORKERS)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (with_out) cmd->add_option("--out", c.out, "Output file (default stdout)");
}

void add_classifier(CLI::App* cmd, Tuning& t) {
    cmd->add_option("--ei", t.ei, "Window length (default 10 for binary alphabets, else 20)");
    cmd->add_option("--tr", t.tr, "Similarity threshold")->capture_default_str();
    cmd->add_option("--iterations", t.iterations, "Classifier iterations (default max(ceil(n/2), 5))");
}

void add_search(CLI::App* cmd, Tuning& t) {
    cmd->add_option("--beta", t.beta, "Beam width")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--scenario", t.scenario, "low-time | balanced-time-quality | high-quality (overrides --beta)");
    cmd->add_option("--beta-h", t.beta_h, "Trial beam width for te-hh")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--theta1", t.theta1, "Lower ub-hh threshold")->capture_default_str();
    cmd->add_option("--theta2", t.theta2, "Upper ub-hh threshold")->capture_default_str();
    add_classifier(cmd, t);
}

ordered_json stats_json(const mlcs::SearchStats& s) {
    return {{"nodes_expanded", s.nodes_expanded}, {"children_generated", s.children_generated}, {"levels", s.levels}};
}

int run_solve(const std::string& path, const std::string& heuristic, const Tuning& t, const Common& c) {
    const auto method = mlcs::parse_method(heuristic);
    if (!method) throw std::invalid_argument("unknown heuristic " + heuristic);
    const auto s = mlcs::load_instance(path, input_format(c.input_format));
    const auto cfg = t.settings(c);

    ordered_json out;
    out["instance"] = path;
    out["n"] = s.size();
    out["m"] = s.alphabet_size();
    out["l"] = s.max_length();
    out["heuristic"] = heuristic;
    out["beta"] = cfg.beta;
    out["seed"] = c.seed;

    mlcs::Solution sol;
    double select_ms = 0.0;
    ordered_json dispatch = nullptr;
    if (auto kind = mlcs::base_heuristic(*method)) {
        sol = mlcs::beam_search(s, *kind, cfg.beta, cfg.params, c.workers);
    } else if (*method == mlcs::Method::ub_hh) {
        const auto r = mlcs::ub_hh_solve(s, cfg.beta, cfg.ub_hh, cfg.params, c.seed, c.workers);
        sol = r.solution;
        select_ms = std::chrono::duration<double, std::milli>(r.dispatch.decide_time).count();
        dispatch = {{"label", mlcs::to_string(r.dispatch.label.type)},
                    {"sim_s", r.dispatch.label.sim_s},
                    {"ubs", r.dispatch.ubs ? ordered_json(*r.dispatch.ubs) : ordered_json(nullptr)},
                    {"chosen", mlcs::to_string(r.dispatch.chosen)}};
    } else {
        const auto r = mlcs::te_hh_solve(s, cfg.beta, cfg.te_hh, cfg.params, c.workers);
        sol = r.solution;
        select_ms = std::chrono::duration<double, std::milli>(r.trial_time).count();
        ordered_json trials = ordered_json::object();
        for (std::size_t i = 0; i < r.trial_lengths.size(); ++i) {
            trials[std::string(mlcs::to_string(cfg.te_hh.portfolio[i]))] = r.trial_lengths[i];
        }
        dispatch = {{"trial_beta", cfg.te_hh.trial_beta}, {"trials", trials}, {"chosen", mlcs::to_string(r.chosen)}};
    }
    if (!mlcs::is_common_subsequence(sol.sequence, s)) throw std::logic_error("solution is not a common subsequence");

    out["lcs_len"] = sol.length();
    out["lcs"] = s.alphabet().decode(sol.sequence);
    out["dispatch"] = dispatch;
    out["stats"] = stats_json(sol.stats);
    out["select_wall_time_ms"] = select_ms;
    out["wall_time_ms"] = sol.stats.wall_ms;
    emit(out.dump(2) + '\n', c.out);
    return 0;
}

int run_classify(const std::string& path, const Tuning& t, const Common& c) {
    const auto s = mlcs::load_instance(path, input_format(c.input_format));
    const auto cfg = t.classifier(c.seed);
    const auto start = std::chrono::steady_clock::now();
    const auto label = mlcs::s2d_classify(s, cfg);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    ordered_json out;
    out["instance"] = path;
    out["n"] = s.size();
    out["m"] = s.alphabet_size();
    out["label"] = mlcs::to_string(label.type);
    out["sim_s"] = label.sim_s;
    out["ei"] = cfg.ei_for(s);
    out["tr"] = cfg.tr;
    out["iterations"] = cfg.iterations_for(s);
    out["seed"] = c.seed;
    out["ubs"] = s.min_length() > 0 ? ordered_json(mlcs::ubs(s)) : ordered_json(nullptr);
    out["wall_time_ms"] = ms;
    emit(out.dump(2) + '\n', c.out);
    return 0;
}

struct GenOptions {
    mlcs::GenConfig cfg;
    std::size_t count = 1;
    std::string format = "header";
    std::string prefix = "set";
};

int run_generate(const GenOptions& g, const Common& c) {
    const auto format = g.format == "raw" ? mlcs::InstanceFormat::raw : mlcs::InstanceFormat::header;
    if (g.count == 1) {
        auto cfg = g.cfg;
        cfg.seed = c.seed;
        emit(mlcs::write_instance(mlcs::generate_set(cfg), format), c.out);
        return 0;
    }
    if (c.out.empty()) throw std::invalid_argument("--out must name a directory when --count > 1");
    fs::create_directories(c.out);
    for (std::size_t i = 0; i < g.count; ++i) {
        auto cfg = g.cfg;
        cfg.seed = mlcs::derive_seed(c.seed, i);
        char name[64];
        std::snprintf(name, sizeof name, "%s_%04zu.txt", g.prefix.c_str(), i);
        emit(mlcs::write_instance(mlcs::generate_set(cfg), format), (fs::path(c.out) / name).string());
    }
    return 0;
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<std::string> out;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<std::string> files;
            for (const auto& e : fs::directory_iterator(in)) {
                if (e.is_regular_file()) files.push_back(e.path().string());
            }
            std::sort(files.begin(), files.end());
            out.insert(out.end(), files.begin(), files.end());
        } else {
            out.push_back(in);
        }
    }
    return out;
}

std::vector<mlcs::Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<mlcs::Method> out;
    for (const auto& n : names) {
        const auto m = mlcs::parse_method(n);
        if (!m) throw std::invalid_argument("unknown heuristic " + n);
        out.push_back(*m);
    }
    return out;
}

int run_bench_cmd(const std::vector<std::string>& inputs, const std::vector<std::string>& heuristics,
                  const std::string& format, const Tuning& t, const Common& c) {
    std::vector<mlcs::BenchInstance> instances;
    for (const auto& path : expand_inputs(inputs)) {
        mlcs::BenchInstance inst{fs::path(path).filename().string(), std::nullopt, path,
                                 input_format(c.input_format)};
        instances.push_back(std::move(inst));
    }
    const auto methods = parse_methods(heuristics);
    const auto result = mlcs::run_bench(instances, methods, t.settings(c));
    const auto fmt = format == "json" ? mlcs::ReportFormat::json : mlcs::ReportFormat::csv;
    emit(mlcs::report(result.records, fmt), c.out);

    for (const auto& f : result.failures) std::cerr << "failed: " << f.instance << ": " << f.message << '\n';
    double ub_select = 0.0;
    double te_trial = 0.0;
    for (const auto& r : result.records) {
        if (r.heuristic == "ub-hh") ub_select += r.select_ms;
        if (r.heuristic == "te-hh") te_trial += r.select_ms;
    }
    for (const auto& [name, avg] : mlcs::group_averages(result.records)) {
        std::cerr << "average " << name << ' ' << mlcs::format_fixed(avg, 2) << '\n';
    }
    if (ub_select > 0.0) std::cerr << "ub-hh selection ms " << mlcs::format_fixed(ub_select, 3) << '\n';
    if (te_trial > 0.0) std::cerr << "te-hh trial ms " << mlcs::format_fixed(te_trial, 3) << '\n';
    return result.failures.empty() ? 0 : 3;
}

int run_stats(const std::string& path, const std::string& format, const Common& c) {
    const auto text = mlcs::read_file(path);
    const auto fmt = format == "json" || (format == "auto" && !text.empty() && text.front() == '[')
                         ? mlcs::ReportFormat::json
                         : mlcs::ReportFormat::csv;
    const auto records = mlcs::parse_report(text, fmt);
    const auto matrix = mlcs::pivot_lengths(records);

    ordered_json out;
    ordered_json averages = ordered_json::object();
    for (const auto& [name, avg] : mlcs::group_averages(records)) averages[name] = avg;
    out["instances"] = matrix.instances.size();
    out["averages"] = averages;
    const auto f = mlcs::friedman_ranks(matrix.lengths);
    ordered_json ranks = ordered_json::object();
    for (std::size_t j = 0; j < matrix.methods.size(); ++j) ranks[matrix.methods[j]] = f.mean_ranks[j];
    out["mean_ranks"] = ranks;
    out["statistic"] = f.statistic;
    out["df"] = f.df;
    out["p_value"] = f.p_value;
    out["significant"] = f.significant();
    emit(out.dump(2) + '\n', c.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple longest common subsequence solver with heuristic selection"};
    app.require_subcommand(1);

    Common common;
    Tuning tuning;

    std::string input;
    std::string heuristic = "ub-hh";
    auto* solve = app.add_subcommand("solve", "Solve one instance and print JSON");
    solve->add_option("input", input, "Instance file")->required()->check(CLI::ExistingFile);
    solve->add_option("--heuristic", heuristic, "bs-ex | k-uncor | k-cor | gcov | ub-hh | te-hh")
        ->check(CLI::IsMember({"bs-ex", "k-uncor", "k-cor", "gcov", "ub-hh", "te-hh"}))
        ->capture_default_str();
    add_search(solve, tuning);
    add_common(solve, common);

    auto* classify = app.add_subcommand("classify", "Label an instance correlated or uncorrelated");
    classify->add_option("input", input, "Instance file")->required()->check(CLI::ExistingFile);
    add_classifier(classify, tuning);
    add_common(classify, common);

    GenOptions gen;
    auto* generate = app.add_subcommand("generate", "Generate mutated string sets");
    generate->add_option("--m", gen.cfg.m, "Alphabet size")->capture_default_str();
    generate->add_option("--len", gen.cfg.base_len, "Base string length")->capture_default_str();
    generate->add_option("--n", gen.cfg.n, "Strings per set")->capture_default_str();
    generate->add_option("--p-mut", gen.cfg.p_mut, "Per-position mutation probability")->capture_default_str();
    generate->add_option("--count", gen.count, "Number of sets (directory output when > 1)")->capture_default_str();
    generate->add_option("--prefix", gen.prefix, "File name prefix for multiple sets")->capture_default_str();
    generate->add_option("--format", gen.format, "Output format")
        ->check(CLI::IsMember({"header", "raw"}))
        ->capture_default_str();
    add_common(generate, common);

    std::vector<std::string> inputs;
    std::vector<std::string> heuristics{"bs-ex", "k-uncor", "k-cor", "gcov", "ub-hh", "te-hh"};
    std::string report_format = "csv";
    auto* bench = app.add_subcommand("bench", "Run methods over instance files or directories");
    bench->add_option("inputs", inputs, "Instance files or directories")->required();
    bench->add_option("--heuristic", heuristics, "Methods to run (repeat or comma-separate)")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--format", report_format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    add_search(bench, tuning);
    add_common(bench, common);

    std::string stats_format = "auto";
    auto* stats = app.add_subcommand("stats", "Averages and Friedman ranks of a bench report");
    stats->add_option("input", input, "Report file")->required()->check(CLI::ExistingFile);
    stats->add_option("--format", stats_format, "Report format")
        ->check(CLI::IsMember({"auto", "csv", "json"}))
        ->capture_default_str();
    add_common(stats, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(input, heuristic, tuning, common);
        if (*classify) return run_classify(input, tuning, common);
        if (*generate) return run_generate(gen, common);
        if (*bench) return run_bench_cmd(inputs, heuristics, report_format, tuning, common);
        if (*stats) return run_stats(input, stats_format, common);
    } catch (const mlcs::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
