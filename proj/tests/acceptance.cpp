// End-to-end acceptance checks. Prints one PASS/FAIL/SKIP line per criterion
// and exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "mlcs/mlcs.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mlcs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

int failures = 0;

void report_line(int id, const std::string& name, const Outcome& o, double secs) {
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    if (o.verdict == Verdict::fail) ++failures;
    std::printf("[%s] criterion %2d %-24s %s (%.1fs)\n", tag, id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

void run(int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto start = Clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    report_line(id, name, o, seconds_since(start));
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

// Shared generated suite for criteria 1, 6 and 7.

constexpr std::size_t suite_beta = 50;
constexpr std::size_t suite_beta_h = 50;
constexpr std::size_t suite_per_cell = 12;

struct SuiteRow {
    std::string id;
    bool valid = true;
    bool ub_equals_base = true;
    double ub_select_s = 0.0;
    double te_trial_s = 0.0;
};

struct SuiteRun {
    std::vector<SuiteRow> rows;
    std::size_t solves = 0;
    std::size_t invalid = 0;
    double seconds = 0.0;
};

const SuiteRun& suite_run() {
    static const SuiteRun run = [] {
        SuiteRun out;
        const auto start = Clock::now();
        std::uint64_t index = 0;
        for (std::size_t m : {2u, 4u, 20u}) {
            for (std::size_t l : {100u, 600u}) {
                for (std::size_t n : {2u, 10u, 100u}) {
                    for (std::size_t r = 0; r < suite_per_cell; ++r, ++index) {
                        const GenConfig cfg{m, l, n, r % 2 == 0 ? 0.1 : 0.9, derive_seed(2024, index)};
                        const auto s = generate_set(cfg);
                        SuiteRow row;
                        row.id = fmt("m%zu_l%zu_n%zu_%zu", m, l, n, r);

                        const BeamSearch search(s);
                        std::vector<Sequence> base;
                        for (auto kind : all_heuristics) {
                            base.push_back(search.run(kind, suite_beta).sequence);
                            ++out.solves;
                            if (!is_common_subsequence(base.back(), s)) row.valid = false;
                        }

                        const auto ub = ub_hh_solve(s, suite_beta, {}, {}, cfg.seed);
                        ++out.solves;
                        if (!is_common_subsequence(ub.solution.sequence, s)) row.valid = false;
                        const auto slot = static_cast<std::size_t>(
                            std::find(std::begin(all_heuristics), std::end(all_heuristics), ub.dispatch.chosen) -
                            std::begin(all_heuristics));
                        row.ub_equals_base = ub.solution.sequence == base[slot];
                        row.ub_select_s = std::chrono::duration<double>(ub.dispatch.decide_time).count();

                        TeHhConfig te;
                        te.trial_beta = suite_beta_h;
                        const auto tr = te_hh_solve(s, suite_beta, te, {});
                        ++out.solves;
                        if (!is_common_subsequence(tr.solution.sequence, s)) row.valid = false;
                        row.te_trial_s = std::chrono::duration<double>(tr.trial_time).count();

                        if (!row.valid) ++out.invalid;
                        out.rows.push_back(std::move(row));
                    }
                }
            }
        }
        out.seconds = seconds_since(start);
        return out;
    }();
    return run;
}

Outcome criterion_validity() {
    const auto& run = suite_run();
    const bool ok = run.rows.size() >= 200 && run.invalid == 0 && run.seconds < 600.0;
    return verdict(ok, fmt("%zu instances, %zu solves, %zu invalid instances, %.1fs of 600s", run.rows.size(),
                           run.solves, run.invalid, run.seconds));
}


Outcome criterion_pair_oracle() {
    const auto start = Clock::now();
    Rng rng(7);
    std::size_t over = 0;
    double ratio_sum = 0.0;
    std::size_t ratio_count = 0;
    double worst_ratio = 1.0;
    for (int i = 0; i < 50; ++i) {
        const auto s = oracle::random_set(rng, 2, 50, 200, 4);
        const auto exact = exact_lcs_pair(s[0], s[1]).size();
        const BeamSearch search(s);
        for (auto kind : all_heuristics) {
            for (std::size_t beta : {1u, 50u}) {
                if (search.run(kind, beta).length() > exact) ++over;
            }
            const auto len = search.run(kind, 600).length();
            if (len > exact) ++over;
            const double ratio = exact == 0 ? 1.0 : static_cast<double>(len) / static_cast<double>(exact);
            ratio_sum += ratio;
            worst_ratio = std::min(worst_ratio, ratio);
            ++ratio_count;
        }
    }
    const double mean = ratio_sum / static_cast<double>(ratio_count);
    const double secs = seconds_since(start);
    return verdict(over == 0 && mean >= 0.98 && secs < 300.0,
                   fmt("50 pairs, %zu exceed exact, mean ratio at beta 600 = %.4f (min %.4f, need >= 0.98)", over,
                       mean, worst_ratio));
}

Outcome criterion_tiny_oracle() {
    const auto start = Clock::now();
    Rng rng(11);
    std::size_t matches = 0;
    std::size_t total = 0;
    std::size_t over = 0;
    for (int i = 0; i < 30; ++i) {
        const auto s = oracle::random_set(rng, 3, 4, 12, 2 + static_cast<std::size_t>(i % 3));
        const auto exact = exact_lcs_small(s).size();
        const BeamSearch search(s);
        for (auto kind : all_heuristics) {
            const auto len = search.run(kind, 1000).length();
            matches += len == exact;
            over += len > exact;
            ++total;
        }
    }
    const double rate = static_cast<double>(matches) / static_cast<double>(total);
    const double secs = seconds_since(start);
    return verdict(rate >= 0.95 && over == 0 && secs < 120.0,
                   fmt("%zu/%zu solves equal exact (%.1f%%, need >= 95%%), %zu exceed", matches, total, 100.0 * rate,
                       over));
}


struct Accuracy {
    std::size_t correct = 0;
    std::size_t total = 0;
    double rate() const { return static_cast<double>(correct) / static_cast<double>(total); }
};

Accuracy classify_suite(const std::vector<std::size_t>& alphabets, std::uint64_t stream) {
    Accuracy acc;
    const std::size_t per_label = 100;
    std::uint64_t index = 0;
    for (double p_mut : {0.1, 0.9}) {
        const auto expected = p_mut < 0.5 ? SetType::correlated : SetType::uncorrelated;
        for (std::size_t i = 0; i < per_label; ++i, ++index) {
            const std::size_t m = alphabets[i % alphabets.size()];
            const std::size_t n = (i / alphabets.size()) % 2 == 0 ? 10 : 100;
            const auto seed = derive_seed(stream, index);
            const auto s = generate_set({m, 600, n, p_mut, seed});
            S2dConfig cfg;
            cfg.seed = seed;
            acc.correct += s2d_classify(s, cfg).type == expected;
            ++acc.total;
        }
    }
    return acc;
}

Outcome criterion_classifier() {
    const auto start = Clock::now();
    const auto acc = classify_suite({4, 20}, 31);
    const double secs = seconds_since(start);
    return verdict(acc.total == 200 && acc.rate() >= 0.95 && secs < 300.0,
                   fmt("%zu/%zu correct (%.1f%%, need >= 95%%)", acc.correct, acc.total, 100.0 * acc.rate()));
}

Outcome criterion_binary_alphabet() {
    const auto acc = classify_suite({2}, 37);
    return verdict(default_ei(2) == 10 && acc.rate() >= 0.80,
                   fmt("ei = %zu, %zu/%zu correct (%.1f%%, need >= 80%%)", default_ei(2), acc.correct, acc.total,
                       100.0 * acc.rate()));
}


Outcome criterion_dispatch_speed() {
    const auto big = generate_set({4, 600, 200, 0.9, 99});
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto d = ub_hh_select(big, {}, seed);
        worst = std::max(worst, std::chrono::duration<double>(d.decide_time).count());
    }
    const auto& run = suite_run();
    std::size_t ordered = 0;
    double ub_total = 0.0;
    double te_total = 0.0;
    for (const auto& row : run.rows) {
        ordered += row.te_trial_s > row.ub_select_s;
        ub_total += row.ub_select_s;
        te_total += row.te_trial_s;
    }
    return verdict(worst < 1.0 && ordered == run.rows.size(),
                   fmt("decide time n=200 l=600 m=4: %.4fs (< 1s); te-hh trials slower on %zu/%zu instances "
                       "(totals %.3fs vs %.3fs)",
                       worst, ordered, run.rows.size(), te_total, ub_total));
}

Outcome criterion_dispatch_equivalence() {
    const auto& run = suite_run();
    std::size_t equal = 0;
    for (const auto& row : run.rows) equal += row.ub_equals_base;
    return verdict(equal == run.rows.size(),
                   fmt("%zu/%zu ub-hh solutions identical to the dispatched base heuristic", equal, run.rows.size()));
}


Outcome criterion_probability() {
    const auto binary = build_prob_table(2, 12, 12);
    double worst_exact = 0.0;
    for (std::size_t l = 0; l <= 12; ++l) {
        for (std::size_t k = 0; k <= l; ++k) {
            worst_exact = std::max(worst_exact, std::abs(binary(k, l) - oracle::enumerate_p(2, k, l)));
        }
    }

    const auto dna = build_prob_table(4, 30, 30);
    Rng rng(19);
    const std::size_t samples = 100000;
    std::size_t within = 0;
    double worst_z = 0.0;
    for (int point = 0; point < 20; ++point) {
        const auto l = static_cast<std::size_t>(rng.between(1, 30));
        const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(l)));
        std::size_t hits = 0;
        for (std::size_t t = 0; t < samples; ++t) {
            const auto pattern = oracle::random_sequence(rng, k, 4);
            const auto text = oracle::random_sequence(rng, l, 4);
            hits += oracle::greedy_subsequence(pattern, text);
        }
        const double p = dna(k, l);
        const double est = static_cast<double>(hits) / static_cast<double>(samples);
        const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(samples));
        const double z = std::abs(est - p) / se;
        worst_z = std::max(worst_z, z);
        within += z <= 3.0;
    }
    return verdict(worst_exact <= 1e-12 && within == 20,
                   fmt("max |table - enumeration| = %.2e (<= 1e-12); %zu/20 Monte-Carlo points within 3 SE "
                       "(worst %.2f SE)",
                       worst_exact, within, worst_z));
}

Outcome criterion_lct() {
    Rng rng(23);
    std::size_t agree = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto m = 1 + rng.below(4);
        const auto a = oracle::random_sequence(rng, rng.below(31), m);
        const auto b = oracle::random_sequence(rng, rng.below(31), m);
        agree += lct_length(a, b) == oracle::brute_lct(a, b);
    }
    return verdict(agree == 1000, fmt("%zu/1000 pairs equal the all-substring oracle", agree));
}


std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

nlohmann::json strip_times(nlohmann::json j) {
    if (j.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key().find("time_ms") == std::string::npos) out[it.key()] = strip_times(it.value());
        }
        return out;
    }
    if (j.is_array()) {
        for (auto& v : j) v = strip_times(v);
    }
    return j;
}

std::string primary_output(const fs::path& file, bool csv) {
    const auto text = slurp(file);
    if (!csv) return strip_times(nlohmann::json::parse(text)).dump();
    auto records = parse_report(text, ReportFormat::csv);
    for (auto& r : records) r.time_ms = 0.0;
    return report(records, ReportFormat::csv);
}

Outcome criterion_determinism() {
    const std::string cli = MLCS_CLI;
    const auto dir = fs::temp_directory_path() / fmt("mlcs_acceptance_%d", static_cast<int>(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir / "sets");
    const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };

    if (shell(cli + " generate --m 4 --len 300 --n 20 --p-mut 0.5 --seed 5 --out " + q(dir / "inst.txt")) != 0 ||
        shell(cli + " generate --m 20 --len 120 --n 8 --p-mut 0.3 --count 3 --seed 6 --out " + q(dir / "sets")) != 0) {
        return {Verdict::fail, "instance generation failed"};
    }

    struct Command {
        std::string name;
        std::string args;
        bool csv;
    };
    std::vector<Command> commands;
    for (const char* h : {"bs-ex", "k-uncor", "k-cor", "gcov", "ub-hh", "te-hh"}) {
        commands.push_back({std::string("solve ") + h,
                            std::string("solve ") + q(dir / "inst.txt") + " --heuristic " + h + " --beta 60 --seed 3",
                            false});
    }
    commands.push_back({"classify", "classify " + q(dir / "inst.txt") + " --seed 3", false});
    commands.push_back({"bench csv", "bench " + q(dir / "sets") + " --beta 40 --beta-h 20 --seed 4", true});
    commands.push_back({"bench json", "bench " + q(dir / "sets") + " --beta 40 --beta-h 20 --seed 4 --format json", false});

    std::size_t identical = 0;
    std::string mismatched;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::vector<std::string> outputs;
        for (const char* variant : {"1", "1", "8"}) {
            const auto out = dir / fmt("out_%zu_%s_%zu.txt", c, variant, outputs.size());
            const auto cmd = cli + " " + commands[c].args + " --workers " + variant + " --out " + q(out) + " 2>/dev/null";
            if (shell(cmd) != 0) return {Verdict::fail, "command failed: " + commands[c].name};
            outputs.push_back(primary_output(out, commands[c].csv));
        }
        if (outputs[0] == outputs[1] && outputs[0] == outputs[2]) {
            ++identical;
        } else {
            mismatched += " " + commands[c].name;
        }
    }
    fs::remove_all(dir);
    return verdict(identical == commands.size(),
                   fmt("%zu/%zu commands identical across two runs and workers 1 vs 8%s", identical, commands.size(),
                       mismatched.empty() ? "" : ("; differ:" + mismatched).c_str()));
}


Outcome criterion_published_benchmark() {
    const char* dir = std::getenv("MLCS_ACO_RANDOM_DIR");
    if (!dir || !fs::is_directory(dir)) {
        return {Verdict::skip, "benchmark files not supplied (set MLCS_ACO_RANDOM_DIR)"};
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) return {Verdict::skip, "benchmark directory is empty"};
    double total = 0.0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto s = load_instance(files[i].string());
        total += static_cast<double>(ub_hh_solve(s, 200, {}, {}, derive_seed(0, i)).solution.length());
    }
    const double avg = total / static_cast<double>(files.size());
    const double rel = std::abs(avg - 108.4) / 108.4;
    return verdict(rel <= 0.03, fmt("%zu files, ub-hh average %.2f vs 108.4 (%.2f%% off, allowed 3%%)", files.size(),
                                    avg, 100.0 * rel));
}

Outcome criterion_friedman() {
    Rng rng(29);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto rows = 2 + rng.below(40);
        const auto cols = 2 + rng.below(7);
        std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
        for (auto& row : m) {
            for (auto& v : row) v = static_cast<double>(50 + rng.below(8));
        }
        worst = std::max(worst, std::abs(friedman_ranks(m).statistic - oracle::friedman_rank_sum(m)));
    }
    const std::vector<std::vector<double>> ties(10, std::vector<double>(6, 42.0));
    const double tie_stat = friedman_ranks(ties).statistic;
    return verdict(worst <= 1e-9 && tie_stat == 0.0,
                   fmt("max deviation on 100 matrices %.2e (<= 1e-9); all-ties statistic %.1f", worst, tie_stat));
}

}  // namespace

int main() {
    run(1, "validity", criterion_validity);
    run(2, "pair-oracle", criterion_pair_oracle);
    run(3, "tiny-oracle", criterion_tiny_oracle);
    run(4, "classifier-accuracy", criterion_classifier);
    run(5, "binary-alphabet", criterion_binary_alphabet);
    run(6, "dispatch-speed", criterion_dispatch_speed);
    run(7, "dispatch-equivalence", criterion_dispatch_equivalence);
    run(8, "probability-table", criterion_probability);
    run(9, "longest-common-substring", criterion_lct);
    run(10, "determinism", criterion_determinism);
    run(11, "published-benchmark", criterion_published_benchmark);
    run(12, "friedman", criterion_friedman);
    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
