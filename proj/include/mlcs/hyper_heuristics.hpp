#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mlcs/beam_search.hpp"
#include "mlcs/classifier.hpp"
#include "mlcs/heuristics.hpp"
#include "mlcs/strings.hpp"

namespace mlcs {

/// Upper bound of the whole set divided by its shortest string length, in [0, 1].
inline double ubs(const StringSet& s) {
    const auto shortest = s.min_length();
    if (shortest == 0) throw std::invalid_argument("ubs is undefined for a set containing an empty string");
    return static_cast<double>(upper_bound(s)) / static_cast<double>(shortest);
}

struct UbHhConfig {
    double theta1 = 0.54;
    double theta2 = 0.9;
    S2dConfig classifier;
    /// Heuristic for [0, theta1), [theta1, theta2) and [theta2, 1].
    std::array<HeuristicKind, 3> interval_map{HeuristicKind::gcov, HeuristicKind::k_analytic_uncor,
                                              HeuristicKind::bs_ex};

    void validate() const {
        if (!(0.0 < theta1 && theta1 < theta2 && theta2 <= 1.0)) {
            throw std::invalid_argument("thresholds must satisfy 0 < theta1 < theta2 <= 1");
        }
        for (std::size_t a = 0; a < 3; ++a) {
            if (interval_map[a] == HeuristicKind::k_analytic_cor) {
                throw std::invalid_argument("interval map must use the uncorrelated heuristics");
            }
            for (std::size_t b = a + 1; b < 3; ++b) {
                if (interval_map[a] == interval_map[b]) throw std::invalid_argument("interval map must be a bijection");
            }
        }
    }

    HeuristicKind heuristic_for(double value) const noexcept {
        if (value < theta1) return interval_map[0];
        if (value < theta2) return interval_map[1];
        return interval_map[2];
    }
};

struct Dispatch {
    Label label;
    std::optional<double> ubs;
    HeuristicKind chosen = HeuristicKind::k_analytic_cor;
    std::chrono::nanoseconds decide_time{0};
    /// Elementary operations spent deciding: window DP cells plus symbols scanned for the bound.
    std::uint64_t work = 0;
};

/// Classifies the set, then picks one base heuristic without running any search.
inline Dispatch ub_hh_select(const StringSet& s, const UbHhConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    auto classifier = cfg.classifier;
    classifier.seed = seed;

    Dispatch d;
    d.label = s2d_classify(s, classifier);
    const auto width = std::min(classifier.ei_for(s), s.max_length());
    d.work = classifier.iterations_for(s) * width * width;
    if (d.label.type == SetType::correlated) {
        d.chosen = HeuristicKind::k_analytic_cor;
    } else {
        d.ubs = ubs(s);
        d.chosen = cfg.heuristic_for(*d.ubs);
        for (const auto& str : s.strings()) d.work += str.size();
    }
    d.decide_time = std::chrono::steady_clock::now() - start;
    return d;
}

struct UbHhResult {
    Solution solution;
    Dispatch dispatch;
};

inline UbHhResult ub_hh_solve(const StringSet& s, std::size_t beta, const UbHhConfig& cfg,
                              const HeuristicParams& params, std::uint64_t seed, unsigned workers = 1) {
    auto dispatch = ub_hh_select(s, cfg, seed);
    auto solution = beam_search(s, dispatch.chosen, beta, params, workers);
    return UbHhResult{std::move(solution), dispatch};
}

struct TeHhConfig {
    std::size_t trial_beta = 50;
    std::vector<HeuristicKind> portfolio{std::begin(all_heuristics), std::end(all_heuristics)};
};

struct TeHhResult {
    Solution solution;
    HeuristicKind chosen = HeuristicKind::bs_ex;
    std::vector<std::size_t> trial_lengths;
    std::vector<SearchStats> trial_stats;
    std::chrono::nanoseconds trial_time{0};

    /// Successor lookups performed by the trial runs (children times strings).
    std::uint64_t trial_work(std::size_t n) const noexcept {
        std::uint64_t total = 0;
        for (const auto& st : trial_stats) total += st.children_generated * n;
        return total;
    }
};

/// Pilots every portfolio heuristic at the trial width, then re-runs the one
/// with the longest pilot solution (earliest in the portfolio on ties) at beta.
inline TeHhResult te_hh_solve(const StringSet& s, std::size_t beta, const TeHhConfig& cfg,
                              const HeuristicParams& params, unsigned workers = 1) {
    if (cfg.portfolio.empty()) throw std::invalid_argument("portfolio must not be empty");
    if (cfg.trial_beta == 0) throw std::invalid_argument("trial beam width must be at least 1");
    if (beta < cfg.trial_beta) throw std::invalid_argument("beam width must not be below the trial width");

    const BeamSearch search(s);
    const auto start = std::chrono::steady_clock::now();
    std::vector<Solution> trials(cfg.portfolio.size());
    if (workers > 1 && cfg.portfolio.size() > 1) {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < cfg.portfolio.size(); ++t) {
            pool.emplace_back([&, t] { trials[t] = search.run(cfg.portfolio[t], cfg.trial_beta, params); });
        }
    } else {
        for (std::size_t t = 0; t < cfg.portfolio.size(); ++t) {
            trials[t] = search.run(cfg.portfolio[t], cfg.trial_beta, params);
        }
    }

    TeHhResult result;
    result.trial_time = std::chrono::steady_clock::now() - start;
    std::size_t winner = 0;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        result.trial_lengths.push_back(trials[t].length());
        result.trial_stats.push_back(trials[t].stats);
        if (trials[t].length() > trials[winner].length()) winner = t;
    }
    result.chosen = cfg.portfolio[winner];
    result.solution = search.run(result.chosen, beta, params, workers);
    return result;
}

}  // namespace mlcs
