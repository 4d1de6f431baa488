#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mlcs/random.hpp"
#include "mlcs/strings.hpp"

namespace mlcs {

using Window = std::span<const Symbol>;

/// Generic stochastic similarity estimate: repeatedly sample strings, cut a
/// partition out of the sample, score it, and aggregate the scores.
struct ScfConfig {
    std::size_t sample_size = 2;
    std::function<std::vector<Window>(std::span<const Window> sample, Rng& rng)> extract;
    std::function<double(std::span<const Window> partition)> similarity;
    std::size_t iterations = 1;
    std::function<double(std::span<const double> values)> aggregate;
};

inline double mean_of(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// Draws sample_size distinct indices, in draw order. Each draw picks uniformly
/// among the indices not taken yet.
inline std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t count, Rng& rng) {
    std::vector<std::size_t> picked;
    std::vector<std::size_t> sorted;
    for (std::size_t t = 0; t < count; ++t) {
        auto idx = static_cast<std::size_t>(rng.below(n - t));
        for (auto c : sorted) {
            if (idx >= c) ++idx;
        }
        picked.push_back(idx);
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), idx), idx);
    }
    return picked;
}

inline double scf_run(const StringSet& s, const ScfConfig& cfg, std::uint64_t seed) {
    if (cfg.sample_size < 2) throw std::invalid_argument("sample size must be at least 2");
    if (cfg.iterations == 0) throw std::invalid_argument("iterations must be at least 1");
    if (s.size() < cfg.sample_size) throw std::invalid_argument("fewer strings than the sample size");
    if (!cfg.extract || !cfg.similarity) throw std::invalid_argument("extraction and similarity are required");

    Rng rng(seed);
    std::vector<double> sims;
    sims.reserve(cfg.iterations);
    std::vector<Window> sample(cfg.sample_size);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const auto picked = sample_distinct(s.size(), cfg.sample_size, rng);
        for (std::size_t t = 0; t < picked.size(); ++t) sample[t] = s[picked[t]];
        const auto partition = cfg.extract(sample, rng);
        sims.push_back(cfg.similarity(partition));
    }
    return cfg.aggregate ? cfg.aggregate(sims) : mean_of(sims);
}

enum class SetType { correlated, uncorrelated };

constexpr std::string_view to_string(SetType t) noexcept {
    return t == SetType::correlated ? "correlated" : "uncorrelated";
}

struct Label {
    SetType type = SetType::uncorrelated;
    double sim_s = 0.0;
};

/// Window length: shorter windows for binary alphabets, where short exact
/// matches are common even between unrelated strings.
constexpr std::size_t default_ei(std::size_t m) noexcept { return m <= 2 ? 10 : 20; }

struct S2dConfig {
    /// default_ei(m) when unset.
    std::optional<std::size_t> ei;
    double tr = 5.0;
    /// max(ceil(n/2), 5) when unset.
    std::optional<std::size_t> iterations;
    std::uint64_t seed = 0;

    std::size_t ei_for(const StringSet& s) const { return ei ? *ei : default_ei(s.alphabet_size()); }

    std::size_t iterations_for(const StringSet& s) const {
        return iterations ? *iterations : std::max<std::size_t>((s.size() + 1) / 2, 5);
    }
};

namespace detail {

inline void check_s2d(const StringSet& s, const S2dConfig& cfg) {
    if (s.size() < 2) throw std::invalid_argument("classification needs at least two strings");
    if (s.min_length() < 2) throw std::invalid_argument("classification needs strings of length at least 2");
    if (cfg.ei_for(s) < 2) throw std::invalid_argument("ei must be at least 2");
    if (!(cfg.tr > 0.0)) throw std::invalid_argument("tr must be positive");
    if (cfg.iterations_for(s) == 0) throw std::invalid_argument("iterations must be at least 1");
}

/// Aligned windows [si, si + ei') with ei' = min(ei, l_min) and si uniform in [0, l_min - ei'].
inline std::pair<std::size_t, std::size_t> draw_window(std::size_t l_min, std::size_t ei, Rng& rng) {
    const auto width = std::min(ei, l_min);
    const auto si = static_cast<std::size_t>(rng.below(l_min - width + 1));
    return {si, width};
}

}  // namespace detail

/// The S2D dichotomizer expressed as a framework configuration: pairs of
/// strings, aligned windows, longest-common-substring similarity, mean.
inline ScfConfig s2d_framework(const StringSet& s, const S2dConfig& cfg) {
    detail::check_s2d(s, cfg);
    ScfConfig scf;
    scf.sample_size = 2;
    scf.iterations = cfg.iterations_for(s);
    scf.extract = [ei = cfg.ei_for(s)](std::span<const Window> sample, Rng& rng) {
        const auto l_min = std::min(sample[0].size(), sample[1].size());
        const auto [si, width] = detail::draw_window(l_min, ei, rng);
        return std::vector<Window>{sample[0].subspan(si, width), sample[1].subspan(si, width)};
    };
    scf.similarity = [](std::span<const Window> partition) {
        return static_cast<double>(lct_length(partition[0], partition[1]));
    };
    scf.aggregate = mean_of;
    return scf;
}

/// Labels a set correlated when the mean windowed longest common substring
/// between random string pairs exceeds tr.
inline Label s2d_classify(const StringSet& s, const S2dConfig& cfg = {}) {
    detail::check_s2d(s, cfg);
    const auto n = s.size();
    const auto ei = cfg.ei_for(s);
    const auto iterations = cfg.iterations_for(s);

    Rng rng(cfg.seed);
    std::uint64_t total = 0;
    for (std::size_t it = 0; it < iterations; ++it) {
        const auto i = static_cast<std::size_t>(rng.below(n));
        auto j = static_cast<std::size_t>(rng.below(n - 1));
        if (j >= i) ++j;
        const auto l_min = std::min(s.length(i), s.length(j));
        const auto [si, width] = detail::draw_window(l_min, ei, rng);
        total += lct_length(Window(s[i]).subspan(si, width), Window(s[j]).subspan(si, width));
    }
    const double sim_s = static_cast<double>(total) / static_cast<double>(iterations);
    return Label{sim_s > cfg.tr ? SetType::correlated : SetType::uncorrelated, sim_s};
}

}  // namespace mlcs
