#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

#include "mlcs/probability.hpp"

namespace mlcs {

enum class HeuristicKind { bs_ex, k_analytic_uncor, k_analytic_cor, gcov };

inline constexpr HeuristicKind all_heuristics[] = {
    HeuristicKind::bs_ex,
    HeuristicKind::k_analytic_cor,
    HeuristicKind::k_analytic_uncor,
    HeuristicKind::gcov,
};

constexpr std::string_view to_string(HeuristicKind kind) noexcept {
    switch (kind) {
    case HeuristicKind::bs_ex:
        return "bs-ex";
    case HeuristicKind::k_analytic_uncor:
        return "k-uncor";
    case HeuristicKind::k_analytic_cor:
        return "k-cor";
    case HeuristicKind::gcov:
        return "gcov";
    }
    return "?";
}

inline std::optional<HeuristicKind> parse_heuristic_kind(std::string_view name) noexcept {
    for (auto kind : all_heuristics) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

enum class KMode { uncor, cor };

struct HeuristicParams {
    double a = 1.8233;
    double b = 0.1588;
    double c = 31.0;
    /// Overrides the string-count formula for the GCoV exponent when set.
    std::optional<double> gamma;
    double variance_floor = 1e-6;

    double gamma_for(std::size_t n) const noexcept {
        return gamma ? *gamma : 0.0036 * static_cast<double>(n) - 0.0161;
    }
};

/// Remainder-length extremes over every candidate of the current beam level.
struct LevelStats {
    std::int32_t max_remainder = 0;
    std::int32_t min_remainder = 0;
};

/// Everything a scoring function may look at for one candidate node.
struct ScoreContext {
    std::span<const std::int32_t> remainder_lengths;
    LevelStats level;
    std::size_t alphabet_size = 1;
    const ProbTable* probs = nullptr;
    std::int64_t upper_bound = 0;

    std::int32_t min_remainder() const noexcept {
        if (remainder_lengths.empty()) return 0;
        return *std::min_element(remainder_lengths.begin(), remainder_lengths.end());
    }
};

/// Expected number of common subsequences, summed over lengths 1..l_min:
///   sum_k [1 - (1 - prod_i p(k, |r_i|))^(m^k)].
///
/// The power is evaluated as -expm1(m^k * log1p(-q)) in log space; the term
/// saturates to 1 once m^k * -log1p(-q) exceeds 745. log(m^k q_k) is concave in
/// k, so once it has fallen below the subnormal range every later term is an
/// exact zero and the loop stops.
inline double score_bs_ex(const ScoreContext& ctx) {
    const auto l_min = ctx.min_remainder();
    if (l_min <= 0) return 0.0;
    const double log_m = std::log(static_cast<double>(ctx.alphabet_size));
    const double saturation = std::log(745.0);
    const auto& probs = *ctx.probs;

    double sum = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (std::int32_t k = 1; k <= l_min; ++k) {
        double log_q = 0.0;
        for (auto r : ctx.remainder_lengths) log_q += probs.log_value(static_cast<std::size_t>(k), static_cast<std::size_t>(r));
        if (log_q == -std::numeric_limits<double>::infinity()) break;
        const double q = std::exp(log_q);
        if (q >= 1.0) {
            sum += 1.0;
            continue;
        }
        const double log_exponent = static_cast<double>(k) * log_m + std::log(-std::log1p(-q));
        if (log_exponent > saturation) {
            sum += 1.0;
        } else {
            sum += -std::expm1(-std::exp(log_exponent));
        }
        if (log_exponent < -745.0 && log_exponent < previous) break;
        previous = log_exponent;
    }
    return sum;
}

/// Pattern length k for the k_analytic score, derived from level statistics and
/// rounded half-up, then clamped to [1, level max remainder].
inline std::int32_t compute_k(const ScoreContext& ctx, KMode mode, const HeuristicParams& params) {
    const double m = static_cast<double>(ctx.alphabet_size);
    double raw = 0.0;
    if (mode == KMode::uncor) {
        const double n = static_cast<double>(ctx.remainder_lengths.size());
        raw = static_cast<double>(ctx.level.max_remainder) * (params.a - params.b * std::log(n)) / m;
    } else {
        raw = (static_cast<double>(ctx.level.min_remainder) - params.c) / m;
    }
    const std::int32_t hi = std::max<std::int32_t>(1, ctx.level.max_remainder);
    const double rounded = std::floor(raw + 0.5);
    if (!(rounded >= 1.0)) return 1;
    if (rounded >= static_cast<double>(hi)) return hi;
    return static_cast<std::int32_t>(rounded);
}

/// prod_i p(k, |r_i|) with k from compute_k.
inline double score_k_analytic(const ScoreContext& ctx, KMode mode, const HeuristicParams& params) {
    const auto k = static_cast<std::size_t>(compute_k(ctx, mode, params));
    const auto& probs = *ctx.probs;
    double product = 1.0;
    for (auto r : ctx.remainder_lengths) product *= probs(k, static_cast<std::size_t>(r));
    return product;
}

/// Natural log of score_k_analytic; same ordering without underflow for large n.
inline double log_score_k_analytic(const ScoreContext& ctx, KMode mode, const HeuristicParams& params) {
    const auto k = static_cast<std::size_t>(compute_k(ctx, mode, params));
    const auto& probs = *ctx.probs;
    double sum = 0.0;
    for (auto r : ctx.remainder_lengths) sum += probs.log_value(k, static_cast<std::size_t>(r));
    return sum;
}

/// mean^2 / max(var, floor)^gamma * sqrt(ub) over the remainder lengths.
inline double score_gcov(const ScoreContext& ctx, const HeuristicParams& params) {
    const auto& lengths = ctx.remainder_lengths;
    const double n = static_cast<double>(lengths.size());
    double mean = 0.0;
    for (auto r : lengths) mean += static_cast<double>(r);
    mean /= n;
    double var = 0.0;
    for (auto r : lengths) {
        const double d = static_cast<double>(r) - mean;
        var += d * d;
    }
    var /= n;
    const double gamma = params.gamma_for(lengths.size());
    return mean * mean / std::pow(std::max(var, params.variance_floor), gamma) *
           std::sqrt(static_cast<double>(ctx.upper_bound));
}

inline double score(HeuristicKind kind, const ScoreContext& ctx, const HeuristicParams& params) {
    switch (kind) {
    case HeuristicKind::bs_ex:
        return score_bs_ex(ctx);
    case HeuristicKind::k_analytic_uncor:
        return score_k_analytic(ctx, KMode::uncor, params);
    case HeuristicKind::k_analytic_cor:
        return score_k_analytic(ctx, KMode::cor, params);
    case HeuristicKind::gcov:
        return score_gcov(ctx, params);
    }
    return 0.0;
}

/// Key the beam ranks by: the score itself, or its logarithm for k_analytic
/// (a monotone transform, so the ordering is unchanged wherever the product is
/// representable).
inline double ranking_key(HeuristicKind kind, const ScoreContext& ctx, const HeuristicParams& params) {
    switch (kind) {
    case HeuristicKind::k_analytic_uncor:
        return log_score_k_analytic(ctx, KMode::uncor, params);
    case HeuristicKind::k_analytic_cor:
        return log_score_k_analytic(ctx, KMode::cor, params);
    default:
        return score(kind, ctx, params);
    }
}

}  // namespace mlcs
