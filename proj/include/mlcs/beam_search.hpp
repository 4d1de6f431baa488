#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <thread>
#include <unordered_set>
#include <vector>

#include "mlcs/heuristics.hpp"
#include "mlcs/probability.hpp"
#include "mlcs/strings.hpp"

namespace mlcs {

/// A partial solution: how far into each string it has consumed.
struct BeamNode {
    Positions positions;
    std::int32_t depth = 0;
    /// Index of the predecessor in the search history; -1 for children of the root.
    std::int32_t parent = -1;
    std::optional<Symbol> last_symbol;
};

struct Candidate {
    BeamNode node;
    double score = 0.0;
    std::int64_t upper_bound = 0;
};

struct SearchStats {
    std::uint64_t nodes_expanded = 0;
    std::uint64_t children_generated = 0;
    std::uint64_t levels = 0;
    double wall_ms = 0.0;
};

struct Solution {
    Sequence sequence;
    SearchStats stats;

    std::size_t length() const noexcept { return sequence.size(); }
};

namespace detail {

struct PositionsHash {
    std::size_t operator()(std::span<const std::int32_t> p) const noexcept {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (auto v : p) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 0x100000001B3ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

/// Indices of the first occurrence of each distinct positions vector, in input order.
template <class Get>
std::vector<std::size_t> first_occurrences(std::size_t count, Get&& positions_of) {
    auto hash = [&](std::size_t i) { return PositionsHash{}(positions_of(i)); };
    auto eq = [&](std::size_t a, std::size_t b) {
        const auto& pa = positions_of(a);
        const auto& pb = positions_of(b);
        return std::equal(pa.begin(), pa.end(), pb.begin(), pb.end());
    };
    std::unordered_set<std::size_t, decltype(hash), decltype(eq)> seen(count * 2 + 1, hash, eq);
    std::vector<std::size_t> keep;
    keep.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (seen.insert(i).second) keep.push_back(i);
    }
    return keep;
}

/// Runs fn(begin, end) over contiguous slices of [0, count).
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    constexpr std::size_t min_slice = 16;
    const std::size_t slices = std::min<std::size_t>(workers, (count + min_slice - 1) / min_slice);
    if (slices <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(slices - 1);
    const std::size_t step = (count + slices - 1) / slices;
    for (std::size_t s = 1; s < slices; ++s) {
        const std::size_t begin = s * step;
        const std::size_t end = std::min(count, begin + step);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    fn(std::size_t{0}, std::min(count, step));
}

}  // namespace detail

/// Strict total order used for selection: score descending, then upper bound
/// descending, then lexicographically smaller positions first.
inline bool candidate_before(const Candidate& a, const Candidate& b) noexcept {
    if (a.score != b.score) return a.score > b.score;
    if (a.upper_bound != b.upper_bound) return a.upper_bound > b.upper_bound;
    return a.node.positions < b.node.positions;
}

/// One child per symbol that still occurs in every remainder. Children are in
/// symbol order and point back to node_id.
inline std::vector<BeamNode> expand(const BeamNode& node, const SuccTable& succ, std::int32_t node_id = -1) {
    std::vector<BeamNode> children;
    const auto n = succ.size();
    for (std::size_t sym = 0; sym < succ.alphabet_size(); ++sym) {
        Positions next(n);
        bool feasible = true;
        for (std::size_t i = 0; i < n && feasible; ++i) {
            const auto q = succ.next(i, static_cast<std::size_t>(node.positions[i]), static_cast<Symbol>(sym));
            if (q == SuccTable::absent) {
                feasible = false;
            } else {
                next[i] = q + 1;
            }
        }
        if (!feasible) continue;
        children.push_back(BeamNode{std::move(next), node.depth + 1, node_id, static_cast<Symbol>(sym)});
    }
    return children;
}

/// Keeps the beta best distinct candidates, ordered by candidate_before.
/// Of several candidates with the same positions the earliest one survives.
inline std::vector<Candidate> select_best(std::vector<Candidate> candidates, std::size_t beta) {
    auto keep = detail::first_occurrences(candidates.size(), [&](std::size_t i) -> const Positions& {
        return candidates[i].node.positions;
    });
    auto before = [&](std::size_t a, std::size_t b) { return candidate_before(candidates[a], candidates[b]); };
    if (keep.size() > beta) {
        std::nth_element(keep.begin(), keep.begin() + static_cast<std::ptrdiff_t>(beta), keep.end(), before);
        keep.resize(beta);
    }
    std::sort(keep.begin(), keep.end(), before);
    std::vector<Candidate> out;
    out.reserve(keep.size());
    for (auto i : keep) out.push_back(std::move(candidates[i]));
    return out;
}

/// Observes the selected list after every level (level numbers start at 1).
using LevelObserver = std::function<void(std::size_t level, std::span<const Candidate> selected)>;

/// Beam search over one instance. Tables are built once and shared by every run,
/// so repeated solves with different heuristics or widths reuse them.
/// The instance must outlive this object.
class BeamSearch {
public:
    explicit BeamSearch(const StringSet& s)
        : set_(&s), tables_(build_tables(s)),
          probs_(s.alphabet_size(), s.max_length(), s.max_length()) {}
    explicit BeamSearch(const StringSet&&) = delete;

    const StringSet& instance() const noexcept { return *set_; }
    const InstanceTables& tables() const noexcept { return tables_; }
    const ProbTable& probs() const noexcept { return probs_; }

    Solution run(HeuristicKind kind, std::size_t beta, const HeuristicParams& params = {}, unsigned workers = 1,
                 const LevelObserver& observer = {}) const {
        if (beta == 0) throw std::invalid_argument("beam width must be at least 1");
        const auto start = std::chrono::steady_clock::now();
        const auto& s = *set_;
        const auto n = s.size();

        struct Trail {
            std::int32_t parent;
            Symbol symbol;
        };
        std::vector<Trail> history;
        std::int32_t best = -1;

        SearchStats stats;
        std::vector<BeamNode> selected{BeamNode{Positions(n, 0), 0, -1, std::nullopt}};
        std::vector<std::int32_t> selected_ids{-1};

        while (!selected.empty()) {
            // Expansion, one slot per parent so the concatenation order is fixed.
            std::vector<std::vector<BeamNode>> per_parent(selected.size());
            detail::parallel_for(selected.size(), workers, [&](std::size_t b, std::size_t e) {
                for (std::size_t p = b; p < e; ++p) per_parent[p] = expand(selected[p], tables_.succ, selected_ids[p]);
            });
            stats.nodes_expanded += selected.size();

            std::vector<BeamNode> generated;
            for (auto& group : per_parent) {
                for (auto& child : group) generated.push_back(std::move(child));
            }
            if (generated.empty()) break;

            const auto keep = detail::first_occurrences(generated.size(), [&](std::size_t i) -> const Positions& {
                return generated[i].positions;
            });
            std::vector<Candidate> candidates;
            candidates.reserve(keep.size());
            for (auto i : keep) candidates.push_back(Candidate{std::move(generated[i]), 0.0, 0});
            stats.children_generated += candidates.size();

            LevelStats level{0, std::numeric_limits<std::int32_t>::max()};
            for (const auto& c : candidates) {
                for (std::size_t i = 0; i < n; ++i) {
                    const auto r = static_cast<std::int32_t>(s.length(i)) - c.node.positions[i];
                    level.max_remainder = std::max(level.max_remainder, r);
                    level.min_remainder = std::min(level.min_remainder, r);
                }
            }

            detail::parallel_for(candidates.size(), workers, [&](std::size_t b, std::size_t e) {
                std::vector<std::int32_t> remainders(n);
                for (std::size_t ci = b; ci < e; ++ci) {
                    auto& c = candidates[ci];
                    for (std::size_t i = 0; i < n; ++i) {
                        remainders[i] = static_cast<std::int32_t>(s.length(i)) - c.node.positions[i];
                    }
                    c.upper_bound = upper_bound(tables_.occ, c.node.positions);
                    const ScoreContext ctx{remainders, level, s.alphabet_size(), &probs_, c.upper_bound};
                    c.score = ranking_key(kind, ctx, params);
                }
            });

            auto chosen = select_best(std::move(candidates), beta);
            ++stats.levels;
            if (observer) observer(stats.levels, chosen);

            selected.clear();
            selected_ids.clear();
            for (auto& c : chosen) {
                history.push_back(Trail{c.node.parent, *c.node.last_symbol});
                selected_ids.push_back(static_cast<std::int32_t>(history.size() - 1));
                selected.push_back(std::move(c.node));
            }
            best = selected_ids.front();
        }

        Solution solution;
        for (auto id = best; id >= 0; id = history[static_cast<std::size_t>(id)].parent) {
            solution.sequence.push_back(history[static_cast<std::size_t>(id)].symbol);
        }
        std::reverse(solution.sequence.begin(), solution.sequence.end());
        stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        solution.stats = stats;
        return solution;
    }

private:
    const StringSet* set_;
    InstanceTables tables_;
    ProbTable probs_;
};

inline Solution beam_search(const StringSet& s, HeuristicKind kind, std::size_t beta,
                            const HeuristicParams& params = {}, unsigned workers = 1) {
    return BeamSearch(s).run(kind, beta, params, workers);
}

}  // namespace mlcs
