#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlcs/random.hpp"
#include "mlcs/strings.hpp"

namespace mlcs {

/// Symbols used for generated sets: ACGT for m = 4, otherwise a prefix of A-Z a-z 0-9.
inline Alphabet default_alphabet(std::size_t m) {
    constexpr std::string_view pool = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    if (m == 0 || m > pool.size()) throw std::invalid_argument("generated alphabets support 1..62 symbols");
    if (m == 4) return Alphabet("ACGT");
    return Alphabet(std::string(pool.substr(0, m)));
}

struct GenConfig {
    std::size_t m = 4;
    std::size_t base_len = 600;
    std::size_t n = 10;
    double p_mut = 0.1;
    std::uint64_t seed = 0;

    void validate() const {
        if (m < 2) throw std::invalid_argument("generator needs at least two symbols");
        if (base_len < 1) throw std::invalid_argument("base length must be positive");
        if (n < 1) throw std::invalid_argument("generator needs at least one string");
        if (!(p_mut >= 0.0 && p_mut <= 1.0)) throw std::invalid_argument("mutation probability must be in [0, 1]");
    }
};

/// Mutated copies of one uniform base string. Each base position is mutated with
/// probability p_mut; a mutation is a deletion, an insertion of a uniform symbol
/// before the position, or a substitution by a uniform symbol, each with
/// probability 1/3. Insertions and deletions balance, so E[length] = base_len.
inline StringSet generate_set(const GenConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    Sequence base(cfg.base_len);
    for (auto& c : base) c = static_cast<Symbol>(rng.below(cfg.m));

    std::vector<Sequence> strings;
    strings.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        Sequence out;
        out.reserve(cfg.base_len + cfg.base_len / 8 + 4);
        for (Symbol c : base) {
            if (rng.unit() >= cfg.p_mut) {
                out.push_back(c);
                continue;
            }
            switch (rng.below(3)) {
            case 0:  // deletion
                break;
            case 1:  // insertion
                out.push_back(static_cast<Symbol>(rng.below(cfg.m)));
                out.push_back(c);
                break;
            default:  // substitution
                out.push_back(static_cast<Symbol>(rng.below(cfg.m)));
                break;
            }
        }
        strings.push_back(std::move(out));
    }
    return StringSet(default_alphabet(cfg.m), std::move(strings));
}

/// Serialises in either instance format. The header format also lists the
/// alphabet after n and m so unused symbols survive a round trip.
inline std::string write_instance(const StringSet& s, InstanceFormat format) {
    std::string out;
    if (format == InstanceFormat::header) {
        out += std::to_string(s.size()) + ' ' + std::to_string(s.alphabet_size()) + ' ' + s.alphabet().symbols() + '\n';
        for (std::size_t i = 0; i < s.size(); ++i) {
            out += std::to_string(s.length(i)) + ' ' + s.text(i) + '\n';
        }
    } else {
        for (std::size_t i = 0; i < s.size(); ++i) out += s.text(i) + '\n';
    }
    return out;
}

}  // namespace mlcs
