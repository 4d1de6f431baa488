#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mlcs {

using Symbol = std::uint8_t;
using Sequence = std::vector<Symbol>;
using Positions = std::vector<std::int32_t>;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered set of distinct characters; symbol indices follow the stored order.
class Alphabet {
public:
    static constexpr std::size_t max_size = 256;

    explicit Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw std::invalid_argument("alphabet must contain at least one symbol");
        if (symbols_.size() > max_size) throw std::invalid_argument("alphabet larger than 256 symbols");
        index_.fill(-1);
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            auto& slot = index_[static_cast<unsigned char>(symbols_[i])];
            if (slot != -1) {
                throw std::invalid_argument(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
            }
            slot = static_cast<std::int16_t>(i);
        }
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& symbols() const noexcept { return symbols_; }
    char symbol(Symbol s) const { return symbols_.at(s); }

    std::optional<Symbol> index_of(char c) const noexcept {
        const auto idx = index_[static_cast<unsigned char>(c)];
        if (idx < 0) return std::nullopt;
        return static_cast<Symbol>(idx);
    }

    Sequence encode(std::string_view text) const {
        Sequence out;
        out.reserve(text.size());
        for (char c : text) {
            const auto idx = index_of(c);
            if (!idx) throw ParseError(std::string("character '") + c + "' outside the alphabet");
            out.push_back(*idx);
        }
        return out;
    }

    std::string decode(std::span<const Symbol> seq) const {
        std::string out;
        out.reserve(seq.size());
        for (Symbol s : seq) out.push_back(symbols_.at(s));
        return out;
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept {
        return a.symbols_ == b.symbols_;
    }

private:
    std::string symbols_;
    std::array<std::int16_t, 256> index_{};
};

/// A problem instance: n strings over a common alphabet, stored as symbol indices.
class StringSet {
public:
    StringSet(Alphabet alphabet, std::vector<Sequence> strings)
        : alphabet_(std::move(alphabet)), strings_(std::move(strings)) {
        if (strings_.empty()) throw std::invalid_argument("a string set needs at least one string");
        const auto m = alphabet_.size();
        for (const auto& s : strings_) {
            for (Symbol c : s) {
                if (c >= m) throw std::invalid_argument("symbol index outside the alphabet");
            }
        }
    }

    static StringSet from_text(Alphabet alphabet, const std::vector<std::string>& texts) {
        std::vector<Sequence> strings;
        strings.reserve(texts.size());
        for (const auto& t : texts) strings.push_back(alphabet.encode(t));
        return StringSet(std::move(alphabet), std::move(strings));
    }

    /// Alphabet inferred from the observed characters in ascending order.
    static StringSet from_text(const std::vector<std::string>& texts) {
        std::array<bool, 256> seen{};
        for (const auto& t : texts) {
            for (char c : t) seen[static_cast<unsigned char>(c)] = true;
        }
        std::string symbols;
        for (int c = 0; c < 256; ++c) {
            if (seen[c]) symbols.push_back(static_cast<char>(c));
        }
        if (symbols.empty()) symbols.push_back('A');
        return from_text(Alphabet(std::move(symbols)), texts);
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return strings_.size(); }
    std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
    const std::vector<Sequence>& strings() const noexcept { return strings_; }
    const Sequence& operator[](std::size_t i) const { return strings_[i]; }
    std::size_t length(std::size_t i) const { return strings_[i].size(); }

    std::size_t min_length() const noexcept {
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (const auto& s : strings_) best = std::min(best, s.size());
        return best;
    }

    std::size_t max_length() const noexcept {
        std::size_t best = 0;
        for (const auto& s : strings_) best = std::max(best, s.size());
        return best;
    }

    std::string text(std::size_t i) const { return alphabet_.decode(strings_[i]); }

    friend bool operator==(const StringSet& a, const StringSet& b) noexcept {
        return a.alphabet_ == b.alphabet_ && a.strings_ == b.strings_;
    }

private:
    Alphabet alphabet_;
    std::vector<Sequence> strings_;
};

enum class InstanceFormat { header, raw };

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const auto b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

inline std::optional<long long> to_integer(std::string_view s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

inline StringSet parse_header(const std::vector<std::string_view>& lines) {
    std::size_t li = 0;
    while (li < lines.size() && trim(lines[li]).empty()) ++li;
    if (li == lines.size()) throw ParseError("empty instance");

    const auto head = tokens(trim(lines[li++]));
    if (head.size() < 2 || head.size() > 3) throw ParseError("malformed header: expected \"n m\"");
    const auto n = to_integer(head[0]);
    const auto m = to_integer(head[1]);
    if (!n || !m) throw ParseError("malformed header: n and m must be integers");
    if (*n <= 0) throw ParseError("instance declares no strings");
    if (*m <= 0 || *m > static_cast<long long>(Alphabet::max_size)) {
        throw ParseError("malformed header: alphabet size out of range");
    }

    std::vector<std::string> texts;
    for (; li < lines.size(); ++li) {
        const auto line = trim(lines[li]);
        if (line.empty()) continue;
        const auto tok = tokens(line);
        if (tok.size() > 2) throw ParseError("malformed string line: " + std::string(line));
        const auto len = to_integer(tok[0]);
        if (!len || *len < 0) throw ParseError("malformed string line: " + std::string(line));
        const std::string_view body = tok.size() == 2 ? tok[1] : std::string_view{};
        if (static_cast<long long>(body.size()) != *len) {
            throw ParseError("length mismatch: declared " + std::to_string(*len) + " but string has " +
                             std::to_string(body.size()) + " symbols");
        }
        texts.emplace_back(body);
    }
    if (static_cast<long long>(texts.size()) != *n) {
        throw ParseError("n declared " + std::to_string(*n) + " but " + std::to_string(texts.size()) + " strings");
    }

    if (head.size() == 3) {
        if (static_cast<long long>(head[2].size()) != *m) {
            throw ParseError("malformed header: symbol list does not have m entries");
        }
        std::optional<Alphabet> alphabet;
        try {
            alphabet.emplace(std::string(head[2]));
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("malformed header: ") + e.what());
        }
        return StringSet::from_text(std::move(*alphabet), texts);
    }

    std::array<bool, 256> seen{};
    std::size_t distinct = 0;
    for (const auto& t : texts) {
        for (char c : t) {
            auto& flag = seen[static_cast<unsigned char>(c)];
            if (!flag) ++distinct;
            flag = true;
        }
    }
    if (static_cast<long long>(distinct) > *m) {
        throw ParseError("character outside declared alphabet: " + std::to_string(distinct) +
                         " distinct symbols but m = " + std::to_string(*m));
    }
    // Unused symbols are padded with the lowest unused printable characters
    // so that m survives the round trip.
    for (int c = '!'; c <= '~' && static_cast<long long>(distinct) < *m; ++c) {
        if (!seen[c]) {
            seen[c] = true;
            ++distinct;
        }
    }
    std::string symbols;
    for (int c = 0; c < 256; ++c) {
        if (seen[c]) symbols.push_back(static_cast<char>(c));
    }
    return StringSet::from_text(Alphabet(std::move(symbols)), texts);
}

}  // namespace detail

/// Parses an instance in one of the two text formats.
///
/// header: first line "n m" (optionally "n m SYMBOLS" listing the alphabet in
/// order), then n lines "length string". Without an explicit symbol list the
/// alphabet is the observed characters in ascending order, padded up to m.
/// raw: one string per non-empty line; the alphabet is the observed characters.
/// LF and CRLF line endings are both accepted.
inline StringSet parse_instance(std::string_view text, InstanceFormat format) {
    const auto lines = detail::split_lines(text);
    if (format == InstanceFormat::header) return detail::parse_header(lines);

    std::vector<std::string> texts;
    for (auto line : lines) {
        line = detail::trim(line);
        if (!line.empty()) texts.emplace_back(line);
    }
    if (texts.empty()) throw ParseError("instance declares no strings");
    return StringSet::from_text(texts);
}

/// Guesses the format: header when the first non-blank line is "n m" or "n m SYMBOLS".
inline InstanceFormat detect_format(std::string_view text) {
    for (auto line : detail::split_lines(text)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto tok = detail::tokens(line);
        if ((tok.size() == 2 || tok.size() == 3) && detail::to_integer(tok[0]) && detail::to_integer(tok[1])) {
            return InstanceFormat::header;
        }
        return InstanceFormat::raw;
    }
    return InstanceFormat::raw;
}

/// cnt[i][pos][σ]: occurrences of σ in s_i[pos..].
class OccTable {
public:
    explicit OccTable(const StringSet& s) : m_(s.alphabet_size()) {
        counts_.reserve(s.size());
        for (const auto& str : s.strings()) {
            std::vector<std::int32_t> table((str.size() + 1) * m_, 0);
            for (std::size_t pos = str.size(); pos-- > 0;) {
                std::copy_n(table.begin() + static_cast<std::ptrdiff_t>((pos + 1) * m_), m_,
                            table.begin() + static_cast<std::ptrdiff_t>(pos * m_));
                ++table[pos * m_ + str[pos]];
            }
            counts_.push_back(std::move(table));
        }
    }

    std::size_t alphabet_size() const noexcept { return m_; }
    std::size_t size() const noexcept { return counts_.size(); }

    std::int32_t count(std::size_t i, std::size_t pos, Symbol sym) const {
        return counts_[i][pos * m_ + sym];
    }

    std::span<const std::int32_t> counts(std::size_t i, std::size_t pos) const {
        return {counts_[i].data() + pos * m_, m_};
    }

private:
    std::size_t m_;
    std::vector<std::vector<std::int32_t>> counts_;
};

/// next[i][pos][σ]: first index >= pos holding σ in s_i, or absent.
class SuccTable {
public:
    static constexpr std::int32_t absent = -1;

    explicit SuccTable(const StringSet& s) : m_(s.alphabet_size()) {
        next_.reserve(s.size());
        for (const auto& str : s.strings()) {
            std::vector<std::int32_t> table((str.size() + 1) * m_, absent);
            for (std::size_t pos = str.size(); pos-- > 0;) {
                std::copy_n(table.begin() + static_cast<std::ptrdiff_t>((pos + 1) * m_), m_,
                            table.begin() + static_cast<std::ptrdiff_t>(pos * m_));
                table[pos * m_ + str[pos]] = static_cast<std::int32_t>(pos);
            }
            next_.push_back(std::move(table));
        }
    }

    std::size_t alphabet_size() const noexcept { return m_; }
    std::size_t size() const noexcept { return next_.size(); }

    std::int32_t next(std::size_t i, std::size_t pos, Symbol sym) const {
        return next_[i][pos * m_ + sym];
    }

private:
    std::size_t m_;
    std::vector<std::vector<std::int32_t>> next_;
};

struct InstanceTables {
    OccTable occ;
    SuccTable succ;
};

inline InstanceTables build_tables(const StringSet& s) {
    return InstanceTables{OccTable(s), SuccTable(s)};
}

/// Sum over symbols of the minimum remaining occurrence count across strings.
inline std::int64_t upper_bound(const OccTable& occ, std::span<const std::int32_t> positions) {
    const auto m = occ.alphabet_size();
    std::int64_t total = 0;
    for (std::size_t sym = 0; sym < m; ++sym) {
        std::int32_t least = std::numeric_limits<std::int32_t>::max();
        for (std::size_t i = 0; i < occ.size() && least > 0; ++i) {
            least = std::min(least, occ.count(i, static_cast<std::size_t>(positions[i]), static_cast<Symbol>(sym)));
        }
        total += least;
    }
    return total;
}

/// Same bound computed by direct counting, O(n * l) without prebuilt tables.
inline std::int64_t upper_bound(const StringSet& s, std::span<const std::int32_t> positions) {
    if (positions.size() != s.size()) throw std::invalid_argument("positions must have one entry per string");
    const auto m = s.alphabet_size();
    std::vector<std::int64_t> least(m, std::numeric_limits<std::int64_t>::max());
    std::vector<std::int64_t> counts(m);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& str = s[i];
        if (positions[i] < 0 || static_cast<std::size_t>(positions[i]) > str.size()) {
            throw std::out_of_range("position outside string");
        }
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t pos = static_cast<std::size_t>(positions[i]); pos < str.size(); ++pos) ++counts[str[pos]];
        for (std::size_t c = 0; c < m; ++c) least[c] = std::min(least[c], counts[c]);
    }
    std::int64_t total = 0;
    for (auto v : least) total += v;
    return total;
}

inline std::int64_t upper_bound(const StringSet& s) {
    const Positions zeros(s.size(), 0);
    return upper_bound(s, zeros);
}

inline bool is_subsequence(std::span<const Symbol> candidate, std::span<const Symbol> str) noexcept {
    std::size_t j = 0;
    for (std::size_t i = 0; i < str.size() && j < candidate.size(); ++i) {
        if (str[i] == candidate[j]) ++j;
    }
    return j == candidate.size();
}

inline bool is_common_subsequence(std::span<const Symbol> candidate, const StringSet& s) noexcept {
    return std::all_of(s.strings().begin(), s.strings().end(),
                       [&](const Sequence& str) { return is_subsequence(candidate, str); });
}

/// Longest common substring length by the quadratic suffix-match DP.
inline std::size_t lct_length(std::span<const Symbol> a, std::span<const Symbol> b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::uint32_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    std::uint32_t best = 0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
            best = std::max(best, cur[j]);
        }
        std::swap(prev, cur);
    }
    return best;
}

/// Exact LCS of two sequences (quadratic DP with traceback).
inline Sequence exact_lcs_pair(std::span<const Symbol> a, std::span<const Symbol> b) {
    const auto rows = a.size() + 1;
    const auto cols = b.size() + 1;
    // table[i][j] = LCS length of a[i..], b[j..]
    std::vector<std::uint32_t> table(rows * cols, 0);
    for (std::size_t i = a.size(); i-- > 0;) {
        for (std::size_t j = b.size(); j-- > 0;) {
            auto& cell = table[i * cols + j];
            if (a[i] == b[j]) {
                cell = table[(i + 1) * cols + j + 1] + 1;
            } else {
                cell = std::max(table[(i + 1) * cols + j], table[i * cols + j + 1]);
            }
        }
    }
    Sequence out;
    out.reserve(table[0]);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            out.push_back(a[i]);
            ++i;
            ++j;
        } else if (table[(i + 1) * cols + j] >= table[i * cols + j + 1]) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

class BudgetExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Exact LCS of all strings by DP over every suffix-position tuple.
/// Only usable for tiny instances: the product of lengths must stay within budget.
inline Sequence exact_lcs_small(const StringSet& s, std::uint64_t budget = 10'000'000) {
    const auto n = s.size();
    const auto m = s.alphabet_size();
    std::uint64_t product = 1;
    std::uint64_t cells = 1;
    for (const auto& str : s.strings()) {
        if (!str.empty() && product > budget / str.size()) throw BudgetExceeded("exact LCS budget exceeded");
        product *= str.size();
        cells *= str.size() + 1;
    }
    if (product > budget) throw BudgetExceeded("exact LCS budget exceeded");

    std::vector<std::uint64_t> stride(n);
    std::uint64_t acc = 1;
    for (std::size_t i = n; i-- > 0;) {
        stride[i] = acc;
        acc *= s.length(i) + 1;
    }

    const SuccTable succ(s);
    std::vector<std::uint16_t> best(cells, 0);
    Positions pos(n);
    auto decode = [&](std::uint64_t idx) {
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = static_cast<std::int32_t>(idx / stride[i]);
            idx %= stride[i];
        }
    };
    // Children have every coordinate strictly larger, hence a larger index.
    auto child_index = [&](Symbol sym) -> std::optional<std::uint64_t> {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto nx = succ.next(i, static_cast<std::size_t>(pos[i]), sym);
            if (nx == SuccTable::absent) return std::nullopt;
            idx += static_cast<std::uint64_t>(nx + 1) * stride[i];
        }
        return idx;
    };

    for (std::uint64_t idx = cells; idx-- > 0;) {
        decode(idx);
        std::uint16_t value = 0;
        for (std::size_t sym = 0; sym < m; ++sym) {
            if (auto c = child_index(static_cast<Symbol>(sym))) {
                value = std::max<std::uint16_t>(value, static_cast<std::uint16_t>(best[*c] + 1));
            }
        }
        best[idx] = value;
    }

    Sequence out;
    std::uint64_t idx = 0;
    while (best[idx] > 0) {
        decode(idx);
        for (std::size_t sym = 0; sym < m; ++sym) {
            auto c = child_index(static_cast<Symbol>(sym));
            if (c && best[*c] + 1 == best[idx]) {
                out.push_back(static_cast<Symbol>(sym));
                idx = *c;
                break;
            }
        }
    }
    return out;
}

}  // namespace mlcs
