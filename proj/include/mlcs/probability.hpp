#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlcs {

/// p(k, l): probability that a uniform random string of length l over m symbols
/// contains a fixed uniform random pattern of length k as a subsequence.
///
/// Filled by conditioning on the first character of the string:
///   p(k, l) = (1/m) p(k-1, l-1) + (1 - 1/m) p(k, l-1),  p(0, l) = 1,  p(k, l) = 0 for k > l.
/// A natural-log copy is kept alongside, computed by the same recurrence in log
/// space so that deep entries do not underflow to zero.
class ProbTable {
public:
    ProbTable(std::size_t m, std::size_t k_max, std::size_t l_max)
        : m_(m), k_max_(k_max), l_max_(l_max), values_((k_max + 1) * (l_max + 1), 0.0),
          logs_((k_max + 1) * (l_max + 1), -std::numeric_limits<double>::infinity()) {
        if (m == 0) throw std::invalid_argument("alphabet size must be positive");
        const double match = 1.0 / static_cast<double>(m);
        const double miss = 1.0 - match;
        const double log_match = std::log(match);
        const double log_miss = m == 1 ? -std::numeric_limits<double>::infinity() : std::log1p(-match);

        for (std::size_t l = 0; l <= l_max; ++l) {
            cell(values_, 0, l) = 1.0;
            cell(logs_, 0, l) = 0.0;
        }
        for (std::size_t k = 1; k <= k_max; ++k) {
            for (std::size_t l = k; l <= l_max; ++l) {
                cell(values_, k, l) = match * cell(values_, k - 1, l - 1) + miss * cell(values_, k, l - 1);
                cell(logs_, k, l) = log_add(log_match + cell(logs_, k - 1, l - 1), log_miss + cell(logs_, k, l - 1));
            }
        }
    }

    std::size_t alphabet_size() const noexcept { return m_; }
    std::size_t k_max() const noexcept { return k_max_; }
    std::size_t l_max() const noexcept { return l_max_; }

    /// Unchecked access.
    double operator()(std::size_t k, std::size_t l) const noexcept { return values_[k * (l_max_ + 1) + l]; }
    double log_value(std::size_t k, std::size_t l) const noexcept { return logs_[k * (l_max_ + 1) + l]; }

    double at(std::size_t k, std::size_t l) const {
        if (k > k_max_ || l > l_max_) {
            throw std::out_of_range("p(" + std::to_string(k) + ", " + std::to_string(l) + ") outside table bounds");
        }
        return (*this)(k, l);
    }

private:
    double& cell(std::vector<double>& v, std::size_t k, std::size_t l) noexcept { return v[k * (l_max_ + 1) + l]; }

    static double log_add(double x, double y) noexcept {
        if (x < y) std::swap(x, y);
        if (y == -std::numeric_limits<double>::infinity()) return x;
        return x + std::log1p(std::exp(y - x));
    }

    std::size_t m_;
    std::size_t k_max_;
    std::size_t l_max_;
    std::vector<double> values_;
    std::vector<double> logs_;
};

inline ProbTable build_prob_table(std::size_t m, std::size_t k_max, std::size_t l_max) {
    return ProbTable(m, k_max, l_max);
}

inline double lookup(const ProbTable& table, std::size_t k, std::size_t l) { return table.at(k, l); }

}  // namespace mlcs
