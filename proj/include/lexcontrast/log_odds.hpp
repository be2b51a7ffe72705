#ifndef LEXCONTRAST_LOG_ODDS_HPP
#define LEXCONTRAST_LOG_ODDS_HPP

// Weighted log odds ratio with an informative Dirichlet prior taken from the
// pooled corpus. For a term w with counts y_A, y_B, group totals n_A, n_B and
// pooled count y over pooled total n:
//
//   alpha_w  = alpha0 * y / n
//   omega_g  = (y_g + alpha_w) / (n_g + alpha0 - y_g - alpha_w)
//   delta    = ln omega_A - ln omega_B
//   variance = 1/(y_A + alpha_w) + 1/(y_B + alpha_w)
//   z        = delta / sqrt(variance)

#include <lexcontrast/error.hpp>
#include <lexcontrast/text_features.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace lexcontrast {

struct LogOddsEntry {
    std::string term;
    std::int64_t count_a = 0;
    std::int64_t count_b = 0;
    double prior_alpha = 0;
    double delta = 0;
    double variance = 0;
    double z = 0;
};

struct LogOddsTable {
    int n = 1;
    double alpha0 = 1;
    std::string group_a;
    std::string group_b;
    std::vector<LogOddsEntry> entries; ///< sorted by term
};

struct LogOddsOptions {
    double alpha0 = 1.0;
    /// Terms with pooled count below this are left out. 0 keeps everything.
    std::int64_t min_count = 0;
};

/// Scores every term of `freq` contrasting `group_a` against `group_b`.
inline LogOddsTable weighted_log_odds(const FrequencyTable& freq, const std::string& group_a,
                                      const std::string& group_b, const LogOddsOptions& opt = {})
{
    if (!(opt.alpha0 > 0))
        throw Error("weighted log odds: alpha0 must be positive");
    const std::size_t ia = freq.group_index(group_a), ib = freq.group_index(group_b);

    LogOddsTable table;
    table.n = freq.n;
    table.alpha0 = opt.alpha0;
    table.group_a = group_a;
    table.group_b = group_b;
    if (freq.counts.empty())
        return table;

    double na = 0, nb = 0;
    for (const auto& [term, c] : freq.counts) {
        na += static_cast<double>(c[ia]);
        nb += static_cast<double>(c[ib]);
    }
    if (!(na > 0) || !(nb > 0))
        throw Error("weighted log odds: both groups need a positive token total");
    const double total = na + nb;

    table.entries.reserve(freq.counts.size());
    for (const auto& [term, c] : freq.counts) {
        const double ya = static_cast<double>(c[ia]), yb = static_cast<double>(c[ib]);
        if (ya + yb <= 0 || ya + yb < static_cast<double>(opt.min_count))
            continue;
        LogOddsEntry e;
        e.term = term;
        e.count_a = c[ia];
        e.count_b = c[ib];
        e.prior_alpha = opt.alpha0 * (ya + yb) / total;
        const double oa = (ya + e.prior_alpha) / (na + opt.alpha0 - ya - e.prior_alpha);
        const double ob = (yb + e.prior_alpha) / (nb + opt.alpha0 - yb - e.prior_alpha);
        e.delta = std::log(oa) - std::log(ob);
        e.variance = 1.0 / (ya + e.prior_alpha) + 1.0 / (yb + e.prior_alpha);
        e.z = e.delta / std::sqrt(e.variance);
        table.entries.push_back(std::move(e));
    }
    return table;
}

/// Contrasts the table's first group against its second.
inline LogOddsTable weighted_log_odds(const FrequencyTable& freq, const LogOddsOptions& opt = {})
{
    if (freq.groups.size() < 2)
        throw Error("weighted log odds: need two groups");
    return weighted_log_odds(freq, freq.groups[0], freq.groups[1], opt);
}

enum class Side { A, B };

/// The k terms most characteristic of one side: largest z for A, most negative for B.
/// Ties break lexicographically. k beyond the vocabulary returns the full ranking.
inline std::vector<LogOddsEntry> top_k_entries(const LogOddsTable& table, std::size_t k, Side side)
{
    if (k < 1)
        throw Error("top-k: k must be at least 1");
    std::vector<LogOddsEntry> ranked = table.entries;
    auto cmp = [side](const LogOddsEntry& a, const LogOddsEntry& b) {
        if (a.z != b.z)
            return side == Side::A ? a.z > b.z : a.z < b.z;
        return a.term < b.term;
    };
    std::size_t take = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(), cmp);
    ranked.resize(take);
    return ranked;
}

inline std::vector<std::string> top_k_terms(const LogOddsTable& table, std::size_t k, Side side)
{
    std::vector<std::string> out;
    for (auto& e : top_k_entries(table, k, side))
        out.push_back(std::move(e.term));
    return out;
}

/// Entries ordered by z descending, ties by term.
inline std::vector<LogOddsEntry> sorted_by_z(const LogOddsTable& table)
{
    auto out = table.entries;
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.z != b.z)
            return a.z > b.z;
        return a.term < b.term;
    });
    return out;
}

} // namespace lexcontrast

#endif
