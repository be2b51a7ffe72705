#ifndef LEXCONTRAST_ASSUMPTION_PIPELINE_HPP
#define LEXCONTRAST_ASSUMPTION_PIPELINE_HPP

// The MANOVA workflow: variable screening (low mean -> normality ->
// multicollinearity), Levene per variable, Box's M, Mahalanobis outliers,
// MANOVA with and without outliers, then Welch post-hocs at a Bonferroni level.
//
// Assumption-test failures are recorded, never fatal. Kernel errors in the
// outlier or MANOVA stages abort with the stage named.

#include <lexcontrast/count_matrix.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/mv_stats.hpp>
#include <lexcontrast/text_features.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lexcontrast {

struct WorkflowConfig {
    double low_mean_threshold = 20;
    double skew_limit = 2;
    double kurt_limit = 7;
    double collinearity_cutoff = 0.9;
    double mahalanobis_quantile = 0.999;
    double family_alpha = 0.05;
    /// Number of tests the family alpha is divided by; 0 means one per retained variable.
    std::size_t posthoc_family_size = 0;
    stats::LeveneCenter levene_center = stats::LeveneCenter::median;
    std::uint64_t seed = 0; // recorded only; the workflow is deterministic
};

struct LowMeanDrop {
    std::string variable;
    double mean;
};

struct NormalityDrop {
    std::string variable;
    std::string group; ///< first group that failed the screen
    double skewness;   ///< NaN for a constant variable
    double excess_kurtosis;
};

struct CollinearDrop {
    std::string kept;
    std::string dropped;
    double r;
};

struct ScreeningLog {
    std::vector<LowMeanDrop> dropped_low_mean;
    std::vector<NormalityDrop> dropped_non_normal;
    std::vector<CollinearDrop> dropped_collinear;
    std::vector<std::string> retained;
};

struct Histogram {
    std::string variable;
    std::string group;
    double lower = 0;
    double bin_width = 0;
    std::vector<std::size_t> counts;
};

struct GroupSummary {
    std::string group;
    double mean = 0;
    std::optional<double> sd;
};

struct VariableResult {
    std::string variable;
    stats::TestResult levene;
    stats::TestResult welch;
    bool significant = false;
    std::vector<GroupSummary> groups;
};

struct CorrelationPair {
    std::string a;
    std::string b;
    double r;
};

struct WorkflowReport {
    std::vector<std::string> groups;
    std::size_t n = 0;
    ScreeningLog screening;
    std::vector<Histogram> histograms;
    std::vector<CorrelationPair> strongest_correlations; ///< among retained variables, |r| descending
    std::optional<stats::BoxMResult> box_m;
    std::string box_m_error;
    stats::MahalanobisReport outliers;
    stats::ManovaResult manova_with_outliers;
    stats::ManovaResult manova_without_outliers;
    std::size_t family_size = 0;
    double adjusted_alpha = 0;
    std::vector<VariableResult> variables; ///< one per retained variable
    std::vector<std::string> notes;
    WorkflowConfig config;
};

// ---------------------------------------------------------------------------
// Screens

/// Removes variables whose overall mean is below `threshold`; survivors keep their order.
inline std::pair<CountMatrix, std::vector<LowMeanDrop>> filter_low_mean(const CountMatrix& m, double threshold)
{
    if (!(threshold >= 0))
        throw Error("low-mean filter: threshold must be non-negative");
    std::vector<std::size_t> keep;
    std::vector<LowMeanDrop> dropped;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double mean = m.values.col(static_cast<Eigen::Index>(j)).mean();
        if (mean < threshold)
            dropped.push_back({m.variables[j], mean});
        else
            keep.push_back(j);
    }
    if (keep.empty())
        throw Error("low-mean filter: every variable fell below the threshold");
    return {m.select_columns(keep), std::move(dropped)};
}

inline constexpr std::size_t min_normality_group = 20;

/// Flags variables whose skewness or excess kurtosis exceeds the limits in any group.
inline std::vector<NormalityDrop> normality_screen(const CountMatrix& m, const std::vector<std::string>& groups,
                                                   double skew_limit, double kurt_limit)
{
    for (const auto& g : groups) {
        auto size = static_cast<std::size_t>(std::count(m.labels.begin(), m.labels.end(), g));
        if (size < min_normality_group)
            throw Error("normality screen: group '" + g + "' has fewer than 20 observations");
    }
    std::vector<NormalityDrop> dropped;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto by_group = m.column_by_group(j, groups);
        for (std::size_t k = 0; k < groups.size(); ++k) {
            auto shape = stats::sample_shape(by_group[k]);
            bool bad = std::isnan(shape.skewness) || std::abs(shape.skewness) > skew_limit ||
                       std::abs(shape.excess_kurtosis) > kurt_limit;
            if (bad) {
                dropped.push_back({m.variables[j], groups[k], shape.skewness, shape.excess_kurtosis});
                break;
            }
        }
    }
    return dropped;
}

/// Sturges-rule histograms per variable and group.
inline std::vector<Histogram> histograms(const CountMatrix& m, const std::vector<std::string>& groups)
{
    std::vector<Histogram> out;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto by_group = m.column_by_group(j, groups);
        for (std::size_t k = 0; k < groups.size(); ++k) {
            const auto& v = by_group[k];
            if (v.empty())
                continue;
            Histogram h;
            h.variable = m.variables[j];
            h.group = groups[k];
            auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            auto bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(v.size())))) + 1;
            h.lower = *lo;
            h.bin_width = *hi > *lo ? (*hi - *lo) / static_cast<double>(bins) : 1.0;
            h.counts.assign(bins, 0);
            for (double x : v) {
                auto b = static_cast<std::size_t>((x - h.lower) / h.bin_width);
                ++h.counts[std::min(b, bins - 1)];
            }
            out.push_back(std::move(h));
        }
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<double>> abs_correlations(const CountMatrix& m)
{
    const std::size_t p = m.cols();
    std::vector<std::vector<double>> cols(p);
    for (std::size_t j = 0; j < p; ++j)
        cols[j] = m.column(j);
    std::vector<std::vector<double>> r(p, std::vector<double>(p, 0.0));
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b) {
            double v = stats::pearson_r(cols[a], cols[b]);
            r[a][b] = r[b][a] = std::isnan(v) ? 0.0 : v;
        }
    return r;
}

} // namespace detail

/// Repeatedly removes one variable of the most correlated pair until no |r|
/// exceeds `cutoff`. The victim has the larger mean |r| to the other remaining
/// variables; on a tie the later variable goes.
inline std::pair<CountMatrix, std::vector<CollinearDrop>> multicollinearity_filter(const CountMatrix& m, double cutoff)
{
    if (!(cutoff > 0 && cutoff < 1))
        throw Error("multicollinearity filter: cutoff must lie in (0, 1)");
    auto r = detail::abs_correlations(m);
    std::vector<std::size_t> alive(m.cols());
    for (std::size_t j = 0; j < alive.size(); ++j)
        alive[j] = j;
    std::vector<CollinearDrop> dropped;

    for (;;) {
        double worst = cutoff;
        std::size_t wa = 0, wb = 0;
        bool found = false;
        for (std::size_t x = 0; x < alive.size(); ++x)
            for (std::size_t y = x + 1; y < alive.size(); ++y) {
                double v = std::abs(r[alive[x]][alive[y]]);
                if (v > worst) {
                    worst = v;
                    wa = x;
                    wb = y;
                    found = true;
                }
            }
        if (!found)
            break;
        auto mean_abs = [&](std::size_t idx) {
            double s = 0;
            for (std::size_t o = 0; o < alive.size(); ++o)
                if (o != idx)
                    s += std::abs(r[alive[idx]][alive[o]]);
            return s / static_cast<double>(alive.size() - 1);
        };
        std::size_t victim = mean_abs(wa) > mean_abs(wb) ? wa : wb;
        std::size_t keeper = victim == wa ? wb : wa;
        dropped.push_back({m.variables[alive[keeper]], m.variables[alive[victim]], r[alive[wa]][alive[wb]]});
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return {m.select_columns(alive), std::move(dropped)};
}

// ---------------------------------------------------------------------------
// Workflow

namespace detail {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const Error& e) {
        throw Error(std::string("stage '") + name + "': " + e.what());
    }
}

inline std::vector<CorrelationPair> strongest_pairs(const CountMatrix& m, std::size_t limit)
{
    auto r = abs_correlations(m);
    std::vector<CorrelationPair> pairs;
    for (std::size_t a = 0; a < m.cols(); ++a)
        for (std::size_t b = a + 1; b < m.cols(); ++b)
            pairs.push_back({m.variables[a], m.variables[b], r[a][b]});
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& x, const auto& y) { return std::abs(x.r) > std::abs(y.r); });
    if (pairs.size() > limit)
        pairs.resize(limit);
    return pairs;
}

} // namespace detail

inline WorkflowReport run_manova_workflow(const CountMatrix& input, const WorkflowConfig& config = {})
{
    input.validate();
    WorkflowReport rep;
    rep.config = config;
    rep.groups = ordered_groups(input.labels);
    rep.n = input.rows();
    if (rep.groups.size() < 2)
        throw Error("manova workflow: two groups required");

    // screening on the full data, in fixed order
    auto [after_mean, low] = detail::stage("low_mean", [&] { return filter_low_mean(input, config.low_mean_threshold); });
    rep.screening.dropped_low_mean = std::move(low);
    rep.histograms = histograms(after_mean, rep.groups);
    auto non_normal = detail::stage("normality", [&] {
        return normality_screen(after_mean, rep.groups, config.skew_limit, config.kurt_limit);
    });
    std::vector<std::size_t> normal_keep;
    for (std::size_t j = 0; j < after_mean.cols(); ++j) {
        bool drop = std::any_of(non_normal.begin(), non_normal.end(),
                                [&](const auto& d) { return d.variable == after_mean.variables[j]; });
        if (!drop)
            normal_keep.push_back(j);
    }
    rep.screening.dropped_non_normal = std::move(non_normal);
    CountMatrix after_normal = after_mean.select_columns(normal_keep);
    auto [screened, collinear] = detail::stage("multicollinearity", [&] {
        return multicollinearity_filter(after_normal, config.collinearity_cutoff);
    });
    rep.screening.dropped_collinear = std::move(collinear);
    rep.screening.retained = screened.variables;
    if (screened.cols() < 2)
        throw Error("stage 'screening': fewer than two variables survived");
    rep.strongest_correlations = detail::strongest_pairs(screened, 10);

    // univariate variance homogeneity
    for (std::size_t j = 0; j < screened.cols(); ++j) {
        VariableResult v;
        v.variable = screened.variables[j];
        v.levene = detail::stage("levene", [&] {
            return stats::levene_test(screened.column_by_group(j, rep.groups), config.levene_center);
        });
        rep.variables.push_back(std::move(v));
    }

    // covariance homogeneity; a failure to compute is recorded, not fatal
    try {
        std::vector<Eigen::MatrixXd> per_group;
        auto split = stats::split_groups(screened.labels);
        for (const auto& g : rep.groups) {
            auto it = std::find(split.names.begin(), split.names.end(), g);
            per_group.push_back(stats::detail::take_rows(
                screened.values, split.rows[static_cast<std::size_t>(it - split.names.begin())]));
        }
        rep.box_m = stats::box_m_test(per_group);
    } catch (const Error& e) {
        rep.box_m_error = e.what();
    }

    rep.outliers = detail::stage("mahalanobis", [&] {
        return stats::mahalanobis_outliers(screened.values, config.mahalanobis_quantile);
    });
    rep.manova_with_outliers = detail::stage("manova", [&] { return stats::manova_pillai(screened.values, screened.labels); });
    std::vector<std::size_t> inliers;
    for (std::size_t i = 0; i < screened.rows(); ++i)
        if (!rep.outliers.outlier_flags[i])
            inliers.push_back(i);
    CountMatrix trimmed = screened.select_rows(inliers);
    rep.manova_without_outliers =
        detail::stage("manova_without_outliers", [&] { return stats::manova_pillai(trimmed.values, trimmed.labels); });

    // post-hocs
    rep.family_size = config.posthoc_family_size ? config.posthoc_family_size : screened.cols();
    rep.adjusted_alpha = stats::bonferroni_adjust(config.family_alpha, rep.family_size);
    for (std::size_t j = 0; j < screened.cols(); ++j) {
        auto by_group = screened.column_by_group(j, rep.groups);
        auto& v = rep.variables[j];
        v.welch = detail::stage("welch", [&] { return stats::welch_anova(by_group); });
        v.significant = v.welch.p_value < rep.adjusted_alpha;
        for (std::size_t k = 0; k < rep.groups.size(); ++k) {
            auto d = stats::descriptive_stats(by_group[k]);
            v.groups.push_back({rep.groups[k], d.mean, d.sd});
        }
    }

    std::size_t levene_failures = static_cast<std::size_t>(std::count_if(
        rep.variables.begin(), rep.variables.end(), [&](const auto& v) { return v.levene.p_value < config.family_alpha; }));
    if (levene_failures)
        rep.notes.push_back(std::to_string(levene_failures) +
                            " variable(s) fail Levene's test; Welch ANOVA is used for post-hocs");
    if (rep.box_m && rep.box_m->test.p_value < config.family_alpha)
        rep.notes.push_back("Box's M rejects equal covariance matrices; Pillai's trace is reported for robustness");
    if (!rep.box_m_error.empty())
        rep.notes.push_back("Box's M could not be computed: " + rep.box_m_error);
    return rep;
}

} // namespace lexcontrast

#endif
