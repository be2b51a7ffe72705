#ifndef LEXCONTRAST_MV_STATS_HPP
#define LEXCONTRAST_MV_STATS_HPP

// Statistical kernel: descriptive statistics, Pearson correlation, Mahalanobis
// outliers, Levene, Box's M, one-way MANOVA (Pillai), Welch ANOVA, Bonferroni.
//
// All functions are pure. Observations are rows of an Eigen matrix; group
// membership is given as one label per row, groups ordered by first appearance.

#include <lexcontrast/distributions.hpp>
#include <lexcontrast/error.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lexcontrast::stats {

struct TestResult {
    double statistic = 0;
    double df1 = 0;
    std::optional<double> df2;
    double p_value = 1;
    std::string method;
};

// ---------------------------------------------------------------------------
// Descriptive statistics

struct Descriptive {
    std::size_t n = 0;
    double mean = 0;
    double min = 0;
    double max = 0;
    std::optional<double> sd; ///< sample sd (n - 1); absent for n < 2
};

inline Descriptive descriptive_stats(std::span<const double> x)
{
    if (x.empty())
        throw Error("descriptive statistics of an empty vector");
    Descriptive d;
    d.n = x.size();
    double sum = 0;
    for (double v : x)
        sum += v;
    d.mean = sum / static_cast<double>(d.n);
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    d.min = *lo;
    d.max = *hi;
    if (d.n >= 2) {
        double ss = 0, comp = 0;
        for (double v : x) {
            ss += (v - d.mean) * (v - d.mean);
            comp += v - d.mean;
        }
        // corrected two-pass formula
        ss -= comp * comp / static_cast<double>(d.n);
        d.sd = std::sqrt(std::max(ss, 0.0) / static_cast<double>(d.n - 1));
    }
    return d;
}

inline double mean(std::span<const double> x) { return descriptive_stats(x).mean; }

/// Quantile with linear interpolation between order statistics (Hyndman-Fan type 7).
inline double quantile(std::vector<double> x, double prob)
{
    if (x.empty())
        throw Error("quantile of an empty vector");
    std::sort(x.begin(), x.end());
    double h = (static_cast<double>(x.size()) - 1) * prob;
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

inline double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

struct Shape {
    double skewness;        ///< g1 = m3 / m2^1.5
    double excess_kurtosis; ///< g2 = m4 / m2^2 - 3
};

/// Moment-based sample skewness and excess kurtosis. NaN for constant input.
inline Shape sample_shape(std::span<const double> x)
{
    if (x.empty())
        throw Error("shape statistics of an empty vector");
    double n = static_cast<double>(x.size());
    double m = 0;
    for (double v : x)
        m += v;
    m /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        double d = v - m, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 <= 0)
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

// ---------------------------------------------------------------------------
// Pearson correlation

struct Correlation {
    double r = 0;
    std::size_t n = 0;
    double df = 0;
    double t = 0;
    double p_two_tailed = 1;
    double confidence = 0.95;
    double ci_low = -1;
    double ci_high = 1;
};

/// Product-moment r without input validation; NaN when either input is constant.
inline double pearson_r(std::span<const double> x, std::span<const double> y)
{
    double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0 || syy <= 0)
        return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Significance test (t with n - 2 df) and Fisher-z confidence interval for a given r.
inline Correlation correlation_inference(double r, std::size_t n, double confidence = 0.95)
{
    if (n < 3)
        throw Error("correlation inference needs at least 3 pairs");
    if (!(confidence > 0 && confidence < 1))
        throw Error("confidence level must lie in (0, 1)");
    Correlation c;
    c.r = r;
    c.n = n;
    c.df = static_cast<double>(n) - 2;
    c.confidence = confidence;
    if (std::abs(r) >= 1) {
        c.t = std::copysign(std::numeric_limits<double>::infinity(), r);
        c.p_two_tailed = 0;
        c.ci_low = c.ci_high = r;
        return c;
    }
    c.t = r * std::sqrt(c.df / (1 - r * r));
    c.p_two_tailed = dist::students_t_two_tailed(c.t, c.df);
    if (n > 3) {
        double z = std::atanh(r);
        double half = dist::normal_quantile(1 - (1 - confidence) / 2) / std::sqrt(static_cast<double>(n) - 3);
        c.ci_low = std::tanh(z - half);
        c.ci_high = std::tanh(z + half);
    }
    return c;
}

inline Correlation pearson_correlation(std::span<const double> x, std::span<const double> y,
                                       double confidence = 0.95)
{
    if (x.size() != y.size())
        throw Error("pearson correlation: vectors differ in length");
    if (x.size() < 3)
        throw Error("pearson correlation: at least 3 pairs required");
    double r = pearson_r(x, y);
    if (std::isnan(r))
        throw NumericalError("pearson correlation: constant input, r is undefined");
    return correlation_inference(r, x.size(), confidence);
}

// ---------------------------------------------------------------------------
// Grouping helpers

struct Groups {
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> rows;
};

inline Groups split_groups(std::span<const std::string> labels)
{
    Groups g;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find(g.names.begin(), g.names.end(), labels[i]);
        if (it == g.names.end()) {
            g.names.push_back(labels[i]);
            g.rows.emplace_back();
            it = g.names.end() - 1;
        }
        g.rows[static_cast<std::size_t>(it - g.names.begin())].push_back(i);
    }
    return g;
}

namespace detail {

inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

inline Eigen::MatrixXd centered(const Eigen::MatrixXd& x)
{
    return x.rowwise() - x.colwise().mean();
}

// Cholesky of a symmetric matrix after scaling it to unit diagonal; the scaling
// keeps the conditioning check about correlation structure, not measurement units.
struct ScaledCholesky {
    Eigen::VectorXd scale; // D^{-1/2}
    Eigen::LLT<Eigen::MatrixXd> llt;
    double rcond = 0;
};

inline constexpr double min_rcond = 1e-12;

inline std::optional<ScaledCholesky> scaled_cholesky(const Eigen::MatrixXd& s)
{
    Eigen::VectorXd diag = s.diagonal();
    if ((diag.array() <= 0).any() || !diag.allFinite())
        return std::nullopt;
    ScaledCholesky out;
    out.scale = diag.array().rsqrt();
    Eigen::MatrixXd scaled = out.scale.asDiagonal() * s * out.scale.asDiagonal();
    out.llt.compute(scaled);
    if (out.llt.info() != Eigen::Success)
        return std::nullopt;
    out.rcond = out.llt.rcond();
    if (!(out.rcond >= min_rcond))
        return std::nullopt;
    return out;
}

inline double scaled_log_det(const ScaledCholesky& c)
{
    return 2.0 * c.llt.matrixLLT().diagonal().array().log().sum();
}

inline TestResult one_way_anova(const std::vector<std::vector<double>>& groups, std::string method)
{
    std::size_t total = 0;
    double grand = 0;
    for (const auto& g : groups) {
        total += g.size();
        for (double v : g)
            grand += v;
    }
    grand /= static_cast<double>(total);
    double ssb = 0, ssw = 0;
    for (const auto& g : groups) {
        double m = 0;
        for (double v : g)
            m += v;
        m /= static_cast<double>(g.size());
        ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        for (double v : g)
            ssw += (v - m) * (v - m);
    }
    TestResult r;
    r.method = std::move(method);
    r.df1 = static_cast<double>(groups.size()) - 1;
    r.df2 = static_cast<double>(total - groups.size());
    if (ssb <= 0) {
        r.statistic = 0;
        r.p_value = 1;
    } else if (ssw <= 0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0;
    } else {
        r.statistic = (ssb / r.df1) / (ssw / *r.df2);
        r.p_value = dist::fisher_f(r.statistic, r.df1, *r.df2).upper;
    }
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Mahalanobis outliers

struct MahalanobisReport {
    std::vector<double> distances; ///< squared distances D²
    double quantile = 0.999;
    double cutoff = 0;
    std::vector<bool> outlier_flags;

    std::size_t outlier_count() const
    {
        return static_cast<std::size_t>(std::count(outlier_flags.begin(), outlier_flags.end(), true));
    }
};

/// D²_i = (x_i - mean)' S^-1 (x_i - mean) with S the sample covariance; rows with
/// D² above the chi-square(p) quantile are flagged.
inline MahalanobisReport mahalanobis_outliers(const Eigen::MatrixXd& x, double quantile = 0.999)
{
    const auto n = x.rows(), p = x.cols();
    if (p < 1 || n <= p)
        throw Error("mahalanobis: need more observations than variables");
    Eigen::MatrixXd xc = detail::centered(x);
    Eigen::MatrixXd cov = (xc.transpose() * xc) / static_cast<double>(n - 1);
    auto chol = detail::scaled_cholesky(cov);
    if (!chol)
        throw NumericalError("mahalanobis: covariance matrix is singular; screen variables first");
    Eigen::MatrixXd z = (xc * chol->scale.asDiagonal()).transpose();
    chol->llt.matrixL().solveInPlace(z);

    MahalanobisReport rep;
    rep.quantile = quantile;
    rep.cutoff = dist::chi_square_quantile(quantile, static_cast<double>(p));
    rep.distances.resize(static_cast<std::size_t>(n));
    rep.outlier_flags.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double d2 = z.col(i).squaredNorm();
        rep.distances[static_cast<std::size_t>(i)] = d2;
        rep.outlier_flags[static_cast<std::size_t>(i)] = d2 > rep.cutoff;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Levene / Brown-Forsythe

enum class LeveneCenter { median, mean };

/// One-way ANOVA on absolute deviations from each group's center.
inline TestResult levene_test(const std::vector<std::vector<double>>& groups,
                              LeveneCenter center = LeveneCenter::median)
{
    if (groups.size() < 2)
        throw Error("levene: at least two groups required");
    std::vector<std::vector<double>> dev;
    dev.reserve(groups.size());
    for (const auto& g : groups) {
        if (g.size() < 2)
            throw Error("levene: every group needs at least two observations");
        double c = center == LeveneCenter::median ? median(g) : mean(g);
        auto& d = dev.emplace_back();
        d.reserve(g.size());
        for (double v : g)
            d.push_back(std::abs(v - c));
    }
    return detail::one_way_anova(dev, center == LeveneCenter::median ? "levene_median" : "levene_mean");
}

// ---------------------------------------------------------------------------
// Box's M

struct BoxMResult {
    double m = 0;          ///< (N-g) ln|S_pooled| - Σ (n_j-1) ln|S_j|
    double correction = 0; ///< c in the chi-square approximation M (1 - c)
    TestResult test;       ///< statistic = M (1 - c), chi-square with p(p+1)(g-1)/2 df
};

inline BoxMResult box_m_test(const std::vector<Eigen::MatrixXd>& groups)
{
    const std::size_t g = groups.size();
    if (g < 2)
        throw Error("box's M: at least two groups required");
    const auto p = groups.front().cols();
    double total_df = 0, inv_sum = 0;
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(p, p);
    std::vector<Eigen::MatrixXd> covs;
    for (const auto& x : groups) {
        if (x.cols() != p)
            throw Error("box's M: groups differ in variable count");
        if (x.rows() <= p)
            throw Error("box's M: every group needs more observations than variables");
        Eigen::MatrixXd xc = detail::centered(x);
        double dfj = static_cast<double>(x.rows() - 1);
        covs.push_back(xc.transpose() * xc / dfj);
        pooled += xc.transpose() * xc;
        total_df += dfj;
        inv_sum += 1.0 / dfj;
    }
    pooled /= total_df;

    // common diagonal scaling; its log-determinant contributions cancel in M
    Eigen::VectorXd diag = pooled.diagonal();
    if ((diag.array() <= 0).any())
        throw NumericalError("box's M: pooled covariance is not positive definite");
    Eigen::VectorXd scale = diag.array().rsqrt();
    auto log_det = [&](const Eigen::MatrixXd& s, const char* what) {
        Eigen::LLT<Eigen::MatrixXd> llt(scale.asDiagonal() * s * scale.asDiagonal());
        if (llt.info() != Eigen::Success || llt.rcond() < detail::min_rcond)
            throw NumericalError(std::string("box's M: ") + what + " covariance is not positive definite");
        return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    };

    double m = total_df * log_det(pooled, "pooled");
    for (std::size_t j = 0; j < g; ++j)
        m -= static_cast<double>(groups[j].rows() - 1) * log_det(covs[j], "group");
    m = std::max(m, 0.0); // non-negative in exact arithmetic

    const double pd = static_cast<double>(p), gd = static_cast<double>(g);
    BoxMResult res;
    res.m = m;
    res.correction = (inv_sum - 1.0 / total_df) * (2 * pd * pd + 3 * pd - 1) / (6 * (pd + 1) * (gd - 1));
    res.test.method = "box_m";
    res.test.statistic = m * (1 - res.correction);
    res.test.df1 = pd * (pd + 1) * (gd - 1) / 2;
    res.test.p_value = dist::chi_square(res.test.statistic, res.test.df1).upper;
    return res;
}

// ---------------------------------------------------------------------------
// One-way MANOVA, Pillai's trace

struct ManovaResult {
    double pillai = 0;
    double f_approx = 0;
    double df1 = 0;
    double df2 = 0;
    double p_value = 1;
    double eta_squared = 0; ///< partial η² = V / s
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t groups = 0;
};

/// F approximation for a given Pillai trace: s = min(p, g-1),
/// F = (2ν + s + 1)/(2μ + s + 1) · V/(s - V). For two groups this is
/// ((n-p-1)/p) · V/(1-V) on (p, n-p-1) df.
inline ManovaResult pillai_f_approximation(double pillai, std::size_t n, std::size_t p, std::size_t groups)
{
    if (groups < 2 || p < 1)
        throw Error("manova: need at least two groups and one variable");
    if (n <= p + groups - 1)
        throw Error("manova: need n > p + g - 1 observations");
    const double q = static_cast<double>(groups - 1);
    const double pd = static_cast<double>(p);
    const double s = std::min(pd, q);
    const double mu = 0.5 * (std::abs(pd - q) - 1);
    const double nu = 0.5 * (static_cast<double>(n - groups) - pd - 1);
    const double t1 = 2 * mu + s + 1, t2 = 2 * nu + s + 1;

    ManovaResult r;
    r.n = n;
    r.p = p;
    r.groups = groups;
    r.pillai = std::clamp(pillai, 0.0, s);
    r.df1 = s * t1;
    r.df2 = s * t2;
    r.eta_squared = r.pillai / s;
    if (r.pillai >= s) {
        r.f_approx = std::numeric_limits<double>::infinity();
        r.p_value = 0;
    } else {
        r.f_approx = (t2 / t1) * r.pillai / (s - r.pillai);
        r.p_value = dist::fisher_f(r.f_approx, r.df1, r.df2).upper;
    }
    return r;
}

/// V = trace(H (H + E)^-1) with H the between-group and E the within-group SSCP.
inline ManovaResult manova_pillai(const Eigen::MatrixXd& x, std::span<const std::string> labels)
{
    if (static_cast<std::size_t>(x.rows()) != labels.size())
        throw Error("manova: label count differs from row count");
    const auto n = static_cast<std::size_t>(x.rows());
    const auto p = static_cast<std::size_t>(x.cols());
    auto groups = split_groups(labels);
    if (groups.names.size() < 2)
        throw Error("manova: at least two groups required");
    if (p + 1 >= n)
        throw Error("manova: too many variables for the number of observations");
    if (n <= p + groups.names.size() - 1)
        throw Error("manova: need n > p + g - 1 observations");

    Eigen::RowVectorXd grand = x.colwise().mean();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    for (const auto& rows : groups.rows) {
        Eigen::MatrixXd xg = detail::take_rows(x, rows);
        Eigen::RowVectorXd mg = xg.colwise().mean();
        Eigen::RowVectorXd d = mg - grand;
        h += static_cast<double>(rows.size()) * d.transpose() * d;
        Eigen::MatrixXd xc = xg.rowwise() - mg;
        e += xc.transpose() * xc;
    }
    Eigen::MatrixXd t = h + e;
    auto chol = detail::scaled_cholesky(t);
    if (!chol)
        throw NumericalError("manova: total SSCP matrix (H + E) is singular");
    Eigen::MatrixXd hs = chol->scale.asDiagonal() * h * chol->scale.asDiagonal();
    double pillai = chol->llt.solve(hs).trace();
    return pillai_f_approximation(pillai, n, p, groups.names.size());
}

// ---------------------------------------------------------------------------
// Welch ANOVA

/// Heteroscedastic one-way ANOVA with weights n_j / s_j².
inline TestResult welch_anova(const std::vector<std::vector<double>>& groups)
{
    const std::size_t k = groups.size();
    if (k < 2)
        throw Error("welch anova: at least two groups required");
    std::vector<double> w(k), m(k), nj(k);
    double wsum = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (groups[j].size() < 2)
            throw Error("welch anova: every group needs at least two observations");
        auto d = descriptive_stats(groups[j]);
        if (!(*d.sd > 0))
            throw NumericalError("welch anova: a group has zero variance");
        nj[j] = static_cast<double>(d.n);
        m[j] = d.mean;
        w[j] = nj[j] / (*d.sd * *d.sd);
        wsum += w[j];
    }
    double wmean = 0;
    for (std::size_t j = 0; j < k; ++j)
        wmean += w[j] * m[j];
    wmean /= wsum;
    double a = 0, lambda = 0;
    for (std::size_t j = 0; j < k; ++j) {
        a += w[j] * (m[j] - wmean) * (m[j] - wmean);
        double f = 1 - w[j] / wsum;
        lambda += f * f / (nj[j] - 1);
    }
    const double kd = static_cast<double>(k);
    a /= kd - 1;
    double b = 1 + 2 * (kd - 2) / (kd * kd - 1) * lambda;

    TestResult r;
    r.method = "welch_anova";
    r.statistic = a / b;
    r.df1 = kd - 1;
    r.df2 = (kd * kd - 1) / (3 * lambda);
    r.p_value = r.statistic > 0 ? dist::fisher_f(r.statistic, r.df1, *r.df2).upper : 1.0;
    return r;
}

// ---------------------------------------------------------------------------

inline double bonferroni_adjust(double family_alpha, std::size_t tests)
{
    if (tests < 1)
        throw Error("bonferroni: at least one test required");
    if (!(family_alpha > 0 && family_alpha < 1))
        throw Error("bonferroni: family alpha must lie in (0, 1)");
    return family_alpha / static_cast<double>(tests);
}

} // namespace lexcontrast::stats

#endif
