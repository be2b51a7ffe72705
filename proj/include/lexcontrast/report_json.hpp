#ifndef LEXCONTRAST_REPORT_JSON_HPP
#define LEXCONTRAST_REPORT_JSON_HPP

// JSON encodings of the analysis results. Numbers are rounded to a fixed count of
// significant digits so reports are stable across platforms; integers stay exact.

#include <lexcontrast/assumption_pipeline.hpp>
#include <lexcontrast/classifier_probe.hpp>
#include <lexcontrast/count_matrix.hpp>
#include <lexcontrast/log_odds.hpp>
#include <lexcontrast/mv_stats.hpp>
#include <lexcontrast/text_features.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>

namespace lexcontrast::report {

using json = nlohmann::ordered_json;

/// Rounds to `digits` significant digits; non-finite values become null.
inline json num(double v, int digits = 6)
{
    if (!std::isfinite(v))
        return nullptr;
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return static_cast<std::int64_t>(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::stod(buf);
}

inline json num(const std::optional<double>& v, int digits = 6) { return v ? num(*v, digits) : json(nullptr); }

inline json to_json(const stats::TestResult& t, int d)
{
    json j;
    j["method"] = t.method;
    j["statistic"] = num(t.statistic, d);
    j["df1"] = num(t.df1, d);
    j["df2"] = num(t.df2, d);
    j["p_value"] = num(t.p_value, d);
    return j;
}

inline json to_json(const stats::Descriptive& s, int d)
{
    return json{{"n", s.n}, {"mean", num(s.mean, d)}, {"min", num(s.min, d)}, {"max", num(s.max, d)}, {"sd", num(s.sd, d)}};
}

inline json to_json(const stats::Correlation& c, int d)
{
    return json{{"r", num(c.r, d)},           {"n", c.n},
                {"df", num(c.df, d)},         {"t", num(c.t, d)},
                {"p_two_tailed", num(c.p_two_tailed, d)}, {"confidence", num(c.confidence, d)},
                {"ci_low", num(c.ci_low, d)}, {"ci_high", num(c.ci_high, d)}};
}

inline json to_json(const stats::ManovaResult& m, int d)
{
    return json{{"pillai", num(m.pillai, d)}, {"f_approx", num(m.f_approx, d)}, {"df1", num(m.df1, d)},
                {"df2", num(m.df2, d)},       {"p_value", num(m.p_value, d)},   {"eta_squared", num(m.eta_squared, d)},
                {"n", m.n},                   {"p", m.p},                       {"groups", m.groups}};
}

inline json to_json(const std::vector<GroupWordCounts>& stats, int d)
{
    json j = json::array();
    for (const auto& g : stats) {
        json e = to_json(g.stats, d);
        e["group"] = g.group;
        j.push_back(std::move(e));
    }
    return j;
}

inline json to_json(const WorkflowReport& r, int d)
{
    json j;
    j["groups"] = r.groups;
    j["n"] = r.n;

    json cfg;
    cfg["low_mean_threshold"] = num(r.config.low_mean_threshold, d);
    cfg["normality.skew_limit"] = num(r.config.skew_limit, d);
    cfg["normality.kurt_limit"] = num(r.config.kurt_limit, d);
    cfg["collinearity_cutoff"] = num(r.config.collinearity_cutoff, d);
    cfg["mahalanobis_quantile"] = num(r.config.mahalanobis_quantile, d);
    cfg["family_alpha"] = num(r.config.family_alpha, d);
    cfg["posthoc_family_size"] = r.config.posthoc_family_size;
    cfg["levene_center"] = r.config.levene_center == stats::LeveneCenter::median ? "median" : "mean";
    cfg["seed"] = r.config.seed;
    j["config"] = cfg;

    json screening;
    json low = json::array();
    for (const auto& x : r.screening.dropped_low_mean)
        low.push_back({{"variable", x.variable}, {"mean", num(x.mean, d)}});
    json nn = json::array();
    for (const auto& x : r.screening.dropped_non_normal)
        nn.push_back({{"variable", x.variable}, {"group", x.group}, {"skewness", num(x.skewness, d)},
                      {"excess_kurtosis", num(x.excess_kurtosis, d)}});
    json col = json::array();
    for (const auto& x : r.screening.dropped_collinear)
        col.push_back({{"kept", x.kept}, {"dropped", x.dropped}, {"r", num(x.r, d)}});
    screening["dropped_low_mean"] = low;
    screening["dropped_non_normal"] = nn;
    screening["dropped_collinear"] = col;
    screening["retained"] = r.screening.retained;
    j["screening"] = screening;

    json pairs = json::array();
    for (const auto& p : r.strongest_correlations)
        pairs.push_back({{"a", p.a}, {"b", p.b}, {"r", num(p.r, d)}});
    j["strongest_correlations"] = pairs;

    if (r.box_m) {
        json b = to_json(r.box_m->test, d);
        b["m"] = num(r.box_m->m, d);
        b["correction"] = num(r.box_m->correction, d);
        j["box_m"] = b;
    } else {
        j["box_m"] = {{"error", r.box_m_error}};
    }

    json out;
    out["quantile"] = num(r.outliers.quantile, d);
    out["cutoff"] = num(r.outliers.cutoff, d);
    out["count"] = r.outliers.outlier_count();
    json dist = json::array();
    for (double v : r.outliers.distances)
        dist.push_back(num(v, d));
    out["distances"] = dist;
    j["outliers"] = out;

    j["manova_with_outliers"] = to_json(r.manova_with_outliers, d);
    j["manova_without_outliers"] = to_json(r.manova_without_outliers, d);
    j["family_size"] = r.family_size;
    j["adjusted_alpha"] = num(r.adjusted_alpha, d);

    json vars = json::array();
    for (const auto& v : r.variables) {
        json e;
        e["variable"] = v.variable;
        e["levene"] = to_json(v.levene, d);
        e["welch"] = to_json(v.welch, d);
        e["significant"] = v.significant;
        json gs = json::array();
        for (const auto& g : v.groups)
            gs.push_back({{"group", g.group}, {"mean", num(g.mean, d)}, {"sd", num(g.sd, d)}});
        e["groups"] = gs;
        vars.push_back(std::move(e));
    }
    j["posthoc"] = vars;

    json hist = json::array();
    for (const auto& h : r.histograms)
        hist.push_back({{"variable", h.variable}, {"group", h.group}, {"lower", num(h.lower, d)},
                        {"bin_width", num(h.bin_width, d)}, {"counts", h.counts}});
    j["histograms"] = hist;
    j["notes"] = r.notes;
    return j;
}

inline json to_json(const ClassMetrics& m, int d)
{
    json f1 = json::array();
    for (double v : m.f1)
        f1.push_back(num(v, d));
    return json{{"classes", m.classes},
                {"confusion", m.confusion},
                {"accuracy", num(m.accuracy, d)},
                {"macro_f1", num(m.macro_f1, d)},
                {"f1", f1}};
}

inline json to_json(const CvReport& r, int d)
{
    json j;
    j["k"] = r.k;
    j["seed"] = r.seed;
    j["classes"] = r.classes;
    j["mean_accuracy"] = num(r.mean_accuracy, d);
    j["mean_macro_f1"] = num(r.mean_macro_f1, d);
    j["stratified"] = true;
    j["upsampling"] = "minority duplicated with replacement to exact balance, training folds only";
    json folds = json::array();
    for (const auto& f : r.folds) {
        json e;
        e["fold"] = f.fold;
        e["train_size"] = f.train_size;
        e["train_size_upsampled"] = f.train_size_upsampled;
        e["train_class_counts"] = f.train_class_counts;
        e["eval_size"] = f.eval_size;
        e["eval_doc_ids"] = f.eval_doc_ids;
        e["metrics"] = to_json(f.metrics, d);
        folds.push_back(std::move(e));
    }
    j["folds"] = folds;
    return j;
}

/// Top-k lists for both sides of a log-odds table.
inline json top_k_json(const LogOddsTable& t, std::size_t k, int d)
{
    auto side = [&](Side s) {
        json arr = json::array();
        for (const auto& e : top_k_entries(t, k, s))
            arr.push_back({{"term", e.term}, {"z", num(e.z, d)}, {"delta", num(e.delta, d)},
                           {"count_a", e.count_a}, {"count_b", e.count_b}});
        return arr;
    };
    return json{{"n", t.n}, {"alpha0", num(t.alpha0, d)}, {"k", k}, {"group_a", t.group_a},
                {"group_b", t.group_b}, {"top_a", side(Side::A)}, {"top_b", side(Side::B)}};
}

inline std::string log_odds_csv(const LogOddsTable& t, int d)
{
    std::vector<csv::Row> rows{{"term", "count_A", "count_B", "alpha_w", "delta", "variance", "z"}};
    for (const auto& e : sorted_by_z(t))
        rows.push_back({e.term, std::to_string(e.count_a), std::to_string(e.count_b), format_number(e.prior_alpha, d),
                        format_number(e.delta, d), format_number(e.variance, d), format_number(e.z, d)});
    return csv::format(rows);
}

inline std::string frequency_csv(const FrequencyTable& t)
{
    csv::Row header{"term"};
    for (const auto& g : t.groups)
        header.push_back("count_" + g);
    header.push_back("pooled");
    std::vector<csv::Row> rows{header};
    for (const auto& [term, c] : t.counts) {
        csv::Row r{term};
        std::int64_t pooled = 0;
        for (auto v : c) {
            r.push_back(std::to_string(v));
            pooled += v;
        }
        r.push_back(std::to_string(pooled));
        rows.push_back(std::move(r));
    }
    return csv::format(rows);
}

/// Per-variable table: category, example, then mean/sd per group and the significance flag.
inline std::string posthoc_csv(const WorkflowReport& r, const Lexicon* lexicon, int d)
{
    csv::Row header{"category", "example"};
    for (const auto& g : r.groups)
        header.push_back("mean_" + g);
    for (const auto& g : r.groups)
        header.push_back("sd_" + g);
    for (const char* h : {"welch_f", "df1", "df2", "p_value", "significant"})
        header.emplace_back(h);
    std::vector<csv::Row> rows{header};
    for (const auto& v : r.variables) {
        std::string example;
        if (lexicon) {
            for (const auto& c : lexicon->categories())
                if (c.name == v.variable) {
                    for (const auto& w : lexicon->examples(c.id)) {
                        if (!example.empty())
                            example += ", ";
                        example += w;
                    }
                    break;
                }
        }
        csv::Row row{v.variable, example};
        for (const auto& g : v.groups)
            row.push_back(format_number(g.mean, d));
        for (const auto& g : v.groups)
            row.push_back(g.sd ? format_number(*g.sd, d) : "");
        row.push_back(format_number(v.welch.statistic, d));
        row.push_back(format_number(v.welch.df1, d));
        row.push_back(v.welch.df2 ? format_number(*v.welch.df2, d) : "");
        row.push_back(format_number(v.welch.p_value, d));
        row.push_back(v.significant ? "true" : "false");
        rows.push_back(std::move(row));
    }
    return csv::format(rows);
}

} // namespace lexcontrast::report

#endif
