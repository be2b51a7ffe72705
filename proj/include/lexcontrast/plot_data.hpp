#ifndef LEXCONTRAST_PLOT_DATA_HPP
#define LEXCONTRAST_PLOT_DATA_HPP

// Plot-ready data series. Figures are not rendered; each export is a JSON document
// with a kind, labelled series and axis metadata that any plotting frontend can draw.

#include <lexcontrast/error.hpp>
#include <lexcontrast/mv_stats.hpp>
#include <lexcontrast/report_json.hpp>
#include <lexcontrast/text_features.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace lexcontrast {

struct BoxplotStats {
    double min = 0; ///< lower whisker end
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0; ///< upper whisker end
    std::vector<double> outliers;
};

/// Tukey box: whiskers reach the most extreme points within 1.5 IQR of the quartiles.
inline BoxplotStats boxplot_stats(std::vector<double> x)
{
    if (x.empty())
        throw Error("boxplot: empty series");
    std::sort(x.begin(), x.end());
    BoxplotStats b;
    b.q1 = stats::quantile(x, 0.25);
    b.median = stats::quantile(x, 0.5);
    b.q3 = stats::quantile(x, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo = b.q1 - 1.5 * iqr, hi = b.q3 + 1.5 * iqr;
    b.min = b.q3;
    b.max = b.q1;
    for (double v : x) {
        if (v < lo || v > hi) {
            b.outliers.push_back(v);
            continue;
        }
        b.min = std::min(b.min, v);
        b.max = std::max(b.max, v);
    }
    return b;
}

struct ScatterPoint {
    std::string term;
    double x = 0;
    double y = 0;
};

/// Terms used by both groups, each placed at log10((count + 1) / (group total + V))
/// where V is the vocabulary size of the table.
inline std::vector<ScatterPoint> frequency_scatter(const FrequencyTable& table, std::size_t ga, std::size_t gb)
{
    const double a_total = static_cast<double>(table.group_total(ga));
    const double b_total = static_cast<double>(table.group_total(gb));
    const double v = static_cast<double>(table.counts.size());
    std::vector<ScatterPoint> out;
    for (const auto& [term, c] : table.counts) {
        if (c[ga] <= 0 || c[gb] <= 0)
            continue;
        out.push_back({term, std::log10((static_cast<double>(c[ga]) + 1) / (a_total + v)),
                       std::log10((static_cast<double>(c[gb]) + 1) / (b_total + v))});
    }
    return out;
}

namespace plot {

using json = report::json;

inline json axis(const std::string& label, bool log_scale) { return json{{"label", label}, {"log_scale", log_scale}}; }

inline json boxplot(const std::vector<std::string>& groups, const std::vector<std::vector<double>>& values,
                    const std::string& value_label, int d)
{
    json series = json::array();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto b = boxplot_stats(values[g]);
        json outliers = json::array();
        for (double v : b.outliers)
            outliers.push_back(report::num(v, d));
        series.push_back({{"label", groups[g]},
                          {"n", values[g].size()},
                          {"min", report::num(b.min, d)},
                          {"q1", report::num(b.q1, d)},
                          {"median", report::num(b.median, d)},
                          {"q3", report::num(b.q3, d)},
                          {"max", report::num(b.max, d)},
                          {"outliers", outliers}});
    }
    return json{{"kind", "boxplot"},
                {"whisker_rule", "tukey_1.5_iqr"},
                {"x_axis", axis("group", false)},
                {"y_axis", axis(value_label, false)},
                {"series", series}};
}

inline json scatter(const std::vector<ScatterPoint>& points, const std::string& group_a, const std::string& group_b,
                    int d)
{
    json pts = json::array();
    for (const auto& p : points)
        pts.push_back({{"term", p.term}, {"x", report::num(p.x, d)}, {"y", report::num(p.y, d)}});
    return json{{"kind", "scatter"},
                {"x_axis", axis("log10 relative frequency (" + group_a + ")", true)},
                {"y_axis", axis("log10 relative frequency (" + group_b + ")", true)},
                {"series", json::array({json{{"label", group_a + " vs " + group_b}, {"points", pts}}})}};
}

/// Bars from a top-k document produced by the log-odds stage.
inline json top_k_bars(const json& top_k, const std::string& label)
{
    json series = json::array();
    for (const auto& [key, group_key] : {std::pair{"top_a", "group_a"}, std::pair{"top_b", "group_b"}}) {
        json bars = json::array();
        for (const auto& e : top_k.at(key))
            bars.push_back({{"term", e.at("term")}, {"z", e.at("z")}});
        series.push_back({{"label", top_k.at(group_key)}, {"bars", bars}});
    }
    return json{{"kind", "barchart"},
                {"title", label},
                {"k", top_k.at("k")},
                {"x_axis", axis("weighted log odds z", false)},
                {"y_axis", axis("term", false)},
                {"series", series}};
}

/// Histogram bins copied from a workflow report.
inline json histograms(const json& workflow, const std::string& name)
{
    json series = json::array();
    for (const auto& h : workflow.at("histograms"))
        series.push_back({{"label", h.at("variable").get<std::string>() + " / " + h.at("group").get<std::string>()},
                          {"variable", h.at("variable")},
                          {"group", h.at("group")},
                          {"lower", h.at("lower")},
                          {"bin_width", h.at("bin_width")},
                          {"counts", h.at("counts")}});
    return json{{"kind", "histogram"},
                {"title", name},
                {"bin_rule", "sturges"},
                {"x_axis", axis("count per document", false)},
                {"y_axis", axis("documents", false)},
                {"series", series}};
}

} // namespace plot

} // namespace lexcontrast

#endif
