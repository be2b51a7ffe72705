#ifndef LEXCONTRAST_CONFIG_HPP
#define LEXCONTRAST_CONFIG_HPP

// Flat key-value run configuration:
//
//   # comment
//   transcripts = data/talks.csv
//   normality.skew_limit = 2
//
// Command-line `--key value` pairs override file values.

#include <lexcontrast/csv.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/unicode.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace lexcontrast {

/// Every recognised key with its default ("" = unset).
inline const std::map<std::string, std::string>& config_defaults()
{
    static const std::map<std::string, std::string> defaults{
        // inputs
        {"transcripts", ""},
        {"transcripts_format", "csv"},
        {"metadata", ""},
        {"lexicon", ""},
        {"pos_annotations", ""},
        {"corpus", ""},
        {"matrix", ""},
        {"counts", ""},
        {"out_dir", "out"},
        {"seed", "42"},
        {"significant_digits", "6"},
        // corpus_ingest
        {"dedup_policy", "first"},
        // tokenizer
        {"tokenizer.strip_stage_directions", "true"},
        {"tokenizer.keep_hyphenated", "true"},
        // log odds
        {"log_odds.alpha0", "1"},
        {"log_odds.min_count", "0"},
        {"log_odds.top_k", "10"},
        // assumption pipeline
        {"low_mean_threshold", "20"},
        {"liwc.low_mean_threshold", "20"},
        {"pos.low_mean_threshold", "10"},
        {"normality.skew_limit", "2"},
        {"normality.kurt_limit", "7"},
        {"collinearity_cutoff", "0.9"},
        {"mahalanobis_quantile", "0.999"},
        {"family_alpha", "0.05"},
        {"posthoc_family_size", "0"},
        {"levene_center", "median"},
        // classifier probe
        {"k", "5"},
        {"min_token_count", "2"},
        {"l2_lambda", "0.001"},
        {"max_iters", "5000"},
        {"tolerance", "1e-6"},
    };
    return defaults;
}

class RunConfig {
public:
    RunConfig() : values_(config_defaults()) {}

    static RunConfig parse(std::string_view content)
    {
        RunConfig cfg;
        std::istringstream in{std::string(content)};
        std::string raw;
        std::size_t line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            auto line = unicode::trim(raw);
            if (line.empty() || line.front() == '#')
                continue;
            auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("config: expected 'key = value'", line_no);
            cfg.set(std::string(unicode::trim(line.substr(0, eq))), std::string(unicode::trim(line.substr(eq + 1))));
        }
        return cfg;
    }

    static RunConfig load(const std::string& path) { return parse(csv::read_file(path)); }

    void set(const std::string& key, const std::string& value)
    {
        if (!config_defaults().count(key))
            throw Error("unknown configuration key: " + key);
        values_[key] = value;
        explicit_.insert(key);
    }

    bool is_set(const std::string& key) const { return explicit_.count(key) > 0; }

    const std::string& str(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end())
            throw Error("unknown configuration key: " + key);
        return it->second;
    }

    std::optional<std::string> path(const std::string& key) const
    {
        const auto& v = str(key);
        return v.empty() ? std::nullopt : std::optional<std::string>(v);
    }

    double number(const std::string& key) const
    {
        const auto& v = str(key);
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used == v.size())
                return d;
        } catch (const std::exception&) {
        }
        throw Error("configuration key " + key + " is not a number: '" + v + "'");
    }

    std::int64_t integer(const std::string& key) const
    {
        const auto& v = str(key);
        try {
            std::size_t used = 0;
            long long d = std::stoll(v, &used);
            if (used == v.size())
                return d;
        } catch (const std::exception&) {
        }
        throw Error("configuration key " + key + " is not an integer: '" + v + "'");
    }

    std::uint64_t seed() const
    {
        auto v = integer("seed");
        if (v < 0)
            throw Error("seed must be non-negative");
        return static_cast<std::uint64_t>(v);
    }

    bool flag(const std::string& key) const
    {
        auto v = unicode::to_lower(str(key));
        if (v == "true" || v == "1" || v == "yes" || v == "on")
            return true;
        if (v == "false" || v == "0" || v == "no" || v == "off")
            return false;
        throw Error("configuration key " + key + " is not a boolean: '" + v + "'");
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> explicit_;
};

} // namespace lexcontrast

#endif
