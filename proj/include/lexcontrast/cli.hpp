#ifndef LEXCONTRAST_CLI_HPP
#define LEXCONTRAST_CLI_HPP

// Command-line front end:
//
//   lexcontrast <ingest|features|logodds|manova|classify|report> [--config FILE]
//               [--seed N] [--out-dir DIR] [--<key> VALUE ...]
//
// Every subcommand writes its artifacts plus manifest_<subcommand>.json into the
// output directory. `report` gathers everything into <out-dir>/bundle.

#include <lexcontrast/artifacts.hpp>
#include <lexcontrast/assumption_pipeline.hpp>
#include <lexcontrast/classifier_probe.hpp>
#include <lexcontrast/config.hpp>
#include <lexcontrast/corpus.hpp>
#include <lexcontrast/count_matrix.hpp>
#include <lexcontrast/lexicon.hpp>
#include <lexcontrast/log_odds.hpp>
#include <lexcontrast/plot_data.hpp>
#include <lexcontrast/pos_annotations.hpp>
#include <lexcontrast/report_json.hpp>
#include <lexcontrast/text_features.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

namespace lexcontrast::cli {

namespace fs = std::filesystem;
using json = report::json;

inline const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"ingest", "features", "logodds", "manova", "classify", "report"};
    return names;
}

/// Shared state for one subcommand run.
struct Context {
    RunConfig config;
    fs::path out_dir;
    int digits = 6;
    RunRecorder recorder;

    Context(const std::string& subcommand, RunConfig cfg)
        : config(std::move(cfg)), out_dir(config.str("out_dir")),
          digits(static_cast<int>(config.integer("significant_digits"))), recorder(subcommand, out_dir, config)
    {
        if (digits < 1 || digits > 17)
            throw Error("significant_digits must be between 1 and 17");
    }

    TokenizerConfig tokenizer() const
    {
        return {config.flag("tokenizer.strip_stage_directions"), config.flag("tokenizer.keep_hyphenated")};
    }

    /// JSON artifact stamped with the run seed.
    json stamped(json body) const
    {
        json j;
        j["seed"] = config.seed();
        for (auto& [k, v] : body.items())
            j[k] = std::move(v);
        return j;
    }

    void write_json(const std::string& name, json body) { recorder.write_json(name, stamped(std::move(body))); }
};

inline void require_inputs_exist(const RunConfig& cfg)
{
    for (const char* key : {"transcripts", "metadata", "lexicon", "pos_annotations", "corpus", "matrix", "counts"})
        if (auto p = cfg.path(key); p && !fs::exists(*p))
            throw Error("input '" + std::string(key) + "' does not exist: " + *p);
}

struct IngestResult {
    AnnotatedCorpus corpus;
    json summary;
};

inline IngestResult ingest_corpus(Context& ctx)
{
    auto transcripts_path = ctx.config.path("transcripts");
    if (!transcripts_path)
        throw Error("ingest: configuration key 'transcripts' is required");
    auto format = parse_transcript_format(ctx.config.str("transcripts_format"));
    auto transcripts = parse_transcripts(ctx.recorder.read_input(*transcripts_path), format);
    std::vector<SpeakerRecord> metadata;
    if (auto m = ctx.config.path("metadata"))
        metadata = parse_speaker_metadata(ctx.recorder.read_input(*m));
    auto policy = parse_dedup_policy(ctx.config.str("dedup_policy"));

    auto joined = join_speaker_metadata(transcripts, metadata);
    auto deduped = dedup_one_per_speaker(joined, policy, ctx.tokenizer());
    auto known = filter_known_gender(deduped);

    json sizes;
    for (const auto& [g, n] : group_sizes(known))
        sizes[g] = n;
    json summary{{"transcripts_loaded", transcripts.size()},
                 {"metadata_records", metadata.size()},
                 {"joined", joined.size()},
                 {"dedup_policy", std::string(to_string(policy))},
                 {"after_dedup", deduped.size()},
                 {"after_gender_filter", known.size()},
                 {"group_sizes", sizes}};
    return {std::move(known), std::move(summary)};
}

/// The corpus for downstream stages: rebuilt from raw inputs when `transcripts`
/// is configured, otherwise read from `corpus` or <out-dir>/corpus.jsonl.
inline AnnotatedCorpus stage_corpus(Context& ctx, const std::string& stage)
{
    if (ctx.config.path("transcripts"))
        return ingest_corpus(ctx).corpus;
    std::string path = ctx.config.path("corpus").value_or((ctx.out_dir / "corpus.jsonl").string());
    if (!fs::exists(path))
        throw Error(stage + ": no corpus found at " + path + "; run `ingest` first or set 'transcripts'");
    return parse_corpus(ctx.recorder.read_input(path));
}

inline void run_ingest(Context& ctx)
{
    auto [corpus, summary] = ingest_corpus(ctx);
    ctx.recorder.write("corpus.jsonl", serialize_corpus(corpus));
    ctx.write_json("corpus_summary.json", std::move(summary));
}

inline void run_features(Context& ctx)
{
    auto corpus = stage_corpus(ctx, "features");
    auto tokenized = tokenize_corpus(corpus, ctx.tokenizer());
    const int d = ctx.digits;

    std::vector<csv::Row> wc{{"doc_id", "label", "tokens"}};
    for (std::size_t i = 0; i < tokenized.size(); ++i)
        wc.push_back({tokenized.doc_ids[i], tokenized.labels[i], std::to_string(tokenized.docs[i].size())});
    ctx.recorder.write("word_counts.csv", csv::format(wc));
    ctx.write_json("word_count_stats.json", json{{"groups", report::to_json(word_count_stats(tokenized), d)}});

    auto uni = ngram_frequencies(tokenized, 1);
    auto bi = ngram_frequencies(tokenized, 2);
    ctx.recorder.write("unigram_freq.csv", report::frequency_csv(uni));
    ctx.recorder.write("bigram_freq.csv", report::frequency_csv(bi));
    if (uni.groups.size() >= 2) {
        auto shared = shared_terms(uni);
        json corr{{"groups", {uni.groups[0], uni.groups[1]}}, {"shared_terms", shared.terms.size()}};
        try {
            corr["correlation"] = report::to_json(frequency_correlation(uni), d);
        } catch (const Error& e) {
            corr["error"] = e.what();
        }
        ctx.write_json("frequency_correlation.json", std::move(corr));
    }

    if (auto lex_path = ctx.config.path("lexicon")) {
        auto lexicon = parse_lexicon(ctx.recorder.read_input(*lex_path));
        auto m = build_count_matrix(corpus, lexicon_counts(tokenized, lexicon));
        ctx.recorder.write("liwc_matrix.csv", format_count_matrix(m, d));
        std::size_t stems = 0;
        for (const auto& e : lexicon.entries())
            stems += e.is_stem() ? 1 : 0;
        ctx.write_json("lexicon_summary.json", json{{"categories", lexicon.categories().size()},
                                                     {"entries", lexicon.entries().size()},
                                                     {"stem_entries", stems},
                                                     {"documents", m.rows()}});
    }
    if (auto pos_path = ctx.config.path("pos_annotations")) {
        std::set<std::string> known(tokenized.doc_ids.begin(), tokenized.doc_ids.end());
        auto ann = parse_pos_annotations(ctx.recorder.read_input(*pos_path), &known);
        auto m = build_count_matrix(corpus, pos_counts(ann));
        ctx.recorder.write("pos_matrix.csv", format_count_matrix(m, d));
        ctx.write_json("pos_summary.json",
                       json{{"tags", pos_tags.size()}, {"documents", m.rows()}, {"warnings", ann.warnings}});
    }
}

/// Frequency table from a CSV of term,count_<A>,count_<B>.
inline FrequencyTable parse_count_pairs(std::string_view content)
{
    auto rows = csv::parse(content);
    if (rows.empty() || rows[0].size() < 3 || rows[0][0] != "term")
        throw Error("counts: expected a header term,count_<group A>,count_<group B>");
    FrequencyTable t;
    for (std::size_t c = 1; c <= 2; ++c) {
        std::string g = rows[0][c];
        if (g.rfind("count_", 0) == 0)
            g = g.substr(6);
        t.groups.push_back(g);
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty())
            continue;
        if (row.size() < 3)
            throw ParseError("counts: row has too few fields", r + 1);
        std::vector<std::int64_t> c(2);
        for (std::size_t k = 0; k < 2; ++k) {
            std::size_t used = 0;
            try {
                c[k] = std::stoll(row[k + 1], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != row[k + 1].size() || c[k] < 0)
                throw ParseError("counts: '" + row[k + 1] + "' is not a non-negative integer", r + 1);
        }
        if (!t.counts.emplace(row[0], c).second)
            throw ParseError("counts: duplicate term '" + row[0] + "'", r + 1);
    }
    return t;
}

inline void run_logodds(Context& ctx)
{
    LogOddsOptions opt{ctx.config.number("log_odds.alpha0"), ctx.config.integer("log_odds.min_count")};
    auto top_k = ctx.config.integer("log_odds.top_k");
    if (top_k < 1)
        throw Error("log_odds.top_k must be at least 1");
    const int d = ctx.digits;
    auto emit = [&](const FrequencyTable& freq, const std::string& name) {
        auto table = weighted_log_odds(freq, opt);
        ctx.recorder.write("logodds_" + name + ".csv", report::log_odds_csv(table, d));
        ctx.write_json("topk_" + name + ".json", report::top_k_json(table, static_cast<std::size_t>(top_k), d));
    };
    if (auto counts = ctx.config.path("counts")) {
        emit(parse_count_pairs(ctx.recorder.read_input(*counts)), "unigram");
        return;
    }
    auto tokenized = tokenize_corpus(stage_corpus(ctx, "logodds"), ctx.tokenizer());
    emit(ngram_frequencies(tokenized, 1), "unigram");
    emit(ngram_frequencies(tokenized, 2), "bigram");
}

inline WorkflowConfig workflow_config(const RunConfig& cfg, const std::string& threshold_key)
{
    WorkflowConfig w;
    w.low_mean_threshold = cfg.number(threshold_key);
    w.skew_limit = cfg.number("normality.skew_limit");
    w.kurt_limit = cfg.number("normality.kurt_limit");
    w.collinearity_cutoff = cfg.number("collinearity_cutoff");
    w.mahalanobis_quantile = cfg.number("mahalanobis_quantile");
    w.family_alpha = cfg.number("family_alpha");
    auto fam = cfg.integer("posthoc_family_size");
    if (fam < 0)
        throw Error("posthoc_family_size must be non-negative");
    w.posthoc_family_size = static_cast<std::size_t>(fam);
    const auto& center = cfg.str("levene_center");
    if (center == "median")
        w.levene_center = stats::LeveneCenter::median;
    else if (center == "mean")
        w.levene_center = stats::LeveneCenter::mean;
    else
        throw Error("levene_center must be 'median' or 'mean', got '" + center + "'");
    w.seed = cfg.seed();
    return w;
}

inline void run_manova(Context& ctx)
{
    struct Job {
        std::string name;
        std::string path;
        std::string threshold_key;
    };
    std::vector<Job> jobs;
    if (auto m = ctx.config.path("matrix")) {
        jobs.push_back({fs::path(*m).stem().string(), *m, "low_mean_threshold"});
    } else {
        for (const auto& [name, key] : {std::pair{"liwc", "liwc.low_mean_threshold"}, std::pair{"pos", "pos.low_mean_threshold"}}) {
            auto p = ctx.out_dir / (std::string(name) + "_matrix.csv");
            if (fs::exists(p))
                jobs.push_back({name, p.string(), key});
        }
        if (jobs.empty())
            throw Error("manova: no count matrix found; run `features` with a lexicon or POS annotations first, "
                        "or set 'matrix'");
    }
    std::optional<Lexicon> lexicon;
    if (auto lex = ctx.config.path("lexicon"))
        lexicon = parse_lexicon(ctx.recorder.read_input(*lex));

    for (const auto& job : jobs) {
        auto matrix = parse_count_matrix(ctx.recorder.read_input(job.path));
        auto report = run_manova_workflow(matrix, workflow_config(ctx.config, job.threshold_key));
        const Lexicon* lex = (lexicon && job.name != "pos") ? &*lexicon : nullptr;
        ctx.write_json("workflow_" + job.name + ".json", report::to_json(report, ctx.digits));
        ctx.recorder.write("posthoc_" + job.name + ".csv", report::posthoc_csv(report, lex, ctx.digits));
    }
}

inline void run_classify(Context& ctx)
{
    auto tokenized = tokenize_corpus(stage_corpus(ctx, "classify"), ctx.tokenizer());
    CvConfig cv;
    auto k = ctx.config.integer("k");
    if (k < 2)
        throw Error("k must be at least 2");
    cv.k = static_cast<std::size_t>(k);
    cv.seed = ctx.config.seed();
    cv.classifier.min_token_count = ctx.config.integer("min_token_count");
    cv.classifier.l2_lambda = ctx.config.number("l2_lambda");
    cv.classifier.max_iters = static_cast<std::size_t>(std::max<std::int64_t>(1, ctx.config.integer("max_iters")));
    cv.classifier.tolerance = ctx.config.number("tolerance");
    auto report = cross_validate(labeled_documents(tokenized), cv);
    ctx.write_json("cv_report.json", report::to_json(report, ctx.digits));
}

inline json read_json_artifact(const fs::path& path, const std::string& stage, Context& ctx)
{
    if (!fs::exists(path))
        throw Error("report: missing " + path.filename().string() + "; run `" + stage + "` first");
    return json::parse(ctx.recorder.read_input(path.string()));
}

inline void run_report(Context& ctx)
{
    const fs::path src = ctx.out_dir;
    const fs::path bundle = src / "bundle";
    const int d = ctx.digits;
    auto require = [&](const std::string& file, const std::string& stage) {
        auto p = src / file;
        if (!fs::exists(p))
            throw Error("report: missing " + file + "; run `" + stage + "` first");
        return p;
    };

    // Word-count box plots.
    auto wc_rows = csv::parse(ctx.recorder.read_input(require("word_counts.csv", "features").string()));
    std::vector<std::string> labels;
    std::vector<double> counts;
    for (std::size_t r = 1; r < wc_rows.size(); ++r) {
        if (wc_rows[r].size() < 3)
            continue;
        labels.push_back(wc_rows[r][1]);
        counts.push_back(std::stod(wc_rows[r][2]));
    }
    auto groups = ordered_groups(labels);
    std::vector<std::vector<double>> per_group(groups.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        per_group[static_cast<std::size_t>(std::find(groups.begin(), groups.end(), labels[i]) - groups.begin())]
            .push_back(counts[i]);

    // Frequency scatter over shared unigrams.
    auto freq_rows = csv::parse(ctx.recorder.read_input(require("unigram_freq.csv", "features").string()));
    FrequencyTable uni;
    if (freq_rows.empty() || freq_rows[0].size() < 4)
        throw Error("report: unigram_freq.csv needs at least two group columns");
    for (std::size_t c = 1; c + 1 < freq_rows[0].size(); ++c)
        uni.groups.push_back(freq_rows[0][c].substr(std::string("count_").size()));
    for (std::size_t r = 1; r < freq_rows.size(); ++r) {
        if (freq_rows[r].size() != freq_rows[0].size())
            continue;
        std::vector<std::int64_t> c;
        for (std::size_t k = 1; k + 1 < freq_rows[r].size(); ++k)
            c.push_back(std::stoll(freq_rows[r][k]));
        uni.counts.emplace(freq_rows[r][0], std::move(c));
    }

    auto top_uni = read_json_artifact(src / "topk_unigram.json", "logodds", ctx);

    std::vector<std::pair<std::string, json>> plots;
    plots.emplace_back("plot_boxplot_word_counts.json", plot::boxplot(groups, per_group, "tokens per document", d));
    plots.emplace_back("plot_scatter_unigram.json",
                       plot::scatter(frequency_scatter(uni, 0, 1), uni.groups[0], uni.groups[1], d));
    plots.emplace_back("plot_topk_unigram.json", plot::top_k_bars(top_uni, "unigrams"));
    if (fs::exists(src / "topk_bigram.json"))
        plots.emplace_back("plot_topk_bigram.json",
                           plot::top_k_bars(read_json_artifact(src / "topk_bigram.json", "logodds", ctx), "bigrams"));
    for (const char* name : {"liwc", "pos"}) {
        auto p = src / ("workflow_" + std::string(name) + ".json");
        if (fs::exists(p))
            plots.emplace_back("plot_histograms_" + std::string(name) + ".json",
                               plot::histograms(read_json_artifact(p, "manova", ctx), name));
    }

    // Copy every upstream manifest and the files it lists into the bundle.
    RunRecorder bundle_rec("report", bundle, ctx.config);
    std::vector<fs::path> manifests;
    for (const auto& entry : fs::directory_iterator(src))
        if (entry.is_regular_file() && entry.path().filename().string().rfind("manifest_", 0) == 0 &&
            entry.path().filename() != "manifest_report.json")
            manifests.push_back(entry.path());
    std::sort(manifests.begin(), manifests.end());
    if (manifests.empty())
        throw Error("report: no stage manifests found in " + src.string());
    std::set<std::string> copied;
    for (const auto& mpath : manifests) {
        auto mtext = ctx.recorder.read_input(mpath.string());
        auto manifest = json::parse(mtext);
        for (const auto& out : manifest.at("outputs")) {
            auto name = out.at("file").get<std::string>();
            if (!copied.insert(name).second)
                continue;
            auto content = csv::read_file((src / name).string());
            if (sha256_hex(content) != out.at("sha256").get<std::string>())
                throw Error("report: " + name + " changed since " + mpath.filename().string() + " was written; rerun `" +
                            manifest.at("subcommand").get<std::string>() + "`");
            bundle_rec.write(name, content);
        }
        bundle_rec.write(mpath.filename().string(), mtext);
    }
    for (auto& [name, body] : plots)
        bundle_rec.write_json(name, ctx.stamped(std::move(body)));
    bundle_rec.finish();
}

/// Parses trailing `--key value` / `--key=value` overrides.
inline void apply_overrides(RunConfig& cfg, const std::vector<std::string>& extras)
{
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const auto& a = extras[i];
        if (a.rfind("--", 0) != 0 || a.size() < 3)
            throw Error("unexpected argument '" + a + "'");
        std::string key = a.substr(2), value;
        if (auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= extras.size())
                throw Error("flag --" + key + " needs a value");
            value = extras[++i];
        }
        if (!config_defaults().count(key)) {
            auto dashed = key;
            std::replace(dashed.begin(), dashed.end(), '-', '_');
            if (config_defaults().count(dashed))
                key = dashed;
        }
        cfg.set(key, value);
    }
}

/// Runs one subcommand with a prepared configuration.
inline void dispatch(const std::string& sub, const RunConfig& config)
{
    require_inputs_exist(config);
    Context ctx(sub, config);
    if (sub == "ingest")
        run_ingest(ctx);
    else if (sub == "features")
        run_features(ctx);
    else if (sub == "logodds")
        run_logodds(ctx);
    else if (sub == "manova")
        run_manova(ctx);
    else if (sub == "classify")
        run_classify(ctx);
    else if (sub == "report") {
        run_report(ctx);
        return;
    } else
        throw Error("unknown subcommand '" + sub + "'");
    ctx.recorder.finish();
}

/// Entry point: returns the process exit status. Diagnostics go to `err`.
inline int run_subcommand(int argc, const char* const* argv, std::ostream& out = std::cout,
                          std::ostream& err = std::cerr)
{
    CLI::App app{"Corpus contrast toolkit", std::string(tool_name)};
    app.allow_extras();
    app.set_version_flag("--version", std::string(tool_name) + " " + std::string(tool_version));
    std::string sub, config_path, out_dir;
    std::optional<std::int64_t> seed;
    app.add_option("subcommand", sub, "ingest | features | logodds | manova | classify | report")
        ->check(CLI::IsMember(subcommands()));
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--seed", seed, "random seed recorded in every artifact");
    app.add_option("--out-dir", out_dir, "output directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << tool_name << " " << tool_version << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << tool_name << ": " << e.what() << "\n";
        return 2;
    }
    if (sub.empty()) {
        err << tool_name << ": a subcommand is required\n" << app.help();
        return 2;
    }
    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
        apply_overrides(cfg, app.remaining());
        if (seed)
            cfg.set("seed", std::to_string(*seed));
        if (!out_dir.empty())
            cfg.set("out_dir", out_dir);
        dispatch(sub, cfg);
    } catch (const std::exception& e) {
        err << tool_name << " " << sub << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace lexcontrast::cli

#endif
