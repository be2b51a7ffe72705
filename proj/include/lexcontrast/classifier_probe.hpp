#ifndef LEXCONTRAST_CLASSIFIER_PROBE_HPP
#define LEXCONTRAST_CLASSIFIER_PROBE_HPP

// Cross-validated text classification harness: stratified k-fold split, minority
// upsampling inside training folds, a pluggable binary classifier and
// accuracy / macro-F1 scoring.
//
// The reference classifier is L2-regularised logistic regression over
// L2-normalised bag-of-words vectors, trained by full-batch accelerated gradient
// descent with a fixed step 1/L. It is deterministic.

#include <lexcontrast/corpus.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/text_features.hpp>
#include <lexcontrast/tokenizer.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace lexcontrast {

struct LabeledDocument {
    std::string doc_id;
    std::string label;
    TokenSequence tokens;
};

inline std::vector<LabeledDocument> labeled_documents(const TokenizedCorpus& corpus)
{
    std::vector<LabeledDocument> out;
    out.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        out.push_back({corpus.doc_ids[i], corpus.labels[i], corpus.docs[i]});
    return out;
}

/// Unbiased draw from [0, n) using only the engine's raw output, so results are
/// identical across standard libraries.
inline std::size_t bounded_draw(std::mt19937_64& rng, std::size_t n)
{
    const std::uint64_t range = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % range);
}

template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng)
{
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[bounded_draw(rng, i)]);
}

/// Sorted distinct labels.
inline std::vector<std::string> class_names(const std::vector<LabeledDocument>& docs)
{
    std::set<std::string> s;
    for (const auto& d : docs)
        s.insert(d.label);
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Fold plan

struct FoldPlan {
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::vector<std::size_t> assignments; ///< fold index per document
};

/// Within each class (sorted by name) documents are shuffled by seed, then dealt
/// round-robin into k folds. Dealing continues across classes so fold sizes differ
/// by at most one overall as well as per class.
inline FoldPlan stratified_kfold_split(const std::vector<LabeledDocument>& docs, std::size_t k, std::uint64_t seed)
{
    if (k < 2)
        throw Error("k-fold split: k must be at least 2");
    FoldPlan plan{k, seed, std::vector<std::size_t>(docs.size(), 0)};
    std::mt19937_64 rng(seed);
    std::size_t next = 0;
    for (const auto& cls : class_names(docs)) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < docs.size(); ++i)
            if (docs[i].label == cls)
                members.push_back(i);
        if (members.size() < k)
            throw Error("k-fold split: class '" + cls + "' has fewer than k members");
        seeded_shuffle(members, rng);
        for (auto i : members) {
            plan.assignments[i] = next;
            next = (next + 1) % k;
        }
    }
    return plan;
}

/// Duplicates minority-class documents (drawn with replacement) until both
/// classes are equally frequent. Majority documents are untouched and keep order.
inline std::vector<LabeledDocument> upsample_minority(const std::vector<LabeledDocument>& train, std::uint64_t seed)
{
    auto names = class_names(train);
    if (names.size() != 2)
        throw Error("upsampling: exactly two classes required");
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < train.size(); ++i)
        (train[i].label == names[0] ? a : b).push_back(i);
    const auto& minority = a.size() < b.size() ? a : b;
    std::size_t deficit = std::max(a.size(), b.size()) - minority.size();
    std::vector<LabeledDocument> out = train;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < deficit; ++i)
        out.push_back(train[minority[bounded_draw(rng, minority.size())]]);
    return out;
}

// ---------------------------------------------------------------------------
// Classifiers

/// Pluggable binary classifier: trained on labeled documents, predicts labels.
class TextClassifier {
public:
    virtual ~TextClassifier() = default;
    virtual void fit(const std::vector<LabeledDocument>& train) = 0;
    virtual std::string predict(const TokenSequence& tokens) const = 0;
};

struct LogisticConfig {
    std::int64_t min_token_count = 2;
    double l2_lambda = 1e-3;
    std::size_t max_iters = 5000;
    double tolerance = 1e-6;
};

/// Sparse feature vector: (feature index, value) sorted by index.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

/// Mean logistic loss plus (lambda/2)|w|² on a fixed design. The last weight is the
/// unpenalised bias.
class LogisticObjective {
public:
    LogisticObjective(std::vector<SparseVector> rows, std::vector<double> targets, std::size_t features, double lambda)
        : rows_(std::move(rows)), y_(std::move(targets)), features_(features), lambda_(lambda) {}

    std::size_t dimension() const { return features_ + 1; }

    double margin(const std::vector<double>& w, std::size_t i) const
    {
        double z = w[features_];
        for (auto [j, v] : rows_[i])
            z += w[j] * v;
        return z;
    }

    double value(const std::vector<double>& w) const
    {
        double loss = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            double m = (2 * y_[i] - 1) * margin(w, i);
            loss += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
        }
        loss /= static_cast<double>(rows_.size());
        double reg = 0;
        for (std::size_t j = 0; j < features_; ++j)
            reg += w[j] * w[j];
        return loss + 0.5 * lambda_ * reg;
    }

    std::vector<double> gradient(const std::vector<double>& w) const
    {
        std::vector<double> g(dimension(), 0.0);
        const double inv_n = 1.0 / static_cast<double>(rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            double z = margin(w, i);
            double p = z >= 0 ? 1 / (1 + std::exp(-z)) : std::exp(z) / (1 + std::exp(z));
            double r = (p - y_[i]) * inv_n;
            for (auto [j, v] : rows_[i])
                g[j] += r * v;
            g[features_] += r;
        }
        for (std::size_t j = 0; j < features_; ++j)
            g[j] += lambda_ * w[j];
        return g;
    }

    /// Upper bound on the gradient's Lipschitz constant.
    double lipschitz() const
    {
        double max_sq = 0;
        for (const auto& row : rows_) {
            double s = 1; // bias column
            for (auto [j, v] : row)
                s += v * v;
            max_sq = std::max(max_sq, s);
        }
        return 0.25 * max_sq + lambda_;
    }

private:
    std::vector<SparseVector> rows_;
    std::vector<double> y_;
    std::size_t features_;
    double lambda_;
};

inline double norm2(const std::vector<double>& v)
{
    double s = 0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

struct FitTrace {
    std::size_t iterations = 0;
    double gradient_norm = 0;
    bool converged = false;
};

/// Nesterov-accelerated gradient descent with adaptive restart; stops when the
/// gradient norm at the iterate falls below `tolerance`.
inline std::vector<double> minimize(const LogisticObjective& f, std::size_t max_iters, double tolerance, FitTrace* trace = nullptr)
{
    const std::size_t d = f.dimension();
    const double step = 1.0 / f.lipschitz();
    std::vector<double> x(d, 0.0), x_prev = x, y = x;
    double t = 1;
    FitTrace tr;
    for (tr.iterations = 0; tr.iterations < max_iters; ++tr.iterations) {
        auto gx = f.gradient(x);
        tr.gradient_norm = norm2(gx);
        if (tr.gradient_norm < tolerance) {
            tr.converged = true;
            break;
        }
        auto gy = f.gradient(y);
        x_prev = x;
        for (std::size_t j = 0; j < d; ++j)
            x[j] = y[j] - step * gy[j];
        // restart momentum when it points uphill
        double dir = 0;
        for (std::size_t j = 0; j < d; ++j)
            dir += gy[j] * (x[j] - x_prev[j]);
        if (dir > 0) {
            t = 1;
            y = x;
            continue;
        }
        double t_next = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
        double beta = (t - 1) / t_next;
        for (std::size_t j = 0; j < d; ++j)
            y[j] = x[j] + beta * (x[j] - x_prev[j]);
        t = t_next;
    }
    if (!tr.converged)
        tr.gradient_norm = norm2(f.gradient(x));
    if (trace)
        *trace = tr;
    return x;
}

/// Bag-of-words vocabulary over training documents with count threshold.
class Vocabulary {
public:
    Vocabulary() = default;

    static Vocabulary build(const std::vector<LabeledDocument>& docs, std::int64_t min_count)
    {
        std::map<std::string, std::int64_t> counts;
        for (const auto& d : docs)
            for (const auto& t : d.tokens)
                ++counts[t];
        Vocabulary v;
        for (const auto& [term, c] : counts)
            if (c >= min_count)
                v.index_.emplace(term, v.index_.size());
        return v;
    }

    std::size_t size() const { return index_.size(); }

    /// Counts over known terms scaled to unit Euclidean length.
    SparseVector features(const TokenSequence& tokens) const
    {
        std::map<std::size_t, double> counts;
        for (const auto& t : tokens)
            if (auto it = index_.find(t); it != index_.end())
                counts[it->second] += 1;
        double norm = 0;
        for (const auto& [j, c] : counts)
            norm += c * c;
        norm = std::sqrt(norm);
        SparseVector out;
        if (norm == 0)
            return out;
        out.reserve(counts.size());
        for (const auto& [j, c] : counts)
            out.emplace_back(j, c / norm);
        return out;
    }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

class LogisticRegressionClassifier : public TextClassifier {
public:
    explicit LogisticRegressionClassifier(LogisticConfig config = {}) : config_(config) {}

    void fit(const std::vector<LabeledDocument>& train) override
    {
        classes_ = class_names(train);
        if (classes_.size() != 2)
            throw Error("logistic regression: exactly two classes required");
        std::vector<LabeledDocument> unique;
        std::set<std::string> seen;
        for (const auto& d : train)
            if (seen.insert(d.doc_id).second)
                unique.push_back(d);
        vocab_ = Vocabulary::build(unique, config_.min_token_count);
        if (vocab_.size() == 0)
            throw Error("logistic regression: empty vocabulary");
        std::vector<SparseVector> rows;
        std::vector<double> y;
        for (const auto& d : train) {
            rows.push_back(vocab_.features(d.tokens));
            y.push_back(d.label == classes_[1] ? 1.0 : 0.0);
        }
        LogisticObjective objective(std::move(rows), std::move(y), vocab_.size(), config_.l2_lambda);
        weights_ = minimize(objective, config_.max_iters, config_.tolerance, &trace_);
    }

    double decision(const TokenSequence& tokens) const
    {
        double z = weights_.back();
        for (auto [j, v] : vocab_.features(tokens))
            z += weights_[j] * v;
        return z;
    }

    std::string predict(const TokenSequence& tokens) const override
    {
        return decision(tokens) > 0 ? classes_[1] : classes_[0];
    }

    const FitTrace& trace() const { return trace_; }
    const std::vector<std::string>& classes() const { return classes_; }

private:
    LogisticConfig config_;
    std::vector<std::string> classes_;
    Vocabulary vocab_;
    std::vector<double> weights_;
    FitTrace trace_;
};

// ---------------------------------------------------------------------------
// Metrics

struct ClassMetrics {
    std::vector<std::string> classes;
    std::vector<std::vector<std::int64_t>> confusion; ///< [truth][predicted]
    double accuracy = 0;
    double macro_f1 = 0;
    std::vector<double> f1; ///< per class; classes absent from truth are excluded from the macro mean
};

inline ClassMetrics metrics_from_confusion(std::vector<std::string> classes, std::vector<std::vector<std::int64_t>> confusion)
{
    ClassMetrics m;
    m.classes = std::move(classes);
    m.confusion = std::move(confusion);
    const std::size_t c = m.classes.size();
    std::int64_t total = 0, correct = 0;
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            total += m.confusion[i][j];
            if (i == j)
                correct += m.confusion[i][j];
        }
    m.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    double f1_sum = 0;
    std::size_t present = 0;
    for (std::size_t k = 0; k < c; ++k) {
        std::int64_t tp = m.confusion[k][k], truth = 0, predicted = 0;
        for (std::size_t j = 0; j < c; ++j) {
            truth += m.confusion[k][j];
            predicted += m.confusion[j][k];
        }
        double precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        double recall = truth ? static_cast<double>(tp) / static_cast<double>(truth) : 0.0;
        double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
        m.f1.push_back(f1);
        if (truth > 0) {
            f1_sum += f1;
            ++present;
        }
    }
    m.macro_f1 = present ? f1_sum / static_cast<double>(present) : 0.0;
    return m;
}

/// Scores predicted labels against the truth; also usable for an external model's output.
inline ClassMetrics score_predictions(const std::vector<std::string>& classes, const std::vector<std::string>& truth,
                                      const std::vector<std::string>& predicted)
{
    if (truth.size() != predicted.size())
        throw Error("scoring: truth and predictions differ in length");
    if (truth.empty())
        throw Error("scoring: nothing to evaluate");
    auto index = [&](const std::string& l) {
        auto it = std::find(classes.begin(), classes.end(), l);
        if (it == classes.end())
            throw Error("scoring: unknown class '" + l + "'");
        return static_cast<std::size_t>(it - classes.begin());
    };
    std::vector<std::vector<std::int64_t>> conf(classes.size(), std::vector<std::int64_t>(classes.size(), 0));
    for (std::size_t i = 0; i < truth.size(); ++i)
        ++conf[index(truth[i])][index(predicted[i])];
    return metrics_from_confusion(classes, std::move(conf));
}

inline ClassMetrics evaluate(const TextClassifier& model, const std::vector<LabeledDocument>& eval_docs,
                             const std::vector<std::string>& classes)
{
    std::vector<std::string> truth, predicted;
    for (const auto& d : eval_docs) {
        truth.push_back(d.label);
        predicted.push_back(model.predict(d.tokens));
    }
    return score_predictions(classes, truth, predicted);
}

// ---------------------------------------------------------------------------
// Cross-validation

struct CvConfig {
    std::size_t k = 5;
    std::uint64_t seed = 42;
    LogisticConfig classifier;
};

struct FoldResult {
    std::size_t fold = 0;
    std::size_t train_size = 0;           ///< before upsampling
    std::size_t train_size_upsampled = 0;
    std::map<std::string, std::size_t> train_class_counts; ///< after upsampling
    std::size_t eval_size = 0;
    std::vector<std::string> eval_doc_ids;
    std::vector<std::string> train_doc_ids; ///< distinct ids in the training fold
    ClassMetrics metrics;
};

struct CvReport {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> classes;
    std::vector<FoldResult> folds;
    double mean_accuracy = 0;
    double mean_macro_f1 = 0;
};

using ClassifierFactory = std::function<std::unique_ptr<TextClassifier>()>;

inline CvReport cross_validate(const std::vector<LabeledDocument>& docs, const CvConfig& config,
                               const ClassifierFactory& factory)
{
    auto classes = class_names(docs);
    if (classes.size() != 2)
        throw Error("cross-validation: exactly two classes required");
    auto plan = stratified_kfold_split(docs, config.k, config.seed);

    CvReport rep;
    rep.k = config.k;
    rep.seed = config.seed;
    rep.classes = classes;
    for (std::size_t f = 0; f < config.k; ++f) {
        std::vector<LabeledDocument> train, eval;
        for (std::size_t i = 0; i < docs.size(); ++i)
            (plan.assignments[i] == f ? eval : train).push_back(docs[i]);
        FoldResult fr;
        fr.fold = f;
        fr.train_size = train.size();
        fr.eval_size = eval.size();
        for (const auto& d : eval)
            fr.eval_doc_ids.push_back(d.doc_id);
        for (const auto& d : train)
            fr.train_doc_ids.push_back(d.doc_id);
        auto upsampled = upsample_minority(train, config.seed + 1 + f);
        fr.train_size_upsampled = upsampled.size();
        for (const auto& d : upsampled)
            ++fr.train_class_counts[d.label];
        auto model = factory();
        model->fit(upsampled);
        fr.metrics = evaluate(*model, eval, classes);
        rep.mean_accuracy += fr.metrics.accuracy;
        rep.mean_macro_f1 += fr.metrics.macro_f1;
        rep.folds.push_back(std::move(fr));
    }
    rep.mean_accuracy /= static_cast<double>(config.k);
    rep.mean_macro_f1 /= static_cast<double>(config.k);
    return rep;
}

inline CvReport cross_validate(const std::vector<LabeledDocument>& docs, const CvConfig& config = {})
{
    return cross_validate(docs, config, [&] { return std::make_unique<LogisticRegressionClassifier>(config.classifier); });
}

} // namespace lexcontrast

#endif
