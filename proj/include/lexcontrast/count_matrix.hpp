#ifndef LEXCONTRAST_COUNT_MATRIX_HPP
#define LEXCONTRAST_COUNT_MATRIX_HPP

#include <lexcontrast/corpus.hpp>
#include <lexcontrast/csv.hpp>
#include <lexcontrast/error.hpp>
#include <lexcontrast/lexicon.hpp>
#include <lexcontrast/pos_annotations.hpp>
#include <lexcontrast/text_features.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lexcontrast {

/// Documents x variables, one group label and doc id per row.
struct CountMatrix {
    std::vector<std::string> variables;
    Eigen::MatrixXd values; // rows = documents
    std::vector<std::string> labels;
    std::vector<std::string> doc_ids;

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }

    void validate() const
    {
        if (static_cast<std::size_t>(values.cols()) != variables.size())
            throw Error("count matrix: column count differs from variable count");
        if (labels.size() != rows() || doc_ids.size() != rows())
            throw Error("count matrix: labels/doc ids do not match row count");
    }

    std::vector<double> column(std::size_t j) const
    {
        std::vector<double> out(rows());
        for (std::size_t i = 0; i < rows(); ++i)
            out[i] = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        return out;
    }

    /// Values of column j split by group, groups in `group_names` order.
    std::vector<std::vector<double>> column_by_group(std::size_t j, const std::vector<std::string>& group_names) const
    {
        std::vector<std::vector<double>> out(group_names.size());
        for (std::size_t i = 0; i < rows(); ++i) {
            auto it = std::find(group_names.begin(), group_names.end(), labels[i]);
            if (it != group_names.end())
                out[static_cast<std::size_t>(it - group_names.begin())].push_back(
                    values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        return out;
    }

    CountMatrix select_columns(const std::vector<std::size_t>& keep) const
    {
        CountMatrix out;
        out.labels = labels;
        out.doc_ids = doc_ids;
        out.values.resize(values.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) {
            out.variables.push_back(variables[keep[k]]);
            out.values.col(static_cast<Eigen::Index>(k)) = values.col(static_cast<Eigen::Index>(keep[k]));
        }
        return out;
    }

    CountMatrix select_rows(const std::vector<std::size_t>& keep) const
    {
        CountMatrix out;
        out.variables = variables;
        out.values.resize(static_cast<Eigen::Index>(keep.size()), values.cols());
        for (std::size_t k = 0; k < keep.size(); ++k) {
            out.values.row(static_cast<Eigen::Index>(k)) = values.row(static_cast<Eigen::Index>(keep[k]));
            out.labels.push_back(labels[keep[k]]);
            out.doc_ids.push_back(doc_ids[keep[k]]);
        }
        return out;
    }

    friend bool operator==(const CountMatrix& a, const CountMatrix& b)
    {
        return a.variables == b.variables && a.labels == b.labels && a.doc_ids == b.doc_ids &&
               a.values.rows() == b.values.rows() && a.values.cols() == b.values.cols() && a.values == b.values;
    }
};

/// Per-document count vectors over a shared variable set.
struct CountSource {
    std::vector<std::string> variables;
    std::map<std::string, std::vector<std::int64_t>> by_doc;
};

/// Rows follow corpus order; labels are the speakers' genders.
inline CountMatrix build_count_matrix(const AnnotatedCorpus& corpus, const CountSource& source)
{
    CountMatrix m;
    m.variables = source.variables;
    m.values.resize(static_cast<Eigen::Index>(corpus.size()), static_cast<Eigen::Index>(source.variables.size()));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& d = corpus.documents[i];
        auto it = source.by_doc.find(d.transcript.talk_id);
        if (it == source.by_doc.end())
            throw Error("count matrix: no counts for document '" + d.transcript.talk_id + "'");
        if (it->second.size() != source.variables.size())
            throw Error("count matrix: document '" + d.transcript.talk_id + "' has a count vector of the wrong length");
        for (std::size_t j = 0; j < source.variables.size(); ++j)
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(it->second[j]);
        m.labels.push_back(group_label(d));
        m.doc_ids.push_back(d.transcript.talk_id);
    }
    return m;
}

inline CountSource lexicon_counts(const TokenizedCorpus& corpus, const Lexicon& lexicon)
{
    CountSource src;
    src.variables = lexicon.category_names();
    for (std::size_t i = 0; i < corpus.size(); ++i)
        src.by_doc[corpus.doc_ids[i]] = categorize_counts(corpus.docs[i], lexicon);
    return src;
}

inline CountSource pos_counts(const PosAnnotations& annotations)
{
    CountSource src;
    for (auto tag : pos_tags)
        src.variables.emplace_back(tag);
    for (const auto& [doc, counts] : annotations.counts)
        src.by_doc[doc] = std::vector<std::int64_t>(counts.begin(), counts.end());
    return src;
}

// CSV layout: doc_id,label,<variables...>

inline std::string format_number(double v, int significant_digits = 6)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
    return buf;
}

inline std::string format_count_matrix(const CountMatrix& m, int significant_digits = 6)
{
    std::vector<csv::Row> rows;
    csv::Row header{"doc_id", "label"};
    header.insert(header.end(), m.variables.begin(), m.variables.end());
    rows.push_back(std::move(header));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        csv::Row r{m.doc_ids[i], m.labels[i]};
        for (std::size_t j = 0; j < m.cols(); ++j)
            r.push_back(format_number(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), significant_digits));
        rows.push_back(std::move(r));
    }
    return csv::format(rows);
}

inline CountMatrix parse_count_matrix(std::string_view content)
{
    auto rows = csv::parse(content);
    if (rows.empty() || rows.front().size() < 3 || rows.front()[0] != "doc_id" || rows.front()[1] != "label")
        throw ParseError("matrix csv: header must be doc_id,label,<variables...>", 1);
    CountMatrix m;
    m.variables.assign(rows.front().begin() + 2, rows.front().end());
    std::vector<std::vector<double>> data;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty())
            continue;
        if (row.size() != m.variables.size() + 2)
            throw ParseError("matrix csv: wrong number of fields", r + 1);
        m.doc_ids.push_back(row[0]);
        m.labels.push_back(row[1]);
        auto& vals = data.emplace_back();
        for (std::size_t j = 2; j < row.size(); ++j) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(row[j], &used));
                if (used != row[j].size())
                    throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("matrix csv: invalid number '" + row[j] + "'", r + 1);
            }
        }
    }
    m.values.resize(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(m.variables.size()));
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t j = 0; j < data[i].size(); ++j)
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i][j];
    return m;
}

} // namespace lexcontrast

#endif
