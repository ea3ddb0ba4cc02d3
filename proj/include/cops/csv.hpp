#pragma once

#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cops/dataset.hpp"
#include "cops/text.hpp"

namespace cops {

// Canonical on-disk dataset layout: a directory holding questions.csv
// (columns qid, score, then the question feature schema) and answers.csv
// (columns aid, qid, score, then the answer feature schema). Values are
// comma-separated with no quoting; an empty score field marks an unlabeled
// row. Lines starting with '#' are comments and are skipped on read.

inline std::string questions_csv_path(const std::string& dir) { return dir + "/questions.csv"; }
inline std::string answers_csv_path(const std::string& dir) { return dir + "/answers.csv"; }

namespace detail {

[[noreturn]] inline void csv_fail(const std::string& path, std::size_t line,
                                  const std::string& message) {
    throw std::runtime_error(path + " line " + std::to_string(line) + ": " + message);
}

struct CsvTable {
    std::vector<std::string> columns;
    std::size_t header_line = 0;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;
};

// Reads one CSV file: the first non-comment line is the header, every later
// non-comment line must have exactly as many fields. Physical line numbers
// are kept for error reporting.
inline CsvTable read_csv_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string_view> fields = split(line, ',');
        if (table.columns.empty()) {
            for (auto f : fields) table.columns.emplace_back(trim(f));
            table.header_line = line_no;
            continue;
        }
        if (fields.size() != table.columns.size())
            csv_fail(path, line_no,
                     "expected " + std::to_string(table.columns.size()) + " fields, got " +
                         std::to_string(fields.size()));
        std::vector<std::string> row;
        row.reserve(fields.size());
        for (auto f : fields) row.emplace_back(trim(f));
        table.rows.push_back(std::move(row));
        table.row_lines.push_back(line_no);
    }
    if (table.columns.empty())
        throw std::runtime_error(path + ": missing header line");
    return table;
}

inline void require_leading_columns(const std::string& path, const CsvTable& table,
                                    const std::vector<std::string>& expected) {
    bool ok = table.columns.size() >= expected.size();
    for (std::size_t i = 0; ok && i < expected.size(); ++i)
        ok = table.columns[i] == expected[i];
    if (!ok) {
        std::string want;
        for (const auto& c : expected) {
            if (!want.empty()) want += ",";
            want += c;
        }
        csv_fail(path, table.header_line, "header must start with " + want);
    }
}

inline long long csv_id(const std::string& path, std::size_t line, const std::string& field,
                        const char* what) {
    long long id = 0;
    if (!parse_ll(field, id))
        csv_fail(path, line, std::string("invalid ") + what + " '" + field + "'");
    return id;
}

inline double csv_value(const std::string& path, std::size_t line, const std::string& field,
                        const std::string& column) {
    double v = 0.0;
    if (!parse_double(field, v))
        csv_fail(path, line, "invalid value '" + field + "' in column " + column);
    return v;
}

inline void write_csv_file(const std::string& path, const std::string& comment,
                           const std::vector<std::string>& leading,
                           const std::vector<std::string>& schema,
                           const std::vector<std::vector<std::string>>& id_columns,
                           const QualityVector& quality, const Matrix& features) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    if (!comment.empty())
        for (auto part : split(comment, '\n')) out << "# " << part << "\n";

    for (std::size_t i = 0; i < leading.size(); ++i)
        out << (i ? "," : "") << leading[i];
    for (const auto& name : schema) out << "," << name;
    out << "\n";

    for (Index r = 0; r < features.rows(); ++r) {
        for (const auto& ids : id_columns) out << ids[static_cast<std::size_t>(r)] << ",";
        if (quality.is_labeled(r)) out << format_double(quality.values[r]);
        for (Index c = 0; c < features.cols(); ++c)
            out << "," << format_double(features(r, c));
        out << "\n";
    }
    if (!out) throw std::runtime_error("failed writing dataset file: " + path);
}

} // namespace detail

// Writes questions.csv and answers.csv into dir, which must already exist.
// A non-empty comment is emitted as '#'-prefixed header lines in both files.
// The files round-trip through read_csv exactly: format_double preserves
// every finite double and unlabeled rows hold value 0 by convention.
inline void write_csv(const Dataset& d, const std::string& dir, const std::string& comment = "") {
    d.validate();

    std::vector<std::string> qids, aids, a_qids;
    for (auto id : d.question_ids) qids.push_back(std::to_string(id));
    for (Index j = 0; j < d.n_answers(); ++j) {
        aids.push_back(std::to_string(d.answer_ids[static_cast<std::size_t>(j)]));
        Index q = d.association.question_of(j);
        a_qids.push_back(std::to_string(d.question_ids[static_cast<std::size_t>(q)]));
    }

    detail::write_csv_file(questions_csv_path(dir), comment, {"qid", "score"},
                           d.question_features.schema, {qids}, d.question_quality,
                           d.question_features.values);
    detail::write_csv_file(answers_csv_path(dir), comment, {"aid", "qid", "score"},
                           d.answer_features.schema, {aids, a_qids}, d.answer_quality,
                           d.answer_features.values);
}

// Reads a dataset written by write_csv (or assembled by hand in the same
// layout). Association comes from the answers' qid column. Duplicate ids,
// references to unknown questions, malformed numbers, and ragged rows are
// reported with the offending file and line number.
inline Dataset read_csv(const std::string& dir) {
    const std::string q_path = questions_csv_path(dir);
    const std::string a_path = answers_csv_path(dir);
    detail::CsvTable qt = detail::read_csv_table(q_path);
    detail::CsvTable at = detail::read_csv_table(a_path);
    detail::require_leading_columns(q_path, qt, {"qid", "score"});
    detail::require_leading_columns(a_path, at, {"aid", "qid", "score"});

    Dataset d;
    d.question_features.schema.assign(qt.columns.begin() + 2, qt.columns.end());
    d.answer_features.schema.assign(at.columns.begin() + 3, at.columns.end());

    const Index n_q = static_cast<Index>(qt.rows.size());
    const Index d_q = static_cast<Index>(d.question_features.schema.size());
    d.question_features.values.resize(n_q, d_q);
    d.question_quality.values = Vector::Zero(n_q);
    d.question_quality.labeled.assign(static_cast<std::size_t>(n_q), 0);

    std::unordered_map<long long, Index> q_index;
    for (Index i = 0; i < n_q; ++i) {
        const auto& row = qt.rows[static_cast<std::size_t>(i)];
        std::size_t line = qt.row_lines[static_cast<std::size_t>(i)];
        long long qid = detail::csv_id(q_path, line, row[0], "question id");
        if (!q_index.emplace(qid, i).second)
            detail::csv_fail(q_path, line, "duplicate question id " + std::to_string(qid));
        d.question_ids.push_back(qid);
        if (!row[1].empty()) {
            d.question_quality.values[i] = detail::csv_value(q_path, line, row[1], "score");
            d.question_quality.labeled[static_cast<std::size_t>(i)] = 1;
        }
        for (Index c = 0; c < d_q; ++c)
            d.question_features.values(i, c) = detail::csv_value(
                q_path, line, row[static_cast<std::size_t>(2 + c)],
                d.question_features.schema[static_cast<std::size_t>(c)]);
    }

    const Index n_a = static_cast<Index>(at.rows.size());
    const Index d_a = static_cast<Index>(d.answer_features.schema.size());
    d.answer_features.values.resize(n_a, d_a);
    d.answer_quality.values = Vector::Zero(n_a);
    d.answer_quality.labeled.assign(static_cast<std::size_t>(n_a), 0);

    std::unordered_set<long long> seen_aids;
    std::vector<Index> question_of;
    for (Index j = 0; j < n_a; ++j) {
        const auto& row = at.rows[static_cast<std::size_t>(j)];
        std::size_t line = at.row_lines[static_cast<std::size_t>(j)];
        long long aid = detail::csv_id(a_path, line, row[0], "answer id");
        if (!seen_aids.insert(aid).second)
            detail::csv_fail(a_path, line, "duplicate answer id " + std::to_string(aid));
        d.answer_ids.push_back(aid);
        long long qid = detail::csv_id(a_path, line, row[1], "question id");
        auto it = q_index.find(qid);
        if (it == q_index.end())
            detail::csv_fail(a_path, line, "unknown question id " + std::to_string(qid));
        question_of.push_back(it->second);
        if (!row[2].empty()) {
            d.answer_quality.values[j] = detail::csv_value(a_path, line, row[2], "score");
            d.answer_quality.labeled[static_cast<std::size_t>(j)] = 1;
        }
        for (Index c = 0; c < d_a; ++c)
            d.answer_features.values(j, c) = detail::csv_value(
                a_path, line, row[static_cast<std::size_t>(3 + c)],
                d.answer_features.schema[static_cast<std::size_t>(c)]);
    }

    d.association = AssociationMatrix::from_question_of(n_q, question_of);
    d.validate();
    return d;
}

} // namespace cops
