#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cops/types.hpp"

namespace cops {

// Sparse question-answer incidence map in CSR form. Row i lists the answers of
// question i; each answer belongs to exactly one question, so the column array
// is a permutation of the answer indices. The matrix carries one of two weight
// modes: incidence (every stored entry is 1) or row-normalized (entry weight
// 1/degree(i), so multiplying a vector of answer values yields per-question
// means). Construction validates index ranges and answer uniqueness; empty
// rows are representable, but row_normalize and the averaging products reject
// them, and Dataset validation forbids them outright.
class AssociationMatrix {
public:
    AssociationMatrix() = default;

    // Builds from the answer -> question map, answers in index order.
    static AssociationMatrix from_question_of(Index n_questions,
                                              const std::vector<Index>& question_of) {
        AssociationMatrix m;
        m.n_q_ = n_questions;
        m.n_a_ = static_cast<Index>(question_of.size());
        if (n_questions < 0)
            throw std::invalid_argument("AssociationMatrix: negative question count");
        m.question_of_ = question_of;
        m.row_ptr_.assign(static_cast<std::size_t>(n_questions) + 1, 0);
        for (Index j = 0; j < m.n_a_; ++j) {
            Index q = question_of[static_cast<std::size_t>(j)];
            if (q < 0 || q >= n_questions)
                throw std::invalid_argument("AssociationMatrix: answer " + std::to_string(j) +
                                            " references question " + std::to_string(q) +
                                            " outside [0, " + std::to_string(n_questions) + ")");
            ++m.row_ptr_[static_cast<std::size_t>(q) + 1];
        }
        for (std::size_t i = 1; i < m.row_ptr_.size(); ++i)
            m.row_ptr_[i] += m.row_ptr_[i - 1];
        m.col_.resize(static_cast<std::size_t>(m.n_a_));
        std::vector<Index> cursor(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
        for (Index j = 0; j < m.n_a_; ++j) {
            Index q = question_of[static_cast<std::size_t>(j)];
            m.col_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(q)]++)] = j;
        }
        return m;
    }

    // Builds from explicit (question, answer) pairs; each answer must appear
    // exactly once.
    static AssociationMatrix from_pairs(Index n_questions, Index n_answers,
                                        const std::vector<std::pair<Index, Index>>& entries) {
        if (n_answers < 0)
            throw std::invalid_argument("AssociationMatrix: negative answer count");
        std::vector<Index> question_of(static_cast<std::size_t>(n_answers), -1);
        for (auto [q, a] : entries) {
            if (a < 0 || a >= n_answers)
                throw std::invalid_argument("AssociationMatrix: answer index " + std::to_string(a) +
                                            " outside [0, " + std::to_string(n_answers) + ")");
            if (question_of[static_cast<std::size_t>(a)] != -1)
                throw std::invalid_argument("AssociationMatrix: answer " + std::to_string(a) +
                                            " appears in more than one entry");
            question_of[static_cast<std::size_t>(a)] = q;
        }
        for (Index a = 0; a < n_answers; ++a)
            if (question_of[static_cast<std::size_t>(a)] == -1)
                throw std::invalid_argument("AssociationMatrix: answer " + std::to_string(a) +
                                            " has no question entry");
        return from_question_of(n_questions, question_of);
    }

    Index n_questions() const { return n_q_; }
    Index n_answers() const { return n_a_; }
    bool normalized() const { return normalized_; }

    Index degree(Index q) const {
        return row_ptr_[static_cast<std::size_t>(q) + 1] - row_ptr_[static_cast<std::size_t>(q)];
    }

    Index question_of(Index a) const { return question_of_[static_cast<std::size_t>(a)]; }

    const std::vector<Index>& question_map() const { return question_of_; }

    // Answer indices of question q, in answer-index order.
    std::vector<Index> answers_of(Index q) const {
        auto b = row_ptr_[static_cast<std::size_t>(q)];
        auto e = row_ptr_[static_cast<std::size_t>(q) + 1];
        return std::vector<Index>(col_.begin() + b, col_.begin() + e);
    }

    // M x or M~ x for an answer-indexed vector x; result is question-indexed.
    Vector mul_vec(const Vector& x) const {
        check_answer_dim(x.size(), "mul_vec");
        Vector out = Vector::Zero(n_q_);
        for (Index q = 0; q < n_q_; ++q) {
            double s = 0.0;
            for (Index k = row_ptr_[static_cast<std::size_t>(q)];
                 k < row_ptr_[static_cast<std::size_t>(q) + 1]; ++k)
                s += x[col_[static_cast<std::size_t>(k)]];
            out[q] = normalized_ ? require_weighted(q, s) : s;
        }
        return out;
    }

    // M X or M~ X for an answer-indexed matrix; rows of the result are
    // per-question sums (incidence) or means (normalized).
    Matrix mul_mat(const Matrix& x) const {
        check_answer_dim(x.rows(), "mul_mat");
        Matrix out = Matrix::Zero(n_q_, x.cols());
        for (Index q = 0; q < n_q_; ++q) {
            for (Index k = row_ptr_[static_cast<std::size_t>(q)];
                 k < row_ptr_[static_cast<std::size_t>(q) + 1]; ++k)
                out.row(q) += x.row(col_[static_cast<std::size_t>(k)]);
            if (normalized_) {
                Index d = degree(q);
                if (d == 0)
                    throw std::invalid_argument(empty_row_message(q));
                out.row(q) /= static_cast<double>(d);
            }
        }
        return out;
    }

    // M' y or M~' y for a question-indexed vector; answer j receives
    // y(question_of(j)), scaled by 1/degree in the normalized mode.
    Vector tmul_vec(const Vector& y) const {
        check_question_dim(y.size(), "tmul_vec");
        Vector out(n_a_);
        for (Index a = 0; a < n_a_; ++a) {
            Index q = question_of_[static_cast<std::size_t>(a)];
            out[a] = normalized_ ? y[q] / static_cast<double>(degree(q)) : y[q];
        }
        return out;
    }

    // M' X or M~' X for a question-indexed matrix.
    Matrix tmul_mat(const Matrix& y) const {
        check_question_dim(y.rows(), "tmul_mat");
        Matrix out(n_a_, y.cols());
        for (Index a = 0; a < n_a_; ++a) {
            Index q = question_of_[static_cast<std::size_t>(a)];
            out.row(a) = y.row(q);
            if (normalized_) out.row(a) /= static_cast<double>(degree(q));
        }
        return out;
    }

    // Dense copy with the current weight mode; test and debugging aid.
    Matrix dense() const {
        Matrix out = Matrix::Zero(n_q_, n_a_);
        for (Index a = 0; a < n_a_; ++a) {
            Index q = question_of_[static_cast<std::size_t>(a)];
            out(q, a) = normalized_ ? 1.0 / static_cast<double>(degree(q)) : 1.0;
        }
        return out;
    }

    friend AssociationMatrix row_normalize(const AssociationMatrix& m);

private:
    void check_answer_dim(Index got, const char* op) const {
        if (got != n_a_)
            throw std::invalid_argument(std::string("AssociationMatrix::") + op + ": operand has " +
                                        std::to_string(got) + " rows, expected " +
                                        std::to_string(n_a_) + " answers");
    }
    void check_question_dim(Index got, const char* op) const {
        if (got != n_q_)
            throw std::invalid_argument(std::string("AssociationMatrix::") + op + ": operand has " +
                                        std::to_string(got) + " rows, expected " +
                                        std::to_string(n_q_) + " questions");
    }
    double require_weighted(Index q, double sum) const {
        Index d = degree(q);
        if (d == 0)
            throw std::invalid_argument(empty_row_message(q));
        return sum / static_cast<double>(d);
    }
    static std::string empty_row_message(Index q) {
        return "AssociationMatrix: question " + std::to_string(q) +
               " has no answers; normalized weights are undefined";
    }

    Index n_q_ = 0;
    Index n_a_ = 0;
    std::vector<Index> row_ptr_{0};
    std::vector<Index> col_;
    std::vector<Index> question_of_;
    bool normalized_ = false;
};

// Returns the row-normalized form M~; every row must have at least one answer.
inline AssociationMatrix row_normalize(const AssociationMatrix& m) {
    for (Index q = 0; q < m.n_questions(); ++q)
        if (m.degree(q) == 0)
            throw std::invalid_argument("row_normalize: question " + std::to_string(q) +
                                        " has no answers");
    AssociationMatrix out = m;
    out.normalized_ = true;
    return out;
}

} // namespace cops
