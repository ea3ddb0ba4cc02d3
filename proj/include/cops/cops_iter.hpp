#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "cops/association.hpp"
#include "cops/dataset.hpp"
#include "cops/model.hpp"
#include "cops/separate.hpp"
#include "cops/types.hpp"

namespace cops {

// Inputs to the alternating fit: transferred designs (bias column included),
// regression targets in [0, 1] with label masks, and the association map.
struct IterDesign {
    Matrix xqt;
    Matrix xat;
    QualityVector yq;
    QualityVector ya;
    AssociationMatrix assoc;

    void validate() const {
        if (xqt.rows() != yq.size() || xqt.rows() != assoc.n_questions())
            throw std::invalid_argument("IterDesign: question rows disagree");
        if (xat.rows() != ya.size() || xat.rows() != assoc.n_answers())
            throw std::invalid_argument("IterDesign: answer rows disagree");
    }
};

struct IterFit {
    Vector beta_q;  // over [xqt columns, estimated-score column]
    Vector beta_a;  // over [xat columns, estimated-score column]
    Vector beta_a0; // bootstrap fit over xat alone
    ColumnStats score_q; // standardization of the question-side score column
    ColumnStats score_a;
    FitTrace trace;
};

namespace detail {

inline ColumnStats column_stats(const Vector& v) {
    ColumnStats s;
    s.mean = v.mean();
    double var = (v.array() - s.mean).square().sum() / static_cast<double>(v.size());
    double sd = std::sqrt(var);
    s.scale = sd < 1e-12 ? 1.0 : sd;
    return s;
}

inline Vector standardize_column(const Vector& v, const ColumnStats& s) {
    return (v.array() - s.mean) / s.scale;
}

inline Matrix with_column(const Matrix& x, const Vector& col) {
    Matrix out(x.rows(), x.cols() + 1);
    out.leftCols(x.cols()) = x;
    out.col(x.cols()) = col;
    return out;
}

} // namespace detail

// Alternating ridge fits with cross-side estimated scores as an extra feature.
// The answer side is bootstrapped from its own design; then each pass refits
// the question side with the per-question mean of the current answer estimates
// appended, and the answer side with its question's estimate appended. Labels
// drive the fits; estimates are produced for every row. The pass loop stops
// when both coefficient vectors move less than tol in L2 against the previous
// pass (the first pass compares against zero vectors, so an infinite tol
// stops after exactly one pass).
inline IterFit fit_cops_iter(const IterDesign& d, double lambda, int max_iter, double tol) {
    d.validate();
    if (max_iter < 1)
        throw std::invalid_argument("fit_cops_iter: need at least one alternation pass");

    AssociationMatrix mn = row_normalize(d.assoc);
    // Incidence view: the copy-down direction hands each answer its question's
    // estimate verbatim, whatever weight mode the caller's matrix is in.
    AssociationMatrix plain =
        AssociationMatrix::from_question_of(d.assoc.n_questions(), d.assoc.question_map());
    IterFit fit;
    fit.beta_a0 = fit_ridge(d.xat, d.ya, lambda);
    Vector ya_hat = d.xat * fit.beta_a0;

    Vector prev_q = Vector::Zero(d.xqt.cols() + 1);
    Vector prev_a = Vector::Zero(d.xat.cols() + 1);
    for (int pass = 1; pass <= max_iter; ++pass) {
        Vector avg = mn.mul_vec(ya_hat);
        fit.score_q = detail::column_stats(avg);
        Matrix xq_aug = detail::with_column(d.xqt, detail::standardize_column(avg, fit.score_q));
        fit.beta_q = fit_ridge(xq_aug, d.yq, lambda);
        Vector yq_hat = xq_aug * fit.beta_q;

        Vector down = plain.tmul_vec(yq_hat);
        fit.score_a = detail::column_stats(down);
        Matrix xa_aug = detail::with_column(d.xat, detail::standardize_column(down, fit.score_a));
        fit.beta_a = fit_ridge(xa_aug, d.ya, lambda);
        ya_hat = xa_aug * fit.beta_a;

        fit.trace.iterations = pass;
        double move_q = (fit.beta_q - prev_q).norm();
        double move_a = (fit.beta_a - prev_a).norm();
        if (move_q < tol && move_a < tol) {
            fit.trace.converged = true;
            break;
        }
        prev_q = fit.beta_q;
        prev_a = fit.beta_a;
    }
    return fit;
}

// Replays the alternation on new data for a fixed number of rounds (>= 1):
// bootstrap answer estimates, then alternately refresh question and answer
// estimates using the trained coefficients and the training-time column
// statistics.
inline std::pair<Vector, Vector> predict_cops_iter(const IterFit& fit, const Matrix& xqt,
                                                   const Matrix& xat,
                                                   const AssociationMatrix& assoc, int rounds) {
    if (rounds < 1)
        throw std::invalid_argument("predict_cops_iter: rounds must be >= 1, got " +
                                    std::to_string(rounds));
    if (xqt.rows() != assoc.n_questions() || xat.rows() != assoc.n_answers())
        throw std::invalid_argument("predict_cops_iter: design rows do not match the association");
    if (xat.cols() + 1 != fit.beta_a.size() || xqt.cols() + 1 != fit.beta_q.size() ||
        xat.cols() != fit.beta_a0.size())
        throw std::invalid_argument("predict_cops_iter: design width does not match the model");

    AssociationMatrix mn = row_normalize(assoc);
    AssociationMatrix plain =
        AssociationMatrix::from_question_of(assoc.n_questions(), assoc.question_map());
    Vector ya_hat = xat * fit.beta_a0;
    Vector yq_hat;
    for (int r = 0; r < rounds; ++r) {
        Vector avg = mn.mul_vec(ya_hat);
        yq_hat = detail::with_column(xqt, detail::standardize_column(avg, fit.score_q)) * fit.beta_q;
        Vector down = plain.tmul_vec(yq_hat);
        ya_hat = detail::with_column(xat, detail::standardize_column(down, fit.score_a)) * fit.beta_a;
    }
    return {std::move(yq_hat), std::move(ya_hat)};
}

} // namespace cops
