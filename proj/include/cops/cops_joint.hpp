#pragma once

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "cops/association.hpp"
#include "cops/dataset.hpp"
#include "cops/loss.hpp"
#include "cops/model.hpp"
#include "cops/separate.hpp"
#include "cops/types.hpp"

namespace cops {

// One jointly-coupled fitting problem over both sides:
//
//   sum_{labeled q} g(u_i, y_q_i) + sum_{labeled a} g(v_j, y_a_j)
//     + eta * sum_{all q} h(u_i, mean of v over i's answers)
//     + lambda (|b_q|^2 + |b_a|^2)
//
// with u = X_q~ b_q and v = X_a~ b_a. The label terms see only labeled rows;
// the coupling term always runs over every training question. Both losses are
// selectable per term, giving the four square/sigmoid variants.
struct JointProblem {
    Matrix xqt;
    Matrix xat;
    QualityVector yq;
    QualityVector ya;
    AssociationMatrix assoc;
    LossKind g = LossKind::square;
    LossKind h = LossKind::square;
    double eta = 1.0;
    double lambda = 0.01;

    void validate() const {
        if (xqt.rows() != yq.size() || xqt.rows() != assoc.n_questions())
            throw std::invalid_argument("JointProblem: question rows disagree (design " +
                                        std::to_string(xqt.rows()) + ", targets " +
                                        std::to_string(yq.size()) + ", association " +
                                        std::to_string(assoc.n_questions()) + ")");
        if (xat.rows() != ya.size() || xat.rows() != assoc.n_answers())
            throw std::invalid_argument("JointProblem: answer rows disagree (design " +
                                        std::to_string(xat.rows()) + ", targets " +
                                        std::to_string(ya.size()) + ", association " +
                                        std::to_string(assoc.n_answers()) + ")");
        if (!std::isfinite(eta) || eta < 0.0)
            throw std::invalid_argument("JointProblem: eta must be finite and >= 0");
        if (!std::isfinite(lambda) || lambda < 0.0)
            throw std::invalid_argument("JointProblem: lambda must be finite and >= 0");
    }
};

inline double objective(const JointProblem& p, const Vector& beta_q, const Vector& beta_a) {
    p.validate();
    Vector u = predict_scores(p.xqt, beta_q);
    Vector v = predict_scores(p.xat, beta_a);
    Vector avg = row_normalize(p.assoc).mul_vec(v);

    double total = 0.0;
    for (Index i = 0; i < u.size(); ++i)
        if (p.yq.is_labeled(i)) total += loss_value(p.g, u[i], p.yq.values[i]);
    for (Index j = 0; j < v.size(); ++j)
        if (p.ya.is_labeled(j)) total += loss_value(p.g, v[j], p.ya.values[j]);
    for (Index i = 0; i < u.size(); ++i)
        total += p.eta * loss_value(p.h, u[i], avg[i]);
    total += p.lambda * (beta_q.squaredNorm() + beta_a.squaredNorm());
    return total;
}

// Exact gradient of the objective, assembled streamwise: per-row loss partials
// are contracted against the designs, so the cost is O((n_q + n_a) d) per
// call and no n x n intermediate ever exists. The coupling term reaches b_a
// through the averaged estimates, which is the M~' back-propagation below.
inline std::pair<Vector, Vector> gradient(const JointProblem& p, const Vector& beta_q,
                                          const Vector& beta_a) {
    p.validate();
    AssociationMatrix mn = row_normalize(p.assoc);
    Vector u = predict_scores(p.xqt, beta_q);
    Vector v = predict_scores(p.xat, beta_a);
    Vector avg = mn.mul_vec(v);

    Vector wq(u.size());
    for (Index i = 0; i < u.size(); ++i) {
        double gi = p.yq.is_labeled(i) ? loss_partial_u(p.g, u[i], p.yq.values[i]) : 0.0;
        wq[i] = gi + p.eta * loss_partial_u(p.h, u[i], avg[i]);
    }
    Vector grad_q = p.xqt.transpose() * wq + 2.0 * p.lambda * beta_q;

    Vector wa(v.size());
    for (Index j = 0; j < v.size(); ++j)
        wa[j] = p.ya.is_labeled(j) ? loss_partial_u(p.g, v[j], p.ya.values[j]) : 0.0;
    Vector wh(u.size());
    for (Index i = 0; i < u.size(); ++i) wh[i] = p.eta * loss_partial_v(p.h, u[i], avg[i]);
    Vector grad_a = p.xat.transpose() * (wa + mn.tmul_vec(wh)) + 2.0 * p.lambda * beta_a;

    return {std::move(grad_q), std::move(grad_a)};
}

struct JointFit {
    Vector beta_q;
    Vector beta_a;
    FitTrace trace;
};

namespace detail {

// Per-side ridge initialization; a side with no labels starts at zero, which
// is the empty-sum minimizer.
inline Vector ridge_or_zero(const Matrix& x, const QualityVector& y, double lambda) {
    if (y.n_labeled() == 0) return Vector::Zero(x.cols());
    return fit_ridge(x, y, lambda);
}

} // namespace detail

// Batch gradient descent on the joint objective. Both sides are initialized
// by their independent ridge fits, then updated simultaneously (each step's
// two gradients are evaluated at the same point) with a fixed step gamma.
// Stops when both coefficient moves fall below tol, or at max_iter.
inline JointFit fit_gd(const JointProblem& p, double gamma, int max_iter, double tol) {
    p.validate();
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("fit_gd: step size must be finite and nonnegative");
    if (max_iter < 0)
        throw std::invalid_argument("fit_gd: negative iteration cap");

    JointFit out;
    out.beta_q = detail::ridge_or_zero(p.xqt, p.yq, p.lambda);
    out.beta_a = detail::ridge_or_zero(p.xat, p.ya, p.lambda);
    out.trace.objectives.push_back(objective(p, out.beta_q, out.beta_a));

    for (int it = 1; it <= max_iter; ++it) {
        auto [gq, ga] = gradient(p, out.beta_q, out.beta_a);
        out.beta_q -= gamma * gq;
        out.beta_a -= gamma * ga;

        double obj = objective(p, out.beta_q, out.beta_a);
        if (!std::isfinite(obj))
            throw std::runtime_error("fit_gd: objective diverged at iteration " +
                                     std::to_string(it) + "; reduce the step size (gamma = " +
                                     std::to_string(gamma) + ")");
        out.trace.objectives.push_back(obj);
        out.trace.iterations = it;
        if (gamma * gq.norm() < tol && gamma * ga.norm() < tol) {
            out.trace.converged = true;
            break;
        }
    }
    return out;
}

// Closed-form minimizer for the square/square variant. Setting both gradients
// to zero gives one symmetric positive-definite block system,
//
//   [ Xql'Xql + eta Xq~'Xq~ + lambda I      -eta Xq~' (M~ Xa~)            ] [b_q]   [Xql' yql]
//   [ -eta (M~ Xa~)' Xq~                  Xal'Xal + eta (M~ Xa~)'(M~ Xa~)  ] [b_a] = [Xal' yal]
//                                                          + lambda I
//
// where the label blocks use only labeled rows and the coupling blocks run
// over every training question. Solved by LDLT and verified against the
// assembled system; a singular assembly (lambda = 0) is reported.
inline JointFit fit_qq_closed_form(const JointProblem& p) {
    p.validate();
    if (p.g != LossKind::square || p.h != LossKind::square)
        throw std::invalid_argument(std::string("fit_qq_closed_form: closed form exists only for "
                                                 "the square/square variant, got g = ") +
                                    loss_name(p.g) + ", h = " + loss_name(p.h));

    auto [xql, yql] = detail::labeled_rows(p.xqt, p.yq);
    auto [xal, yal] = detail::labeled_rows(p.xat, p.ya);
    Matrix mxa = row_normalize(p.assoc).mul_mat(p.xat);

    const Index dq = p.xqt.cols();
    const Index da = p.xat.cols();
    Matrix a(dq + da, dq + da);
    a.topLeftCorner(dq, dq) = xql.transpose() * xql + p.eta * (p.xqt.transpose() * p.xqt);
    a.topLeftCorner(dq, dq).diagonal().array() += p.lambda;
    a.topRightCorner(dq, da) = -p.eta * (p.xqt.transpose() * mxa);
    a.bottomLeftCorner(da, dq) = a.topRightCorner(dq, da).transpose();
    a.bottomRightCorner(da, da) = xal.transpose() * xal + p.eta * (mxa.transpose() * mxa);
    a.bottomRightCorner(da, da).diagonal().array() += p.lambda;

    Vector rhs(dq + da);
    rhs.head(dq) = xql.transpose() * yql;
    rhs.tail(da) = xal.transpose() * yal;

    Eigen::LDLT<Matrix> ldlt(a);
    Vector sol = ldlt.solve(rhs);
    Vector residual = a * sol - rhs;
    double scale = a.cwiseAbs().rowwise().sum().maxCoeff() * sol.cwiseAbs().maxCoeff() +
                   rhs.cwiseAbs().maxCoeff() + 1.0;
    if (detail::ldlt_rank_deficient(ldlt) || !sol.allFinite() ||
        residual.cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::runtime_error("fit_qq_closed_form: block system not solved to tolerance; it is "
                                 "likely singular, use lambda > 0");

    JointFit out;
    out.beta_q = sol.head(dq);
    out.beta_a = sol.tail(da);
    out.trace.iterations = 0;
    out.trace.converged = true;
    out.trace.objectives.push_back(objective(p, out.beta_q, out.beta_a));
    return out;
}

} // namespace cops
