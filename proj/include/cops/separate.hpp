#pragma once

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <string>

#include "cops/dataset.hpp"
#include "cops/loss.hpp"
#include "cops/model.hpp"
#include "cops/types.hpp"

namespace cops {

namespace detail {

// Copies the labeled rows of (x, y) into a dense pair. Fitting never sees
// unlabeled rows.
inline std::pair<Matrix, Vector> labeled_rows(const Matrix& x, const QualityVector& y) {
    if (x.rows() != y.size())
        throw std::invalid_argument("labeled_rows: " + std::to_string(x.rows()) +
                                    " design rows vs " + std::to_string(y.size()) + " targets");
    auto idx = y.labeled_indices();
    Matrix xl(static_cast<Index>(idx.size()), x.cols());
    Vector yl(static_cast<Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        xl.row(static_cast<Index>(i)) = x.row(idx[i]);
        yl[static_cast<Index>(i)] = y.values[idx[i]];
    }
    return {std::move(xl), std::move(yl)};
}

} // namespace detail

namespace detail {

// The smallest pivot (relative to the largest) an LDLT factorization of a
// normal-equation system may carry before the solve is rejected as singular.
inline constexpr double kMinPivotRatio = 1e-13;

// True when the factorization of a symmetric nonnegative-definite system shows
// a pivot at or below rounding scale. The residual check alone cannot catch
// this: normal equations are always consistent, so on a rank-deficient system
// Eigen's pseudoinverse handling of tiny pivots returns one of the infinitely
// many solutions with a deceptively small residual.
inline bool ldlt_rank_deficient(const Eigen::LDLT<Matrix>& ldlt) {
    if (ldlt.info() != Eigen::Success) return true;
    Vector d = ldlt.vectorD();
    double top = d.maxCoeff();
    return !(top > 0.0) || d.minCoeff() < kMinPivotRatio * top;
}

} // namespace detail

// Ridge regression, the per-side baseline fit: minimizes
// sum_i (x_i' b - y_i)^2 + lambda |b|^2 over the labeled rows via the normal
// equations (X'X + lambda I) b = X'y. The solve is LDLT; the factorization's
// conditioning and the normal-equation residual are both checked, so a
// semidefinite system (lambda = 0 with collinear columns) is reported instead
// of returned.
inline Vector fit_ridge(const Matrix& x, const QualityVector& y, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("fit_ridge: lambda must be finite and nonnegative");
    auto [xl, yl] = detail::labeled_rows(x, y);
    if (xl.rows() == 0)
        throw std::invalid_argument("fit_ridge: no labeled rows to fit on");

    Matrix gram = xl.transpose() * xl;
    gram.diagonal().array() += lambda;
    Vector rhs = xl.transpose() * yl;
    Eigen::LDLT<Matrix> ldlt(gram);
    Vector beta = ldlt.solve(rhs);

    // Normal-equation residual, scaled by the problem size. LDLT on a
    // positive-definite system lands far below this; a singular one does not.
    Vector residual = xl.transpose() * (xl * beta - yl) + lambda * beta;
    double bound = 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff());
    if (detail::ldlt_rank_deficient(ldlt) || !beta.allFinite() ||
        residual.cwiseAbs().maxCoeff() > bound)
        throw std::runtime_error("fit_ridge: normal equations not solved to tolerance; the system "
                                 "is likely singular, use lambda > 0");
    return beta;
}

inline Vector fit_ridge(const Matrix& x, const Vector& y, double lambda) {
    return fit_ridge(x, QualityVector::all_labeled(y), lambda);
}

struct GdResult {
    Vector beta;
    FitTrace trace;
};

// Single-side gradient descent on the same objective with either loss,
// starting from init (zero by default). Fixed step gamma; stops when the step
// moves the coefficients by less than tol in L2, or after max_iter steps.
// gamma = 0 therefore stops immediately after the first (no-op) step unless
// tol is 0 too.
inline GdResult fit_separate_gd(const Matrix& x, const QualityVector& y, double lambda,
                                LossKind kind, double gamma, int max_iter, double tol,
                                const Vector* init = nullptr) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("fit_separate_gd: step size must be finite and nonnegative");
    if (max_iter < 0)
        throw std::invalid_argument("fit_separate_gd: negative iteration cap");
    auto [xl, yl] = detail::labeled_rows(x, y);
    if (xl.rows() == 0)
        throw std::invalid_argument("fit_separate_gd: no labeled rows to fit on");

    Vector beta = init ? *init : Vector::Zero(x.cols());
    if (beta.size() != x.cols())
        throw std::invalid_argument("fit_separate_gd: init has " + std::to_string(beta.size()) +
                                    " coefficients, design has " + std::to_string(x.cols()));

    auto objective = [&](const Vector& b) {
        Vector u = xl * b;
        double s = 0.0;
        for (Index i = 0; i < u.size(); ++i) s += loss_value(kind, u[i], yl[i]);
        return s + lambda * b.squaredNorm();
    };

    GdResult out;
    out.trace.objectives.push_back(objective(beta));
    for (int it = 1; it <= max_iter; ++it) {
        Vector u = xl * beta;
        Vector w(u.size());
        for (Index i = 0; i < u.size(); ++i) w[i] = loss_partial_u(kind, u[i], yl[i]);
        Vector grad = xl.transpose() * w + 2.0 * lambda * beta;
        beta -= gamma * grad;

        double obj = objective(beta);
        if (!std::isfinite(obj))
            throw std::runtime_error("fit_separate_gd: objective diverged at iteration " +
                                     std::to_string(it) + "; reduce the step size (gamma = " +
                                     std::to_string(gamma) + ")");
        out.trace.objectives.push_back(obj);
        out.trace.iterations = it;
        if (gamma * grad.norm() < tol) {
            out.trace.converged = true;
            break;
        }
    }
    out.beta = std::move(beta);
    return out;
}

// Raw model output x' b per row.
inline Vector predict_scores(const Matrix& x, const Vector& beta) {
    if (x.cols() != beta.size())
        throw std::invalid_argument("predict_scores: design has " + std::to_string(x.cols()) +
                                    " columns, coefficients have " + std::to_string(beta.size()));
    return x * beta;
}

// Hard labels in {-1, +1}; zero breaks toward -1 so the all-zero model
// predicts the negative class everywhere.
inline Vector predict_labels(const Vector& scores) {
    Vector out(scores.size());
    for (Index i = 0; i < scores.size(); ++i) out[i] = scores[i] > 0.0 ? 1.0 : -1.0;
    return out;
}

} // namespace cops
