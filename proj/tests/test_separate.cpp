#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "cops/rng.hpp"
#include "cops/separate.hpp"

using namespace cops;

namespace {

// Independent minimizer of the ridge objective: steepest descent with exact
// line search (the objective is quadratic, so the optimal step along the
// gradient has a closed form that needs no matrix solve). Never touches the
// normal-equation path under test.
Vector ridge_descent_oracle(const Matrix& x, const Vector& y, double lambda) {
    Vector beta = Vector::Zero(x.cols());
    const double stop = 1e-11 * (1.0 + y.norm());
    for (int it = 0; it < 300000; ++it) {
        Vector g = 2.0 * (x.transpose() * (x * beta - y)) + 2.0 * lambda * beta;
        double gn = g.norm();
        if (gn < stop) break;
        Vector hg = 2.0 * (x.transpose() * (x * g)) + 2.0 * lambda * g;
        double step = g.squaredNorm() / g.dot(hg);
        beta -= step * g;
    }
    return beta;
}

double ridge_objective(const Matrix& x, const Vector& y, double lambda, const Vector& beta) {
    return (x * beta - y).squaredNorm() + lambda * beta.squaredNorm();
}

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.next_normal();
    return m;
}

} // namespace

TEST(Ridge, IdentityDesignHalvesTargets) {
    Matrix x = Matrix::Identity(2, 2);
    Vector y(2);
    y << 1.0, 1.0;
    Vector beta = fit_ridge(x, y, 1.0);
    EXPECT_NEAR(beta[0], 0.5, 1e-12);
    EXPECT_NEAR(beta[1], 0.5, 1e-12);
}

TEST(Ridge, RecoversExactCoefficientsAtZeroLambda) {
    Matrix x(3, 2);
    x << 1, 0, 1, 1, 0, 2;
    Vector truth(2);
    truth << 2.0, -1.0;
    Vector beta = fit_ridge(x, Vector(x * truth), 0.0);
    EXPECT_NEAR((beta - truth).cwiseAbs().maxCoeff(), 0.0, 1e-10);
}

TEST(Ridge, MatchesExactLineSearchDescentOracle) {
    Rng rng(2024);
    const double lambdas[] = {0.1, 0.5, 1.0};
    for (int trial = 0; trial < 20; ++trial) {
        Index rows = 5 + static_cast<Index>(rng.next_below(46));
        Index cols = 1 + static_cast<Index>(rng.next_below(8));
        Matrix x = random_matrix(rng, rows, cols);
        Vector y(rows);
        for (Index i = 0; i < rows; ++i) y[i] = rng.next_normal();
        double lambda = lambdas[trial % 3];

        Vector fast = fit_ridge(x, y, lambda);
        Vector slow = ridge_descent_oracle(x, y, lambda);
        EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-6)
            << "trial " << trial << " (" << rows << "x" << cols << ")";
    }
}

TEST(Ridge, SolutionBeatsNearbyPerturbations) {
    Rng rng(55);
    Matrix x = random_matrix(rng, 30, 4);
    Vector y(30);
    for (Index i = 0; i < 30; ++i) y[i] = rng.next_normal();
    Vector beta = fit_ridge(x, y, 0.3);
    double best = ridge_objective(x, y, 0.3, beta);
    for (int k = 0; k < 100; ++k) {
        Vector d(4);
        for (Index i = 0; i < 4; ++i) d[i] = rng.next_normal();
        d *= 1e-3 / d.norm();
        EXPECT_LE(best, ridge_objective(x, y, 0.3, beta + d) + 1e-15);
    }
}

TEST(Ridge, IgnoresUnlabeledRows) {
    Rng rng(6);
    Matrix x = random_matrix(rng, 10, 3);
    QualityVector y = QualityVector::all_labeled(Vector::Zero(10));
    for (Index i = 0; i < 10; ++i) y.values[i] = rng.next_normal();
    // Poison three rows and unlabel them; the fit must not change.
    Vector clean = fit_ridge(x, y, 0.2);
    for (Index i : {1, 4, 7}) {
        y.labeled[static_cast<std::size_t>(i)] = 0;
    }
    Vector masked = fit_ridge(x, y, 0.2);
    y.values[1] = 1e12;
    y.values[4] = -3e9;
    Vector poisoned = fit_ridge(x, y, 0.2);
    EXPECT_EQ((masked - poisoned).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_NE((masked - clean).cwiseAbs().maxCoeff(), 0.0);

    QualityVector none = y;
    std::fill(none.labeled.begin(), none.labeled.end(), 0);
    EXPECT_THROW(fit_ridge(x, none, 0.2), std::invalid_argument);
}

TEST(Ridge, OutputInvariantToRowOrder) {
    Rng rng(13);
    Matrix x = random_matrix(rng, 25, 5);
    Vector y(25);
    for (Index i = 0; i < 25; ++i) y[i] = rng.next_normal();
    Vector base = fit_ridge(x, y, 0.05);

    std::vector<Index> perm(25);
    for (Index i = 0; i < 25; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rng shuffler(14);
    shuffler.shuffle(perm);
    Matrix xp(25, 5);
    Vector yp(25);
    for (Index i = 0; i < 25; ++i) {
        xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
        yp[i] = y[perm[static_cast<std::size_t>(i)]];
    }
    EXPECT_LT((fit_ridge(xp, yp, 0.05) - base).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ridge, ReportsSingularSystems) {
    Matrix x(4, 2);
    x << 1, 1, 2, 2, 3, 3, 4, 4; // duplicated column
    Vector y(4);
    y << 1, 2, 3, 5;
    EXPECT_THROW(fit_ridge(x, y, 0.0), std::runtime_error);
    EXPECT_NO_THROW(fit_ridge(x, y, 0.01));
    EXPECT_THROW(fit_ridge(x, y, -1.0), std::invalid_argument);
}

TEST(SeparateGd, ZeroStepStopsOnFirstIteration) {
    Matrix x(3, 2);
    x << 1, 0, 0, 1, 1, 1;
    QualityVector y = QualityVector::all_labeled((Vector(3) << 1, 2, 3).finished());

    GdResult r = fit_separate_gd(x, y, 0.1, LossKind::square, 0.0, 50, 1e-9);
    EXPECT_TRUE(r.trace.converged);
    EXPECT_EQ(r.trace.iterations, 1);
    EXPECT_EQ(r.beta.cwiseAbs().maxCoeff(), 0.0);

    // With tol = 0 the zero step never satisfies the strict move test, so the
    // loop runs its full budget; one objective per evaluated point.
    GdResult full = fit_separate_gd(x, y, 0.1, LossKind::square, 0.0, 50, 0.0);
    EXPECT_FALSE(full.trace.converged);
    EXPECT_EQ(full.trace.iterations, 50);
    EXPECT_EQ(full.trace.objectives.size(), 51u);
}

TEST(SeparateGd, ReachesRidgeSolutionOnSquareLoss) {
    Rng rng(888);
    Matrix x = random_matrix(rng, 40, 3);
    Vector yv(40);
    for (Index i = 0; i < 40; ++i) yv[i] = rng.next_normal();
    QualityVector y = QualityVector::all_labeled(yv);

    // Safe fixed step below 2 / L for this quadratic.
    double l = 2.0 * (Eigen::SelfAdjointEigenSolver<Matrix>(x.transpose() * x)
                          .eigenvalues()
                          .maxCoeff() +
                      0.5);
    GdResult r = fit_separate_gd(x, y, 0.5, LossKind::square, 1.0 / l, 200000, 1e-14);
    EXPECT_LT((r.beta - fit_ridge(x, y, 0.5)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_TRUE(r.trace.converged);
}

TEST(SeparateGd, SigmoidLossSeparatesSignedData) {
    Matrix x(6, 1);
    x << -2, -1, -1.5, 2, 1, 1.5;
    QualityVector y = QualityVector::all_labeled((Vector(6) << -1, -1, -1, 1, 1, 1).finished());
    GdResult r = fit_separate_gd(x, y, 0.01, LossKind::sigmoid, 0.5, 1000, 0.0);
    Vector labels = predict_labels(predict_scores(x, r.beta));
    for (Index i = 0; i < 6; ++i) EXPECT_EQ(labels[i], y.values[i]);
    // Objectives fall monotonically at this step size.
    for (std::size_t k = 1; k < r.trace.objectives.size(); ++k)
        EXPECT_LE(r.trace.objectives[k], r.trace.objectives[k - 1] + 1e-12);
}

TEST(SeparateGd, DivergenceIsReportedNotReturned) {
    Rng rng(21);
    Matrix x = random_matrix(rng, 10, 2);
    Vector yv(10);
    for (Index i = 0; i < 10; ++i) yv[i] = rng.next_normal();
    QualityVector y = QualityVector::all_labeled(yv);
    try {
        fit_separate_gd(x, y, 0.01, LossKind::square, 1e160, 10, 0.0);
        FAIL() << "expected divergence to throw";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos);
    }
}

TEST(Predict, ScoresAndSignLabels) {
    Matrix x(3, 2);
    x << 1, 0, 0, 1, -1, 1;
    Vector beta(2);
    beta << 2.0, 2.0;
    Vector s = predict_scores(x, beta);
    EXPECT_EQ(s[0], 2.0);
    EXPECT_EQ(s[2], 0.0);
    Vector labels = predict_labels(s);
    EXPECT_EQ(labels[0], 1.0);
    EXPECT_EQ(labels[2], -1.0); // exact zero breaks negative

    // The all-zero model scores everything 0 and labels everything -1.
    Vector zero_labels = predict_labels(predict_scores(x, Vector::Zero(2)));
    for (Index i = 0; i < 3; ++i) EXPECT_EQ(zero_labels[i], -1.0);

    EXPECT_THROW(predict_scores(x, Vector::Zero(3)), std::invalid_argument);
}
