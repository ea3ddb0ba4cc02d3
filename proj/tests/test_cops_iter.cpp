#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cops/cops_iter.hpp"
#include "cops/metrics.hpp"
#include "cops/rng.hpp"
#include "support.hpp"

using namespace cops;
using test_support::build_design;
using test_support::correlated_corpus;
using test_support::fit_stats;

namespace {

// 4 questions / 7 answers with fixed values; bias columns included.
IterDesign small_design() {
    IterDesign d;
    Rng rng(501);
    d.xqt.resize(4, 3);
    d.xat.resize(7, 2);
    for (Index i = 0; i < 4; ++i) {
        d.xqt(i, 0) = rng.next_normal();
        d.xqt(i, 1) = rng.next_normal();
        d.xqt(i, 2) = 1.0;
    }
    for (Index j = 0; j < 7; ++j) {
        d.xat(j, 0) = rng.next_normal();
        d.xat(j, 1) = 1.0;
    }
    d.yq = QualityVector::all_labeled((Vector(4) << 0.9, 0.1, 0.5, 0.3).finished());
    d.ya = QualityVector::all_labeled((Vector(7) << 1.0, 0.8, 0.2, 0.4, 0.6, 0.0, 0.5).finished());
    d.assoc = AssociationMatrix::from_question_of(4, {0, 0, 1, 2, 2, 3, 3});
    return d;
}

ColumnStats stats_oracle(const Vector& v) {
    ColumnStats s;
    s.mean = v.mean();
    double sd = std::sqrt((v.array() - s.mean).square().sum() / static_cast<double>(v.size()));
    s.scale = sd < 1e-12 ? 1.0 : sd;
    return s;
}

Matrix augment_oracle(const Matrix& x, const Vector& col, const ColumnStats& s) {
    Matrix out(x.rows(), x.cols() + 1);
    out.leftCols(x.cols()) = x;
    out.col(x.cols()) = (col.array() - s.mean) / s.scale;
    return out;
}

} // namespace

// One alternation pass is exactly three ridge fits; the oracle replays them
// step by step.
TEST(CopsIter, SinglePassMatchesHandUnrolledFits) {
    IterDesign d = small_design();
    const double lambda = 0.1;
    IterFit fit = fit_cops_iter(d, lambda, 1, 0.0);

    Vector b_a0 = fit_ridge(d.xat, d.ya, lambda);
    Vector ya_hat = d.xat * b_a0;

    AssociationMatrix mn = row_normalize(d.assoc);
    Vector avg = mn.mul_vec(ya_hat);
    ColumnStats sq = stats_oracle(avg);
    Matrix xq_aug = augment_oracle(d.xqt, avg, sq);
    Vector b_q = fit_ridge(xq_aug, d.yq, lambda);
    Vector yq_hat = xq_aug * b_q;

    Vector down = d.assoc.tmul_vec(yq_hat);
    ColumnStats sa = stats_oracle(down);
    Matrix xa_aug = augment_oracle(d.xat, down, sa);
    Vector b_a = fit_ridge(xa_aug, d.ya, lambda);

    EXPECT_LT((fit.beta_a0 - b_a0).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((fit.beta_q - b_q).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((fit.beta_a - b_a).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(fit.score_q.mean, sq.mean, 1e-12);
    EXPECT_NEAR(fit.score_q.scale, sq.scale, 1e-12);
    EXPECT_NEAR(fit.score_a.mean, sa.mean, 1e-12);
    EXPECT_NEAR(fit.score_a.scale, sa.scale, 1e-12);
    EXPECT_EQ(fit.trace.iterations, 1);
}

TEST(CopsIter, InfiniteToleranceStopsAfterOnePass) {
    IterDesign d = small_design();
    IterFit fit = fit_cops_iter(d, 0.1, 50, std::numeric_limits<double>::infinity());
    EXPECT_EQ(fit.trace.iterations, 1);
    EXPECT_TRUE(fit.trace.converged);
}

TEST(CopsIter, AlternationSettlesWithinBudget) {
    IterDesign d = small_design();
    IterFit fit = fit_cops_iter(d, 0.1, 100, 1e-10);
    EXPECT_TRUE(fit.trace.converged);
    EXPECT_LT(fit.trace.iterations, 100);

    // Converged means a longer budget changes nothing.
    IterFit fit2 = fit_cops_iter(d, 0.1, 200, 1e-10);
    EXPECT_EQ((fit.beta_q - fit2.beta_q).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((fit.beta_a - fit2.beta_a).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CopsIter, RerunIsBitwiseIdentical) {
    IterDesign d = small_design();
    IterFit a = fit_cops_iter(d, 0.05, 20, 1e-9);
    IterFit b = fit_cops_iter(d, 0.05, 20, 1e-9);
    EXPECT_EQ((a.beta_q - b.beta_q).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((a.beta_a - b.beta_a).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((a.beta_a0 - b.beta_a0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CopsIter, UnlabeledTargetValuesAreNeverRead) {
    IterDesign d = small_design();
    d.yq.labeled = {1, 0, 1, 0};
    d.ya.labeled = {1, 1, 0, 1, 0, 1, 1};
    IterFit base = fit_cops_iter(d, 0.1, 5, 0.0);
    d.yq.values[1] = 1e9;
    d.ya.values[2] = -7e8;
    IterFit poisoned = fit_cops_iter(d, 0.1, 5, 0.0);
    EXPECT_EQ((base.beta_q - poisoned.beta_q).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((base.beta_a - poisoned.beta_a).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CopsIter, ZeroModelPredictsZeroEverywhere) {
    IterDesign d = small_design();
    IterFit zero;
    zero.beta_q = Vector::Zero(4);
    zero.beta_a = Vector::Zero(3);
    zero.beta_a0 = Vector::Zero(2);
    auto [yq, ya] = predict_cops_iter(zero, d.xqt, d.xat, d.assoc, 3);
    EXPECT_EQ(yq.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(ya.cwiseAbs().maxCoeff(), 0.0);
}

// With the estimated-score coefficient forced to zero the alternation chain
// carries no information, so predictions collapse to the transferred-feature
// linear model for any number of rounds.
TEST(CopsIter, ZeroScoreCoefficientReducesToPlainLinearModel) {
    IterDesign d = small_design();
    IterFit fit = fit_cops_iter(d, 0.1, 10, 1e-9);
    fit.beta_q[fit.beta_q.size() - 1] = 0.0;
    fit.beta_a[fit.beta_a.size() - 1] = 0.0;

    Vector expect_q = d.xqt * fit.beta_q.head(d.xqt.cols());
    Vector expect_a = d.xat * fit.beta_a.head(d.xat.cols());
    for (int rounds : {1, 3}) {
        auto [yq, ya] = predict_cops_iter(fit, d.xqt, d.xat, d.assoc, rounds);
        EXPECT_LT((yq - expect_q).cwiseAbs().maxCoeff(), 1e-14) << rounds;
        EXPECT_LT((ya - expect_a).cwiseAbs().maxCoeff(), 1e-14) << rounds;
    }
}

TEST(CopsIter, PredictValidatesRoundsAndShapes) {
    IterDesign d = small_design();
    IterFit fit = fit_cops_iter(d, 0.1, 5, 1e-9);
    EXPECT_THROW(predict_cops_iter(fit, d.xqt, d.xat, d.assoc, 0), std::invalid_argument);
    EXPECT_THROW(predict_cops_iter(fit, d.xqt, d.xat, d.assoc, -2), std::invalid_argument);
    Matrix wrong = Matrix::Zero(4, 5);
    EXPECT_THROW(predict_cops_iter(fit, wrong, d.xat, d.assoc, 1), std::invalid_argument);
    EXPECT_THROW(fit_cops_iter(d, 0.1, 0, 1e-9), std::invalid_argument);
}

// On a corpus with a real question-answer quality link, feeding estimated
// scores across sides should beat the independent ridge baseline on answers.
TEST(CopsIter, BeatsSeparateBaselineOnCorrelatedCorpus) {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Dataset corpus = correlated_corpus(500, seed);
        auto sr = split_dataset(corpus, 10.0, Rng::mix(seed, 777));
        auto stats = fit_stats(sr.train, Task::regression);
        auto train = build_design(sr.train, stats, Task::regression);
        auto test = build_design(sr.test, stats, Task::regression);

        IterDesign id{train.xqt, train.xat, train.yq, train.ya, train.assoc};
        IterFit fit = fit_cops_iter(id, 0.01, 20, 1e-9);
        auto [pq, pa] = predict_cops_iter(fit, test.xqt, test.xat, test.assoc, 1);

        Vector beta_sep = fit_ridge(train.xa, train.ya, 0.01);
        Vector pa_sep = test.xa * beta_sep;

        double rmse_iter = rmse(pa, test.ya.values);
        double rmse_sep = rmse(pa_sep, test.ya.values);
        if (rmse_iter <= rmse_sep) ++wins;
    }
    EXPECT_GE(wins, 9);
}
