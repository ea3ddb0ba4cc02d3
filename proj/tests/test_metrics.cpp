#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cops/metrics.hpp"
#include "cops/rng.hpp"

using namespace cops;

namespace {

Vector random_vector(Rng& rng, Index n, double scale = 1.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = scale * rng.next_normal();
    return v;
}

// Naive single-purpose reimplementations used as oracles.
double rmse_oracle(const Vector& p, const Vector& a) {
    double s = 0.0;
    for (Index i = 0; i < p.size(); ++i) s += (p[i] - a[i]) * (p[i] - a[i]);
    return std::sqrt(s / static_cast<double>(p.size()));
}

double error_oracle(const Vector& p, const Vector& a) {
    Index bad = 0;
    for (Index i = 0; i < p.size(); ++i)
        if (p[i] != a[i]) ++bad;
    return static_cast<double>(bad) / static_cast<double>(p.size());
}

double pearson_oracle(const Vector& x, const Vector& y) {
    double mx = 0.0, my = 0.0;
    for (Index i = 0; i < x.size(); ++i) mx += x[i];
    for (Index i = 0; i < x.size(); ++i) my += y[i];
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

int bin_oracle(long long s) {
    if (s < 0) return 1;
    if (s == 0) return 2;
    if (s == 1) return 3;
    if (s == 2) return 4;
    if (s == 3) return 5;
    if (s == 4) return 6;
    if (s == 5) return 7;
    if (s >= 6 && s <= 10) return 8;
    if (s >= 11 && s <= 50) return 9;
    if (s >= 51 && s <= 100) return 10;
    return 11;
}

} // namespace

TEST(Metrics, RmseHandExample) {
    Vector p(2), a(2);
    p << 1, 2;
    a << 1, 4;
    EXPECT_DOUBLE_EQ(rmse(p, a), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(rmse(p, p), 0.0);
    EXPECT_THROW(rmse(p, Vector(3)), std::invalid_argument);
    EXPECT_THROW(rmse(Vector(0), Vector(0)), std::invalid_argument);
}

TEST(Metrics, RmseMatchesOracleExactly) {
    Rng rng(71);
    for (int t = 0; t < 50; ++t) {
        Index n = 1 + static_cast<Index>(rng.next_below(200));
        Vector p = random_vector(rng, n, 3.0);
        Vector a = random_vector(rng, n, 3.0);
        EXPECT_EQ(rmse(p, a), rmse_oracle(p, a));
    }
}

TEST(Metrics, PredictionErrorCountsMismatches) {
    Vector p(4), a(4);
    p << 1, -1, 1, -1;
    a << 1, 1, 1, 1;
    EXPECT_DOUBLE_EQ(prediction_error(p, a), 0.5);
    EXPECT_THROW(prediction_error(Vector(0), Vector(0)), std::invalid_argument);

    Rng rng(72);
    for (int t = 0; t < 50; ++t) {
        Index n = 1 + static_cast<Index>(rng.next_below(100));
        Vector x(n), y(n);
        for (Index i = 0; i < n; ++i) {
            x[i] = rng.next_unit() < 0.5 ? -1.0 : 1.0;
            y[i] = rng.next_unit() < 0.5 ? -1.0 : 1.0;
        }
        EXPECT_EQ(prediction_error(x, y), error_oracle(x, y));
    }
}

TEST(Metrics, PearsonKnownValues) {
    Vector x(3), up(3), down(3), flat(3);
    x << 1, 2, 3;
    up << 2, 4, 6;
    down << 6, 4, 2;
    flat << 5, 5, 5;
    EXPECT_NEAR(pearson(x, up).r, 1.0, 1e-12);
    EXPECT_NEAR(pearson(x, down).r, -1.0, 1e-12);
    EXPECT_THROW(pearson(x, flat), std::invalid_argument);
    EXPECT_THROW(pearson(Vector(2), Vector(2)), std::invalid_argument);

    // Orthogonal deviation pattern: r and the t statistic are both zero.
    Vector v(3);
    v << 1, -2, 1;
    PearsonResult pr = pearson(x, v);
    EXPECT_NEAR(pr.r, 0.0, 1e-12);
    EXPECT_NEAR(pr.t, 0.0, 1e-12);
}

TEST(Metrics, PearsonMatchesOracleAndTFormula) {
    Rng rng(73);
    for (int t = 0; t < 50; ++t) {
        Index n = 3 + static_cast<Index>(rng.next_below(100));
        Vector x = random_vector(rng, n);
        Vector y = random_vector(rng, n);
        PearsonResult pr = pearson(x, y);
        double r = pearson_oracle(x, y);
        EXPECT_EQ(pr.r, r);
        EXPECT_EQ(pr.n, n);
        double expected_t = r * std::sqrt(static_cast<double>(n - 2) / (1.0 - r * r));
        EXPECT_DOUBLE_EQ(pr.t, expected_t);
    }
}

TEST(Metrics, PearsonIsAffineInvariant) {
    Rng rng(74);
    Vector x = random_vector(rng, 60);
    Vector y = random_vector(rng, 60);
    double base = pearson(x, y).r;
    Vector scaled = 3.5 * x + Vector::Constant(60, 11.0);
    EXPECT_NEAR(pearson(scaled, y).r, base, 1e-12);
    Vector negated = -2.0 * x + Vector::Constant(60, 1.0);
    EXPECT_NEAR(pearson(negated, y).r, -base, 1e-12);
}

TEST(Metrics, BinScoreMatchesRangeTable) {
    for (long long s = -200; s <= 300; ++s) EXPECT_EQ(bin_score(s), bin_oracle(s)) << s;
    // Boundary spot checks.
    EXPECT_EQ(bin_score(-1), 1);
    EXPECT_EQ(bin_score(0), 2);
    EXPECT_EQ(bin_score(5), 7);
    EXPECT_EQ(bin_score(6), 8);
    EXPECT_EQ(bin_score(10), 8);
    EXPECT_EQ(bin_score(11), 9);
    EXPECT_EQ(bin_score(50), 9);
    EXPECT_EQ(bin_score(51), 10);
    EXPECT_EQ(bin_score(100), 10);
    EXPECT_EQ(bin_score(101), 11);
}

TEST(Metrics, BinDistributionRowsAreDistributions) {
    // Question scores 0 and 7; three answers under each.
    std::vector<long long> qs = {0, 7};
    std::vector<long long> as = {1, -4, 1, 200, 0, 55};
    std::vector<Index> owner = {0, 0, 0, 1, 1, 1};
    BinDistribution bd = bin_distribution(qs, as, owner);

    EXPECT_EQ(bd.row_counts[1], 3); // question bin 2 (score 0)
    EXPECT_EQ(bd.row_counts[7], 3); // question bin 8 (score 7)
    EXPECT_NEAR(bd.table(1, 2), 2.0 / 3.0, 1e-15); // answers scoring 1
    EXPECT_NEAR(bd.table(1, 0), 1.0 / 3.0, 1e-15); // the negative answer
    EXPECT_NEAR(bd.table(7, 10), 1.0 / 3.0, 1e-15);

    for (int i = 0; i < kScoreBins; ++i) {
        double sum = bd.table.row(i).sum();
        if (bd.row_counts[static_cast<std::size_t>(i)] > 0) {
            EXPECT_NEAR(sum, 1.0, 1e-12);
        } else {
            EXPECT_EQ(sum, 0.0); // empty rows stay zero and are flagged by count
        }
    }
}

TEST(Metrics, UtilityRatioTradesAccuracyForTime) {
    EXPECT_DOUBLE_EQ(utility_ratio(0.25, 3.0), 0.25);
    EXPECT_GT(utility_ratio(0.2, 1.0), utility_ratio(0.2, 2.0));
    EXPECT_THROW(utility_ratio(0.1, 0.0), std::invalid_argument);
    EXPECT_THROW(utility_ratio(0.1, -1.0), std::invalid_argument);
}

TEST(Metrics, BinLabelNamesElevenRanges) {
    EXPECT_STREQ(bin_label(1), "<0");
    EXPECT_STREQ(bin_label(8), "6-10");
    EXPECT_STREQ(bin_label(11), ">100");
    EXPECT_THROW(bin_label(0), std::invalid_argument);
    EXPECT_THROW(bin_label(12), std::invalid_argument);
}
