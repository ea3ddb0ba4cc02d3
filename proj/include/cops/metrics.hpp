#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cops/types.hpp"

namespace cops {

// Evaluation metrics. All of them are plain left-to-right accumulations over
// the given rows; callers filter to labeled entries first.

inline double rmse(const Vector& predicted, const Vector& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("rmse: length mismatch (" + std::to_string(predicted.size()) +
                                    " vs " + std::to_string(actual.size()) + ")");
    if (predicted.size() == 0)
        throw std::invalid_argument("rmse: no rows to evaluate");
    double s = 0.0;
    for (Index i = 0; i < predicted.size(); ++i) {
        double d = predicted[i] - actual[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(predicted.size()));
}

// Fraction of label mismatches; labels are +-1.
inline double prediction_error(const Vector& predicted, const Vector& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("prediction_error: length mismatch (" +
                                    std::to_string(predicted.size()) + " vs " +
                                    std::to_string(actual.size()) + ")");
    if (predicted.size() == 0)
        throw std::invalid_argument("prediction_error: no rows to evaluate");
    Index wrong = 0;
    for (Index i = 0; i < predicted.size(); ++i)
        if (predicted[i] != actual[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(predicted.size());
}

struct PearsonResult {
    double r = 0.0;
    double t = 0.0; // t-statistic with n - 2 degrees of freedom
    Index n = 0;
};

// Sample correlation with its significance statistic t = r sqrt((n-2)/(1-r^2)).
// Degenerate inputs (fewer than 3 points, or a zero-variance side) are
// rejected rather than reported as NaN.
inline PearsonResult pearson(const Vector& x, const Vector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson: length mismatch (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()) + ")");
    if (x.size() < 3)
        throw std::invalid_argument("pearson: need at least 3 points for the t statistic");
    const Index n = x.size();
    double mx = 0.0, my = 0.0;
    for (Index i = 0; i < n; ++i) mx += x[i];
    for (Index i = 0; i < n; ++i) my += y[i];
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (Index i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: a side has zero variance, correlation is undefined");
    PearsonResult out;
    out.n = n;
    out.r = sxy / std::sqrt(sxx * syy);
    double denom = 1.0 - out.r * out.r;
    if (denom <= 0.0) denom = 1e-300; // |r| = 1 up to rounding
    out.t = out.r * std::sqrt(static_cast<double>(n - 2) / denom);
    return out;
}

// Score histogram bin, 1-based. The eleven bins: s < 0, s = 0, 1, 2, 3, 4, 5,
// 6-10, 11-50, 51-100, s > 100.
inline int bin_score(long long s) {
    if (s < 0) return 1;
    if (s <= 5) return static_cast<int>(s) + 2;
    if (s <= 10) return 8;
    if (s <= 50) return 9;
    if (s <= 100) return 10;
    return 11;
}

constexpr int kScoreBins = 11;

inline const char* bin_label(int bin) {
    static const char* labels[kScoreBins] = {"<0", "0",     "1",      "2",    "3",   "4",
                                             "5",  "6-10", "11-50", "51-100", ">100"};
    if (bin < 1 || bin > kScoreBins) throw std::invalid_argument("bin_label: bin out of range");
    return labels[bin - 1];
}

struct BinDistribution {
    Matrix table;                 // 11 x 11, row = question bin, column = answer bin
    std::vector<Index> row_counts; // answers under each question bin
};

// Joint question-bin / answer-bin distribution: row i is the distribution of
// answer-score bins among answers whose question's score falls in bin i.
// Rows with no mass stay zero and are recognizable by row_counts.
inline BinDistribution bin_distribution(const std::vector<long long>& question_scores,
                                        const std::vector<long long>& answer_scores,
                                        const std::vector<Index>& question_of) {
    if (answer_scores.size() != question_of.size())
        throw std::invalid_argument("bin_distribution: answer rows disagree");
    BinDistribution out;
    out.table = Matrix::Zero(kScoreBins, kScoreBins);
    out.row_counts.assign(kScoreBins, 0);
    for (std::size_t j = 0; j < answer_scores.size(); ++j) {
        Index q = question_of[j];
        if (q < 0 || q >= static_cast<Index>(question_scores.size()))
            throw std::invalid_argument("bin_distribution: answer " + std::to_string(j) +
                                        " references question " + std::to_string(q));
        int qb = bin_score(question_scores[static_cast<std::size_t>(q)]);
        int ab = bin_score(answer_scores[j]);
        out.table(qb - 1, ab - 1) += 1.0;
        ++out.row_counts[static_cast<std::size_t>(qb - 1)];
    }
    for (int i = 0; i < kScoreBins; ++i)
        if (out.row_counts[static_cast<std::size_t>(i)] > 0)
            out.table.row(i) /= static_cast<double>(out.row_counts[static_cast<std::size_t>(i)]);
    return out;
}

// Accuracy per second of fitting time; ranks methods by how much quality they
// buy per unit of compute.
inline double utility_ratio(double error, double seconds) {
    if (!(seconds > 0.0))
        throw std::invalid_argument("utility_ratio: seconds must be positive");
    return (1.0 - error) / seconds;
}

} // namespace cops
