#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cops/dataset.hpp"
#include "cops/types.hpp"

namespace cops {

// Raw-score range observed on training labels; fixes the regression target
// map v -> (v - min) / (max - min).
struct ScoreRange {
    double min = 0.0;
    double max = 1.0;

    static ScoreRange from_labeled(const QualityVector& q) {
        bool any = false;
        ScoreRange r{0.0, 0.0};
        for (Index i = 0; i < q.size(); ++i) {
            if (!q.is_labeled(i)) continue;
            double v = q.values[i];
            if (!any) {
                r.min = r.max = v;
                any = true;
            } else {
                r.min = std::min(r.min, v);
                r.max = std::max(r.max, v);
            }
        }
        if (!any)
            throw std::invalid_argument("ScoreRange: no labeled scores to take a range from");
        return r;
    }
};

// Maps labeled raw scores into [0, 1] with the given range, clamping values
// that fall outside it (test-time scores beyond the training range).
// Unlabeled entries stay unlabeled with value 0.
inline QualityVector normalize_scores(const QualityVector& raw, const ScoreRange& range) {
    if (!(range.max > range.min))
        throw std::invalid_argument("normalize_scores: degenerate range [" +
                                    std::to_string(range.min) + ", " + std::to_string(range.max) +
                                    "]");
    QualityVector out = raw;
    const double span = range.max - range.min;
    for (Index i = 0; i < raw.size(); ++i) {
        if (!raw.is_labeled(i)) {
            out.values[i] = 0.0;
            continue;
        }
        out.values[i] = std::clamp((raw.values[i] - range.min) / span, 0.0, 1.0);
    }
    return out;
}

// Classification targets from raw scores: s <= 0 maps to -1, s >= 5 maps to
// +1, and scores strictly between lose their label (the ambiguous middle is
// excluded from both fitting and evaluation).
inline QualityVector threshold_labels(const QualityVector& raw) {
    QualityVector out = raw;
    for (Index i = 0; i < raw.size(); ++i) {
        if (!raw.is_labeled(i)) {
            out.values[i] = 0.0;
            continue;
        }
        double s = raw.values[i];
        if (s <= 0.0) {
            out.values[i] = -1.0;
        } else if (s >= 5.0) {
            out.values[i] = 1.0;
        } else {
            out.values[i] = 0.0;
            out.labeled[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

} // namespace cops
