#pragma once

// Shared fixtures for the model-layer tests: hand-rolled design building
// (standardize, bias, transfer, target construction) kept deliberately
// independent of the library's own preparation pipeline so the two can be
// compared.

#include <cstdint>

#include "cops/dataset.hpp"
#include "cops/scores.hpp"
#include "cops/standardize.hpp"
#include "cops/synth.hpp"
#include "cops/transfer.hpp"
#include "cops/types.hpp"

namespace test_support {

using namespace cops;

struct BuiltDesign {
    Matrix xq, xa;   // standardized + bias
    Matrix xqt, xat; // transferred
    QualityVector yq, ya;
    AssociationMatrix assoc;
    ScoreRange range_q, range_a; // regression target maps (training side)
};

struct DesignStats {
    Standardizer q, a;
    ScoreRange range_q, range_a;
};

inline DesignStats fit_stats(const Dataset& train, Task task) {
    DesignStats s;
    s.q = Standardizer::fit(train.question_features.values);
    s.a = Standardizer::fit(train.answer_features.values);
    if (task == Task::regression) {
        s.range_q = ScoreRange::from_labeled(train.question_quality);
        s.range_a = ScoreRange::from_labeled(train.answer_quality);
    }
    return s;
}

// Builds designs for d using statistics fitted elsewhere (pass the training
// stats when building the test side).
inline BuiltDesign build_design(const Dataset& d, const DesignStats& stats, Task task) {
    BuiltDesign b;
    b.assoc = d.association;
    b.xq = append_bias(stats.q.apply(d.question_features.values));
    b.xa = append_bias(stats.a.apply(d.answer_features.values));

    FeatureMatrix fq{b.xq, d.question_features.schema};
    fq.schema.push_back("bias");
    FeatureMatrix fa{b.xa, d.answer_features.schema};
    fa.schema.push_back("bias");
    TransferredFeatures t = transfer_features(fq, fa, d.association);
    b.xqt = t.questions.values;
    b.xat = t.answers.values;

    if (task == Task::regression) {
        b.range_q = stats.range_q;
        b.range_a = stats.range_a;
        b.yq = normalize_scores(d.question_quality, stats.range_q);
        b.ya = normalize_scores(d.answer_quality, stats.range_a);
    } else {
        b.yq = threshold_labels(d.question_quality);
        b.ya = threshold_labels(d.answer_quality);
    }
    return b;
}

inline BuiltDesign build_design(const Dataset& train, Task task) {
    return build_design(train, fit_stats(train, task), task);
}

inline Dataset correlated_corpus(Index n_questions, std::uint64_t seed, double rho = 0.6) {
    SynthSpec spec;
    spec.n_questions = n_questions;
    spec.rho = rho;
    spec.seed = seed;
    return generate_synthetic(spec);
}

} // namespace test_support
