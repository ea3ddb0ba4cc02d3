#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cops/cops_iter.hpp"
#include "cops/cops_joint.hpp"
#include "cops/dataset.hpp"
#include "cops/metrics.hpp"
#include "cops/model.hpp"
#include "cops/model_io.hpp"
#include "cops/scores.hpp"
#include "cops/separate.hpp"
#include "cops/standardize.hpp"
#include "cops/transfer.hpp"
#include "cops/types.hpp"

namespace cops {

// Task support: the alternating co-predictor is defined on regression scores
// only, and the sigmoid-loss variants only make sense on ±1 labels. The
// baseline and the square/square variant carry both tasks.
inline bool method_supports(Method m, Task t) {
    switch (m) {
    case Method::separate:
    case Method::cops_qq:
        return true;
    case Method::cops_iter:
        return t == Task::regression;
    case Method::cops_qg:
    case Method::cops_gg:
    case Method::cops_gq:
        return t == Task::classification;
    }
    return false;
}

inline void require_supported(Method m, Task t) {
    if (!method_supports(m, t))
        throw std::invalid_argument(std::string("method ") + method_name(m) +
                                    " does not support the " + task_name(t) + " task");
}

// Label/coupling losses of the four coupled variants.
inline std::pair<LossKind, LossKind> method_losses(Method m) {
    switch (m) {
    case Method::cops_qq:
        return {LossKind::square, LossKind::square};
    case Method::cops_qg:
        return {LossKind::square, LossKind::sigmoid};
    case Method::cops_gg:
        return {LossKind::sigmoid, LossKind::sigmoid};
    case Method::cops_gq:
        return {LossKind::sigmoid, LossKind::square};
    default:
        throw std::invalid_argument(std::string("method ") + method_name(m) +
                                    " has no loss pair");
    }
}

namespace detail {

// Designs rebuilt from a model's stored statistics: plain (standardized plus
// bias) for the baseline, transferred for every coupled method.
struct PreparedDesign {
    Matrix xq;
    Matrix xa;
    AssociationMatrix assoc;
};

inline void require_schema(const char* side, const std::vector<std::string>& model_schema,
                           const std::vector<std::string>& data_schema) {
    if (model_schema == data_schema) return;
    auto join = [](const std::vector<std::string>& names) {
        std::string out;
        for (const auto& n : names) {
            if (!out.empty()) out += " ";
            out += n;
        }
        return out.empty() ? std::string("(none)") : out;
    };
    throw std::invalid_argument(std::string(side) +
                                " feature schema does not match the model\n  model: " +
                                join(model_schema) + "\n  data:  " + join(data_schema));
}

inline PreparedDesign prepare_design(const CoefficientPair& model, const Dataset& d) {
    require_schema("question", model.feature_schema_q, d.question_features.schema);
    require_schema("answer", model.feature_schema_a, d.answer_features.schema);

    PreparedDesign out;
    out.assoc = d.association;
    Matrix xq = append_bias(model.stats_q.apply(d.question_features.values));
    Matrix xa = append_bias(model.stats_a.apply(d.answer_features.values));
    if (model.method == Method::separate) {
        out.xq = std::move(xq);
        out.xa = std::move(xa);
        return out;
    }
    FeatureMatrix fq{std::move(xq), model.feature_schema_q};
    fq.schema.push_back("bias");
    FeatureMatrix fa{std::move(xa), model.feature_schema_a};
    fa.schema.push_back("bias");
    TransferredFeatures t = transfer_features(fq, fa, d.association);
    out.xq = std::move(t.questions.values);
    out.xa = std::move(t.answers.values);
    return out;
}

// Task targets for fitting and evaluation. Regression sides with no labels
// keep the default [0, 1] range and an all-unlabeled target, which the
// masked fitting paths accept.
struct PreparedTargets {
    QualityVector yq;
    QualityVector ya;
};

inline PreparedTargets prepare_targets(const Dataset& d, Task task, const ScoreRange& range_q,
                                       const ScoreRange& range_a) {
    PreparedTargets t;
    if (task == Task::regression) {
        t.yq = d.question_quality.n_labeled() > 0
                   ? normalize_scores(d.question_quality, range_q)
                   : d.question_quality;
        t.ya = d.answer_quality.n_labeled() > 0 ? normalize_scores(d.answer_quality, range_a)
                                                : d.answer_quality;
    } else {
        t.yq = threshold_labels(d.question_quality);
        t.ya = threshold_labels(d.answer_quality);
    }
    return t;
}

} // namespace detail

// Fits one method on the training corpus. The returned model carries every
// statistic needed to rebuild designs for unseen data, so prediction never
// touches the training set again.
inline CoefficientPair fit_method(const Dataset& train, Method method, Task task,
                                  const Hyper& hyper = {}, bool standardize = true,
                                  std::uint64_t seed = 0) {
    require_supported(method, task);
    train.validate();

    CoefficientPair model;
    model.method = method;
    model.task = task;
    model.hyper = hyper;
    model.seed = seed;
    model.standardized = standardize;
    model.feature_schema_q = train.question_features.schema;
    model.feature_schema_a = train.answer_features.schema;
    model.stats_q = standardize ? Standardizer::fit(train.question_features.values)
                                : Standardizer::identity(train.question_features.cols());
    model.stats_a = standardize ? Standardizer::fit(train.answer_features.values)
                                : Standardizer::identity(train.answer_features.cols());
    if (task == Task::regression) {
        if (train.question_quality.n_labeled() > 0)
            model.range_q = ScoreRange::from_labeled(train.question_quality);
        if (train.answer_quality.n_labeled() > 0)
            model.range_a = ScoreRange::from_labeled(train.answer_quality);
    }

    detail::PreparedDesign design = detail::prepare_design(model, train);
    detail::PreparedTargets targets =
        detail::prepare_targets(train, task, model.range_q, model.range_a);

    switch (method) {
    case Method::separate: {
        model.beta_q = fit_ridge(design.xq, targets.yq, hyper.lambda);
        model.beta_a = fit_ridge(design.xa, targets.ya, hyper.lambda);
        break;
    }
    case Method::cops_iter: {
        IterDesign d{design.xq, design.xa, targets.yq, targets.ya, design.assoc};
        IterFit fit = fit_cops_iter(d, hyper.lambda, hyper.max_iter, hyper.tol);
        model.beta_q = std::move(fit.beta_q);
        model.beta_a = std::move(fit.beta_a);
        model.beta_a0 = std::move(fit.beta_a0);
        model.score_stats_q = fit.score_q;
        model.score_stats_a = fit.score_a;
        model.trace = std::move(fit.trace);
        break;
    }
    default: {
        auto [g, h] = method_losses(method);
        JointProblem p{design.xq,    design.xa, targets.yq, targets.ya,
                       design.assoc, g,         h,          hyper.eta,
                       hyper.lambda};
        JointFit fit = method == Method::cops_qq
                           ? fit_qq_closed_form(p)
                           : fit_gd(p, hyper.gamma, hyper.max_iter, hyper.tol);
        model.beta_q = std::move(fit.beta_q);
        model.beta_a = std::move(fit.beta_a);
        model.trace = std::move(fit.trace);
        break;
    }
    }
    return model;
}

// Model-space scores for both sides: [0, 1]-normalized for regression
// models, real-valued margins for classification models.
struct Predictions {
    Vector score_q;
    Vector score_a;
};

inline Vector sign_labels(const Vector& scores) {
    Vector out(scores.size());
    for (Index i = 0; i < scores.size(); ++i) out[i] = scores[i] > 0.0 ? 1.0 : -1.0;
    return out;
}

inline Predictions predict_method(const CoefficientPair& model, const Dataset& d) {
    d.validate();
    detail::PreparedDesign design = detail::prepare_design(model, d);

    Predictions out;
    if (model.method == Method::cops_iter) {
        IterFit fit;
        fit.beta_q = model.beta_q;
        fit.beta_a = model.beta_a;
        fit.beta_a0 = model.beta_a0;
        fit.score_q = model.score_stats_q;
        fit.score_a = model.score_stats_a;
        std::tie(out.score_q, out.score_a) =
            predict_cops_iter(fit, design.xq, design.xa, design.assoc, model.predict_rounds);
        return out;
    }
    if (design.xq.cols() != model.beta_q.size() || design.xa.cols() != model.beta_a.size())
        throw std::invalid_argument("predict: design widths " + std::to_string(design.xq.cols()) +
                                    "/" + std::to_string(design.xa.cols()) +
                                    " do not match coefficient lengths " +
                                    std::to_string(model.beta_q.size()) + "/" +
                                    std::to_string(model.beta_a.size()));
    out.score_q = design.xq * model.beta_q;
    out.score_a = design.xa * model.beta_a;
    return out;
}

// Held-out quality of one fitted model: RMSE in the normalized score space
// for regression, mismatch fraction over unambiguous labels for
// classification. Each side is measured over its labeled test rows only.
struct Evaluation {
    double question_metric = 0.0;
    double answer_metric = 0.0;
};

namespace detail {

inline double side_metric(Task task, const Vector& predicted, const QualityVector& target) {
    std::vector<Index> rows = target.labeled_indices();
    if (rows.empty())
        throw std::invalid_argument("evaluate: no labeled rows to score");
    Vector p(static_cast<Index>(rows.size())), t(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        p[static_cast<Index>(k)] = predicted[rows[k]];
        t[static_cast<Index>(k)] = target.values[rows[k]];
    }
    if (task == Task::regression) return rmse(p, t);
    return prediction_error(sign_labels(p), t);
}

} // namespace detail

inline Evaluation evaluate_method(const CoefficientPair& model, const Dataset& test) {
    Predictions pred = predict_method(model, test);
    detail::PreparedTargets targets =
        detail::prepare_targets(test, model.task, model.range_q, model.range_a);
    Evaluation out;
    out.question_metric = detail::side_metric(model.task, pred.score_q, targets.yq);
    out.answer_metric = detail::side_metric(model.task, pred.score_a, targets.ya);
    return out;
}

} // namespace cops
