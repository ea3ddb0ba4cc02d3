#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cops/scores.hpp"
#include "cops/standardize.hpp"
#include "cops/types.hpp"

namespace cops {

// The six fitting methods: the independent per-side baseline, the
// alternating co-predictor, and the four coupled variants named by their
// label/coupling loss pair (q = square, g = sigmoid).
enum class Method { separate, cops_iter, cops_qq, cops_qg, cops_gg, cops_gq };

inline constexpr const char* kMethodNames[] = {"separate", "cops-iter", "cops-qq",
                                               "cops-qg",  "cops-gg",   "cops-gq"};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::separate: return "separate";
        case Method::cops_iter: return "cops-iter";
        case Method::cops_qq: return "cops-qq";
        case Method::cops_qg: return "cops-qg";
        case Method::cops_gg: return "cops-gg";
        case Method::cops_gq: return "cops-gq";
    }
    return "?";
}

inline Method parse_method(std::string_view name) {
    for (int i = 0; i < 6; ++i)
        if (name == kMethodNames[i]) return static_cast<Method>(i);
    std::string valid;
    for (const char* n : kMethodNames) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected one of " +
                                valid + ")");
}

// Shared optimizer and model hyperparameters with the standard defaults:
// one coupling unit of weight, light ridge, small fixed step, 20 iterations,
// and a 1e-9 movement tolerance.
struct Hyper {
    double eta = 1.0;
    double lambda = 0.01;
    double gamma = 1e-6;
    int max_iter = 20;
    double tol = 1e-9;
};

// Iteration record left behind by the iterative fits. objectives holds one
// entry per evaluated point (initialization first).
struct FitTrace {
    std::vector<double> objectives;
    int iterations = 0;
    bool converged = false;
};

// Mean/scale pair for one derived column (the estimated-score feature).
struct ColumnStats {
    double mean = 0.0;
    double scale = 1.0;
};

// A fitted question/answer model: coefficients over the transferred designs,
// everything needed to rebuild those designs for new data (raw schemas,
// standardization statistics, score range), and the fitting configuration.
// beta_q and beta_a are indexed by the transferred design columns, bias last.
struct CoefficientPair {
    Method method = Method::separate;
    Task task = Task::classification;

    Vector beta_q;
    Vector beta_a;

    std::vector<std::string> feature_schema_q; // raw column names, pre-transfer
    std::vector<std::string> feature_schema_a;

    bool standardized = true;
    Standardizer stats_q;
    Standardizer stats_a;

    ScoreRange range_q; // regression target maps, from training labels
    ScoreRange range_a;

    Hyper hyper;
    std::uint64_t seed = 0;

    // cops-iter extras: the answer bootstrap model, the estimated-score column
    // statistics, and how many alternation rounds prediction replays.
    Vector beta_a0;
    ColumnStats score_stats_q;
    ColumnStats score_stats_a;
    int predict_rounds = 1;

    FitTrace trace; // in-memory fitting metadata; not serialized
};

} // namespace cops
