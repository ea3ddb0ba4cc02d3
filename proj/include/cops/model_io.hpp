#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "cops/keyed_text.hpp"
#include "cops/model.hpp"
#include "cops/text.hpp"

namespace cops {

// Model files are line-oriented "key: value" text. The first content line
// pins the format; later keys may appear in any order but each exactly once.
// Vectors and name lists are space-separated, doubles in round-trip form, so
// a written model reads back bit-identically. '#' lines are comments.
inline constexpr const char* kModelFormat = "cops-model/1";

// Writes the model as one self-describing text file. A non-empty comment is
// emitted as '#'-prefixed header lines.
inline void write_model(const CoefficientPair& model, const std::string& path,
                        const std::string& comment = "") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    if (!comment.empty())
        for (auto part : split(comment, '\n')) out << "# " << part << "\n";

    out << "format: " << kModelFormat << "\n";
    out << "method: " << method_name(model.method) << "\n";
    out << "task: " << task_name(model.task) << "\n";
    out << "eta: " << format_double(model.hyper.eta) << "\n";
    out << "lambda: " << format_double(model.hyper.lambda) << "\n";
    out << "gamma: " << format_double(model.hyper.gamma) << "\n";
    out << "max_iter: " << model.hyper.max_iter << "\n";
    out << "tol: " << format_double(model.hyper.tol) << "\n";
    out << "seed: " << model.seed << "\n";
    out << "standardized: " << (model.standardized ? 1 : 0) << "\n";
    out << "schema_q: " << detail::join_names(model.feature_schema_q) << "\n";
    out << "schema_a: " << detail::join_names(model.feature_schema_a) << "\n";
    out << "mean_q: " << detail::join_vector(model.stats_q.mean) << "\n";
    out << "scale_q: " << detail::join_vector(model.stats_q.scale) << "\n";
    out << "mean_a: " << detail::join_vector(model.stats_a.mean) << "\n";
    out << "scale_a: " << detail::join_vector(model.stats_a.scale) << "\n";
    out << "range_q: " << format_double(model.range_q.min) << " " << format_double(model.range_q.max)
        << "\n";
    out << "range_a: " << format_double(model.range_a.min) << " " << format_double(model.range_a.max)
        << "\n";
    out << "beta_q: " << detail::join_vector(model.beta_q) << "\n";
    out << "beta_a: " << detail::join_vector(model.beta_a) << "\n";
    out << "beta_a0: " << detail::join_vector(model.beta_a0) << "\n";
    out << "score_stats_q: " << format_double(model.score_stats_q.mean) << " "
        << format_double(model.score_stats_q.scale) << "\n";
    out << "score_stats_a: " << format_double(model.score_stats_a.mean) << " "
        << format_double(model.score_stats_a.scale) << "\n";
    out << "predict_rounds: " << model.predict_rounds << "\n";
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

inline CoefficientPair read_model(const std::string& path) {
    detail::KeyedText text = detail::read_keyed_text(path, kModelFormat, "model");
    text.require_known({"method",  "task",    "eta",      "lambda",       "gamma",
                        "max_iter", "tol",     "seed",     "standardized", "schema_q",
                        "schema_a", "mean_q",  "scale_q",  "mean_a",       "scale_a",
                        "range_q",  "range_a", "beta_q",   "beta_a",       "beta_a0",
                        "score_stats_q", "score_stats_a", "predict_rounds"});

    CoefficientPair m;
    try {
        m.method = parse_method(text.get("method"));
        m.task = parse_task(text.get("task"));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    m.hyper.eta = text.get_double("eta");
    m.hyper.lambda = text.get_double("lambda");
    m.hyper.gamma = text.get_double("gamma");
    m.hyper.max_iter = static_cast<int>(text.get_ll("max_iter"));
    m.hyper.tol = text.get_double("tol");
    m.seed = static_cast<std::uint64_t>(text.get_ll("seed"));
    long long standardized = text.get_ll("standardized");
    if (standardized != 0 && standardized != 1)
        text.fail("standardized", "standardized must be 0 or 1");
    m.standardized = standardized == 1;
    m.feature_schema_q = text.get_names("schema_q");
    m.feature_schema_a = text.get_names("schema_a");
    m.stats_q.mean = text.get_vector("mean_q");
    m.stats_q.scale = text.get_vector("scale_q");
    m.stats_a.mean = text.get_vector("mean_a");
    m.stats_a.scale = text.get_vector("scale_a");
    std::tie(m.range_q.min, m.range_q.max) = text.get_pair("range_q");
    std::tie(m.range_a.min, m.range_a.max) = text.get_pair("range_a");
    m.beta_q = text.get_vector("beta_q");
    m.beta_a = text.get_vector("beta_a");
    m.beta_a0 = text.get_vector("beta_a0");
    std::tie(m.score_stats_q.mean, m.score_stats_q.scale) = text.get_pair("score_stats_q");
    std::tie(m.score_stats_a.mean, m.score_stats_a.scale) = text.get_pair("score_stats_a");
    m.predict_rounds = static_cast<int>(text.get_ll("predict_rounds"));
    if (m.predict_rounds < 1) text.fail("predict_rounds", "predict_rounds must be >= 1");

    auto check_stats = [&](const char* side, const std::vector<std::string>& schema,
                           const Standardizer& stats) {
        if (stats.mean.size() != static_cast<Index>(schema.size()) ||
            stats.scale.size() != static_cast<Index>(schema.size()))
            throw std::runtime_error(path + ": " + side + " statistics cover " +
                                     std::to_string(stats.mean.size()) + "/" +
                                     std::to_string(stats.scale.size()) + " columns, schema has " +
                                     std::to_string(schema.size()));
    };
    check_stats("question", m.feature_schema_q, m.stats_q);
    check_stats("answer", m.feature_schema_a, m.stats_a);
    return m;
}

} // namespace cops
