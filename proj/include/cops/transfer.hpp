#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cops/association.hpp"
#include "cops/dataset.hpp"
#include "cops/types.hpp"

namespace cops {

// Cross-side feature transfer. Each question row gains the mean feature
// vector of its own answers, X_q~ = [X_q, M~ X_a]; each answer row gains its
// question's feature vector, X_a~ = [X_a, M' X_q]. The input association may
// be in either weight mode; averaging always uses the normalized form and the
// copy-down always uses incidence weights.
struct TransferredFeatures {
    FeatureMatrix questions; // X_q~
    FeatureMatrix answers;   // X_a~
};

inline TransferredFeatures transfer_features(const FeatureMatrix& xq, const FeatureMatrix& xa,
                                             const AssociationMatrix& m) {
    if (xq.rows() != m.n_questions())
        throw std::invalid_argument("transfer_features: " + std::to_string(xq.rows()) +
                                    " question rows vs association with " +
                                    std::to_string(m.n_questions()));
    if (xa.rows() != m.n_answers())
        throw std::invalid_argument("transfer_features: " + std::to_string(xa.rows()) +
                                    " answer rows vs association with " +
                                    std::to_string(m.n_answers()));

    AssociationMatrix mn = row_normalize(m);
    TransferredFeatures out;

    out.questions.values.resize(xq.rows(), xq.cols() + xa.cols());
    out.questions.values.leftCols(xq.cols()) = xq.values;
    out.questions.values.rightCols(xa.cols()) = mn.mul_mat(xa.values);
    out.questions.schema = xq.schema;
    for (const auto& name : xa.schema)
        out.questions.schema.push_back("answers_mean." + name);

    // Incidence weights for the copy-down direction, regardless of the weight
    // mode the caller's matrix is in.
    AssociationMatrix plain = AssociationMatrix::from_question_of(m.n_questions(), m.question_map());
    out.answers.values.resize(xa.rows(), xa.cols() + xq.cols());
    out.answers.values.leftCols(xa.cols()) = xa.values;
    out.answers.values.rightCols(xq.cols()) = plain.tmul_mat(xq.values);
    out.answers.schema = xa.schema;
    for (const auto& name : xq.schema)
        out.answers.schema.push_back("question." + name);
    return out;
}

} // namespace cops
