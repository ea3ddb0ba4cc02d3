#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "cops/association.hpp"
#include "cops/rng.hpp"
#include "cops/types.hpp"

namespace cops {

// Dense per-post feature block plus the column names. One row per post; all
// values finite.
struct FeatureMatrix {
    Matrix values;
    std::vector<std::string> schema;

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }

    void validate(const char* what) const {
        if (static_cast<Index>(schema.size()) != values.cols())
            throw std::invalid_argument(std::string(what) + ": schema names " +
                                        std::to_string(schema.size()) + " columns, matrix has " +
                                        std::to_string(values.cols()));
        if (!values.allFinite())
            throw std::invalid_argument(std::string(what) + ": non-finite feature value");
    }
};

// Quality targets with a labeled mask. Unlabeled entries hold 0 and are
// ignored by every fitting and evaluation routine.
struct QualityVector {
    Vector values;
    std::vector<std::uint8_t> labeled;

    Index size() const { return values.size(); }

    static QualityVector all_labeled(Vector v) {
        QualityVector q;
        q.labeled.assign(static_cast<std::size_t>(v.size()), 1);
        q.values = std::move(v);
        return q;
    }

    Index n_labeled() const {
        Index n = 0;
        for (auto f : labeled) n += f ? 1 : 0;
        return n;
    }

    bool is_labeled(Index i) const { return labeled[static_cast<std::size_t>(i)] != 0; }

    std::vector<Index> labeled_indices() const {
        std::vector<Index> out;
        for (Index i = 0; i < size(); ++i)
            if (is_labeled(i)) out.push_back(i);
        return out;
    }

    void validate(const char* what) const {
        if (static_cast<Index>(labeled.size()) != values.size())
            throw std::invalid_argument(std::string(what) + ": mask length " +
                                        std::to_string(labeled.size()) + " does not match " +
                                        std::to_string(values.size()) + " values");
        for (Index i = 0; i < values.size(); ++i)
            if (is_labeled(i) && !std::isfinite(values[i]))
                throw std::invalid_argument(std::string(what) + ": non-finite labeled value at row " +
                                            std::to_string(i));
    }
};

// A question/answer corpus ready for model fitting: features, quality targets,
// the association matrix, and the original post ids. Invariants checked by
// validate(): consistent row counts, unique ids, and at least one answer per
// question.
struct Dataset {
    FeatureMatrix question_features;
    FeatureMatrix answer_features;
    QualityVector question_quality;
    QualityVector answer_quality;
    AssociationMatrix association;
    std::vector<long long> question_ids;
    std::vector<long long> answer_ids;

    Index n_questions() const { return question_features.rows(); }
    Index n_answers() const { return answer_features.rows(); }

    void validate() const {
        question_features.validate("Dataset.question_features");
        answer_features.validate("Dataset.answer_features");
        question_quality.validate("Dataset.question_quality");
        answer_quality.validate("Dataset.answer_quality");
        if (question_quality.size() != n_questions() ||
            static_cast<Index>(question_ids.size()) != n_questions())
            throw std::invalid_argument("Dataset: question row counts disagree");
        if (answer_quality.size() != n_answers() ||
            static_cast<Index>(answer_ids.size()) != n_answers())
            throw std::invalid_argument("Dataset: answer row counts disagree");
        if (association.n_questions() != n_questions() || association.n_answers() != n_answers())
            throw std::invalid_argument("Dataset: association matrix is " +
                                        std::to_string(association.n_questions()) + "x" +
                                        std::to_string(association.n_answers()) + ", expected " +
                                        std::to_string(n_questions()) + "x" +
                                        std::to_string(n_answers()));
        for (Index q = 0; q < n_questions(); ++q)
            if (association.degree(q) == 0)
                throw std::invalid_argument("Dataset: question id " +
                                            std::to_string(question_ids[static_cast<std::size_t>(q)]) +
                                            " has no answers");
        check_unique(question_ids, "question");
        check_unique(answer_ids, "answer");
    }

private:
    static void check_unique(const std::vector<long long>& ids, const char* kind) {
        std::unordered_set<long long> seen;
        for (auto id : ids)
            if (!seen.insert(id).second)
                throw std::invalid_argument(std::string("Dataset: duplicate ") + kind + " id " +
                                            std::to_string(id));
    }
};

// Restriction of a dataset to the given question rows (indices into the
// current ordering, strictly increasing). Answers follow their questions; row
// order is preserved.
inline Dataset take_questions(const Dataset& d, const std::vector<Index>& questions) {
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (questions[i] < 0 || questions[i] >= d.n_questions())
            throw std::invalid_argument("take_questions: index " + std::to_string(questions[i]) +
                                        " outside [0, " + std::to_string(d.n_questions()) + ")");
        if (i > 0 && questions[i] <= questions[i - 1])
            throw std::invalid_argument("take_questions: indices must be strictly increasing");
    }
    std::vector<Index> new_q(static_cast<std::size_t>(d.n_questions()), -1);
    for (std::size_t i = 0; i < questions.size(); ++i)
        new_q[static_cast<std::size_t>(questions[i])] = static_cast<Index>(i);

    std::vector<Index> kept_answers;
    std::vector<Index> question_of;
    for (Index a = 0; a < d.n_answers(); ++a) {
        Index q = new_q[static_cast<std::size_t>(d.association.question_of(a))];
        if (q >= 0) {
            kept_answers.push_back(a);
            question_of.push_back(q);
        }
    }

    Dataset out;
    out.question_features.schema = d.question_features.schema;
    out.answer_features.schema = d.answer_features.schema;
    out.question_features.values.resize(static_cast<Index>(questions.size()),
                                        d.question_features.cols());
    out.question_quality.values.resize(static_cast<Index>(questions.size()));
    for (std::size_t i = 0; i < questions.size(); ++i) {
        Index q = questions[i];
        out.question_features.values.row(static_cast<Index>(i)) = d.question_features.values.row(q);
        out.question_quality.values[static_cast<Index>(i)] = d.question_quality.values[q];
        out.question_quality.labeled.push_back(d.question_quality.labeled[static_cast<std::size_t>(q)]);
        out.question_ids.push_back(d.question_ids[static_cast<std::size_t>(q)]);
    }
    out.answer_features.values.resize(static_cast<Index>(kept_answers.size()),
                                      d.answer_features.cols());
    out.answer_quality.values.resize(static_cast<Index>(kept_answers.size()));
    for (std::size_t i = 0; i < kept_answers.size(); ++i) {
        Index a = kept_answers[i];
        out.answer_features.values.row(static_cast<Index>(i)) = d.answer_features.values.row(a);
        out.answer_quality.values[static_cast<Index>(i)] = d.answer_quality.values[a];
        out.answer_quality.labeled.push_back(d.answer_quality.labeled[static_cast<std::size_t>(a)]);
        out.answer_ids.push_back(d.answer_ids[static_cast<std::size_t>(a)]);
    }
    out.association = AssociationMatrix::from_question_of(static_cast<Index>(questions.size()),
                                                          question_of);
    return out;
}

struct SplitResult {
    Dataset train;
    Dataset test;
};

// Seeded question-level split. train_percent (0, 100) of the questions are
// drawn uniformly without replacement for the training side; answers travel
// with their question, so the two sides partition the corpus. At least one
// question lands on each side.
inline SplitResult split_dataset(const Dataset& d, double train_percent, std::uint64_t seed) {
    if (!(train_percent > 0.0) || !(train_percent < 100.0))
        throw std::invalid_argument("split_dataset: train percentage must lie in (0, 100), got " +
                                    std::to_string(train_percent));
    Index n = d.n_questions();
    if (n < 2)
        throw std::invalid_argument("split_dataset: need at least 2 questions to split");
    Index k = static_cast<Index>(std::llround(static_cast<double>(n) * train_percent / 100.0));
    k = std::max<Index>(1, std::min<Index>(n - 1, k));

    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<Index> train_idx(order.begin(), order.begin() + k);
    std::vector<Index> test_idx(order.begin() + k, order.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    SplitResult out;
    out.train = take_questions(d, train_idx);
    out.test = take_questions(d, test_idx);
    return out;
}

// Keeps a seeded uniform fraction of the existing labels on each side and
// marks the rest unlabeled (value zeroed). Fractions lie in [0, 1]; the count
// kept is round(fraction * labeled). Question and answer draws come from
// separate derived streams, so keep_questions = 1 leaves question labels
// untouched regardless of the answer fraction.
inline Dataset mask_labels(const Dataset& d, double keep_questions, double keep_answers,
                           std::uint64_t seed) {
    auto check = [](double f, const char* side) {
        if (!(f >= 0.0) || !(f <= 1.0))
            throw std::invalid_argument(std::string("mask_labels: ") + side +
                                        " fraction must lie in [0, 1]");
    };
    check(keep_questions, "question");
    check(keep_answers, "answer");

    auto apply = [](QualityVector& qv, double keep, Rng& rng) {
        if (keep == 1.0) return;
        std::vector<Index> idx = qv.labeled_indices();
        Index target = static_cast<Index>(
            std::llround(static_cast<double>(idx.size()) * keep));
        rng.shuffle(idx);
        for (std::size_t i = static_cast<std::size_t>(target); i < idx.size(); ++i) {
            qv.labeled[static_cast<std::size_t>(idx[i])] = 0;
            qv.values[idx[i]] = 0.0;
        }
    };

    Dataset out = d;
    Rng rq(Rng::mix(seed, 0x71));
    Rng ra(Rng::mix(seed, 0xA2));
    apply(out.question_quality, keep_questions, rq);
    apply(out.answer_quality, keep_answers, ra);
    return out;
}

} // namespace cops
