#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cops/dataset.hpp"
#include "cops/rng.hpp"
#include "cops/types.hpp"

namespace cops {

// Synthetic corpus with a controllable question-answer quality link. Each
// question carries a latent quality q ~ N(0,1); each of its answers carries
// a = rho q + (1 - rho) e with fresh e ~ N(0,1), so rho = 0 decouples the
// sides and rho = 1 copies question quality onto every answer. Features are
// noisy linear views of the latent; integer scores are a monotone rounding of
// it. Everything is drawn from one seeded stream in a fixed order, so a spec
// is a complete recipe for the dataset.
struct SynthSpec {
    Index n_questions = 1000;
    int answers_min = 1;
    int answers_max = 5;
    double rho = 0.5;
    double noise = 1.0;
    int d_q = 7;
    int d_a = 4;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_questions < 1)
            throw std::invalid_argument("SynthSpec: need at least one question");
        if (answers_min < 1 || answers_max < answers_min)
            throw std::invalid_argument("SynthSpec: answer count range must satisfy 1 <= min <= max");
        if (!(rho >= 0.0) || !(rho <= 1.0))
            throw std::invalid_argument("SynthSpec: rho must lie in [0, 1]");
        if (!(noise >= 0.0) || !std::isfinite(noise))
            throw std::invalid_argument("SynthSpec: noise must be finite and nonnegative");
        if (d_q < 1 || d_a < 1)
            throw std::invalid_argument("SynthSpec: need at least one feature per side");
    }
};

namespace detail {

// Latent-to-score map; slope 8 keeps both classification classes populated
// under the s <= 0 / s >= 5 label thresholds.
inline long long score_of_latent(double latent) {
    return std::llround(8.0 * latent);
}

} // namespace detail

inline Dataset generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    // Per-column view weights, magnitude in [0.5, 1.5), alternating sign.
    auto draw_weights = [&](int d) {
        std::vector<double> w(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k)
            w[static_cast<std::size_t>(k)] = (0.5 + rng.next_unit()) * (k % 2 == 0 ? 1.0 : -1.0);
        return w;
    };
    std::vector<double> wq = draw_weights(spec.d_q);
    std::vector<double> wa = draw_weights(spec.d_a);

    std::vector<double> q_latent, a_latent;
    std::vector<Index> question_of;
    const std::uint64_t spread =
        static_cast<std::uint64_t>(spec.answers_max - spec.answers_min) + 1;
    for (Index i = 0; i < spec.n_questions; ++i) {
        q_latent.push_back(rng.next_normal());
        Index n_ans = spec.answers_min + static_cast<Index>(rng.next_below(spread));
        for (Index k = 0; k < n_ans; ++k) {
            a_latent.push_back(spec.rho * q_latent.back() + (1.0 - spec.rho) * rng.next_normal());
            question_of.push_back(i);
        }
    }
    const Index n_a = static_cast<Index>(a_latent.size());

    Dataset d;
    d.question_features.values.resize(spec.n_questions, spec.d_q);
    for (Index i = 0; i < spec.n_questions; ++i)
        for (int k = 0; k < spec.d_q; ++k)
            d.question_features.values(i, k) =
                wq[static_cast<std::size_t>(k)] * q_latent[static_cast<std::size_t>(i)] +
                spec.noise * rng.next_normal();
    d.answer_features.values.resize(n_a, spec.d_a);
    for (Index j = 0; j < n_a; ++j)
        for (int k = 0; k < spec.d_a; ++k)
            d.answer_features.values(j, k) =
                wa[static_cast<std::size_t>(k)] * a_latent[static_cast<std::size_t>(j)] +
                spec.noise * rng.next_normal();

    for (int k = 0; k < spec.d_q; ++k)
        d.question_features.schema.push_back("qf" + std::to_string(k + 1));
    for (int k = 0; k < spec.d_a; ++k)
        d.answer_features.schema.push_back("af" + std::to_string(k + 1));

    Vector yq(spec.n_questions), ya(n_a);
    for (Index i = 0; i < spec.n_questions; ++i)
        yq[i] = static_cast<double>(detail::score_of_latent(q_latent[static_cast<std::size_t>(i)]));
    for (Index j = 0; j < n_a; ++j)
        ya[j] = static_cast<double>(detail::score_of_latent(a_latent[static_cast<std::size_t>(j)]));
    d.question_quality = QualityVector::all_labeled(std::move(yq));
    d.answer_quality = QualityVector::all_labeled(std::move(ya));

    d.association = AssociationMatrix::from_question_of(spec.n_questions, question_of);
    for (Index i = 0; i < spec.n_questions; ++i) d.question_ids.push_back(i + 1);
    for (Index j = 0; j < n_a; ++j) d.answer_ids.push_back(j + 1);
    d.validate();
    return d;
}

} // namespace cops
