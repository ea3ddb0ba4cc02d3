// End-to-end tour on one synthetic corpus: generate, split, fit three
// regression methods, compare held-out error, then show a few answer
// predictions in raw score units.

#include <cops/methods.hpp>
#include <cops/synth.hpp>

#include <cmath>
#include <cstdio>

int main() {
    cops::SynthSpec spec;
    spec.n_questions = 800;
    spec.rho = 0.6;
    spec.noise = 1.0;
    spec.seed = 7;
    cops::Dataset corpus = cops::generate_synthetic(spec);
    cops::SplitResult split = cops::split_dataset(corpus, 70.0, 7);

    std::printf("corpus: %lld questions / %lld answers, train on %lld / %lld\n\n",
                static_cast<long long>(corpus.n_questions()),
                static_cast<long long>(corpus.n_answers()),
                static_cast<long long>(split.train.n_questions()),
                static_cast<long long>(split.train.n_answers()));

    std::printf("%-10s %-14s %s\n", "method", "question rmse", "answer rmse");
    const cops::Method methods[] = {cops::Method::separate, cops::Method::cops_iter,
                                    cops::Method::cops_qq};
    for (cops::Method m : methods) {
        cops::CoefficientPair model =
            cops::fit_method(split.train, m, cops::Task::regression, cops::Hyper{}, true, 7);
        cops::Evaluation ev = cops::evaluate_method(model, split.test);
        std::printf("%-10s %-14.4f %.4f\n", cops::method_name(m), ev.question_metric,
                    ev.answer_metric);
    }

    cops::CoefficientPair model = cops::fit_method(split.train, cops::Method::cops_qq,
                                                   cops::Task::regression, cops::Hyper{}, true, 7);
    cops::Predictions pred = cops::predict_method(model, split.test);

    std::printf("\nfirst answers of the test set (scores in raw units):\n");
    std::printf("%-10s %-10s %s\n", "answer id", "predicted", "actual");
    int shown = 0;
    for (cops::Index j = 0; j < split.test.n_answers() && shown < 5; ++j) {
        if (!split.test.answer_quality.is_labeled(j)) continue;
        double raw = model.range_a.min + pred.score_a[j] * (model.range_a.max - model.range_a.min);
        std::printf("%-10lld %-10.2f %.0f\n", split.test.answer_ids[j], raw,
                    split.test.answer_quality.values[j]);
        ++shown;
    }
    return 0;
}
