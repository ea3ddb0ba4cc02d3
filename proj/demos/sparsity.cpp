// Answer-side error as answer labels are removed from a small training set.
// The per-side baseline can only learn from labeled answers; the coupled
// fit also borrows the question labels through the association, so it keeps
// working when answer labels run out entirely.

#include <cops/methods.hpp>
#include <cops/synth.hpp>

#include <cmath>
#include <cstdio>
#include <limits>

namespace {

double trial_error(const cops::Dataset& train, const cops::Dataset& test, cops::Method method,
                   std::uint64_t seed) {
    try {
        cops::CoefficientPair model = cops::fit_method(train, method, cops::Task::classification,
                                                       cops::Hyper{}, true, seed);
        return cops::evaluate_method(model, test).answer_metric;
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN(); // no labeled answers to fit on
    }
}

} // namespace

int main() {
    cops::SynthSpec spec;
    spec.n_questions = 2000;
    spec.rho = 0.6;
    spec.noise = 1.5;
    spec.d_a = 2;
    spec.answers_min = 1;
    spec.answers_max = 9;

    const double keeps[] = {1.0, 0.25, 0.05, 0.0};
    const int trials = 10;

    std::printf("answer misclassification on held-out data, 1%% of questions labeled,\n");
    std::printf("mean of %d trials per row:\n\n", trials);
    std::printf("%-20s %-12s %s\n", "answer labels kept", "separate", "coupled");
    for (double keep : keeps) {
        double sum_sep = 0.0, sum_cop = 0.0;
        int ok_sep = 0;
        for (int t = 0; t < trials; ++t) {
            spec.seed = 500 + static_cast<std::uint64_t>(t);
            cops::Dataset corpus = cops::generate_synthetic(spec);
            cops::SplitResult split = cops::split_dataset(corpus, 1.0, 40 + t);
            cops::Dataset train = keep < 1.0
                                      ? cops::mask_labels(split.train, 1.0, keep, 41 + t)
                                      : split.train;
            double sep = trial_error(train, split.test, cops::Method::separate, 40 + t);
            if (std::isfinite(sep)) {
                sum_sep += sep;
                ++ok_sep;
            }
            sum_cop += trial_error(train, split.test, cops::Method::cops_qq, 40 + t);
        }
        char sep_text[32];
        if (ok_sep > 0)
            std::snprintf(sep_text, sizeof(sep_text), "%.3f", sum_sep / ok_sep);
        else
            std::snprintf(sep_text, sizeof(sep_text), "unfittable");
        std::printf("%17.0f%%   %-12s %.3f\n", keep * 100.0, sep_text, sum_cop / trials);
    }
    return 0;
}
