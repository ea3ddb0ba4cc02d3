#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cops/csv.hpp"
#include "cops/dataset.hpp"
#include "cops/keyed_text.hpp"
#include "cops/methods.hpp"
#include "cops/model.hpp"
#include "cops/synth.hpp"
#include "cops/text.hpp"

namespace cops {

// Sweep axes: training-set size (percent of questions), fraction of answer
// or question labels kept after the split, or one of the two coupling
// hyperparameters.
enum class SweepAxis { train_frac, answer_keep, question_keep, eta, lambda };

inline constexpr const char* kAxisNames[] = {"train-frac", "answer-keep", "question-keep", "eta",
                                             "lambda"};

inline const char* axis_name(SweepAxis a) { return kAxisNames[static_cast<int>(a)]; }

inline SweepAxis parse_axis(std::string_view name) {
    for (int i = 0; i < 5; ++i)
        if (name == kAxisNames[i]) return static_cast<SweepAxis>(i);
    std::string valid;
    for (const char* n : kAxisNames) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                                "' (expected one of " + valid + ")");
}

// A declarative sweep: one corpus, one task, a method list, and one axis
// swept over the given values with seeded repeats. Fits inside a cell share
// the repeat's split (and mask, when the axis deletes labels), so methods
// are compared on identical data.
struct ExperimentPlan {
    Task task = Task::classification;
    std::vector<Method> methods;
    SweepAxis axis = SweepAxis::train_frac;
    std::vector<double> values;
    int repeats = 10;
    std::uint64_t seed = 0;
    double train_frac = 10.0; // percent of questions, used when the axis is not train-frac
    Hyper hyper;
    bool standardize = true;
    std::string data_dir; // empty: generate from synth below
    SynthSpec synth;

    void validate() const {
        if (methods.empty()) throw std::invalid_argument("ExperimentPlan: no methods listed");
        for (Method m : methods) require_supported(m, task);
        if (values.empty()) throw std::invalid_argument("ExperimentPlan: no axis values listed");
        if (repeats < 1) throw std::invalid_argument("ExperimentPlan: repeats must be >= 1");
        if (!(train_frac > 0.0) || !(train_frac < 100.0))
            throw std::invalid_argument("ExperimentPlan: train_frac must lie in (0, 100)");
        for (double v : values) {
            if (!std::isfinite(v))
                throw std::invalid_argument("ExperimentPlan: non-finite axis value");
            bool ok = true;
            switch (axis) {
            case SweepAxis::train_frac: ok = v > 0.0 && v < 100.0; break;
            case SweepAxis::answer_keep:
            case SweepAxis::question_keep: ok = v >= 0.0 && v <= 1.0; break;
            case SweepAxis::eta:
            case SweepAxis::lambda: ok = v >= 0.0; break;
            }
            if (!ok)
                throw std::invalid_argument(std::string("ExperimentPlan: value ") +
                                            format_double(v) + " is outside the " +
                                            axis_name(axis) + " axis range");
        }
        if (data_dir.empty()) synth.validate();
    }
};

// One fit: a (value, repeat, method) cell. Failed fits carry their error
// text and NaN metrics instead of aborting the sweep.
struct ExperimentCell {
    Method method = Method::separate;
    double value = 0.0;
    int repeat = 0;
    std::uint64_t seed = 0; // the cell's split seed
    bool ok = false;
    std::string error;
    double question_metric = std::numeric_limits<double>::quiet_NaN();
    double answer_metric = std::numeric_limits<double>::quiet_NaN();
    double seconds = std::numeric_limits<double>::quiet_NaN();
};

// Means over the successful repeats of one (value, method) pair. Utility
// ratios (1 - error) / seconds are classification-only and NaN otherwise.
struct ExperimentAggregate {
    Method method = Method::separate;
    double value = 0.0;
    int n_ok = 0;
    double question_mean = std::numeric_limits<double>::quiet_NaN();
    double answer_mean = std::numeric_limits<double>::quiet_NaN();
    double seconds_mean = std::numeric_limits<double>::quiet_NaN();
    double question_utility = std::numeric_limits<double>::quiet_NaN();
    double answer_utility = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentReport {
    ExperimentPlan plan;
    std::vector<ExperimentCell> cells;           // value-major, then repeat, then method
    std::vector<ExperimentAggregate> aggregates; // value-major, then method
};

// The corpus a plan runs on: an on-disk CSV dataset when data_dir is set,
// otherwise the plan's synthetic spec.
inline Dataset plan_dataset(const ExperimentPlan& plan) {
    if (!plan.data_dir.empty()) return read_csv(plan.data_dir);
    return generate_synthetic(plan.synth);
}

// Runs the sweep. Cell (value v, repeat r) uses split seed mix(seed, 1000+r)
// and mask seed mix(seed, 2000+r), both independent of v and of the method,
// so every method and every axis value sees the same data partitions.
// Timing covers fitting only; metrics and seeds are deterministic, wall
// clock is not.
inline ExperimentReport run_experiment(const ExperimentPlan& plan, const Dataset& corpus) {
    plan.validate();
    corpus.validate();

    ExperimentReport report;
    report.plan = plan;
    using clock = std::chrono::steady_clock;

    for (double value : plan.values) {
        for (int repeat = 0; repeat < plan.repeats; ++repeat) {
            std::uint64_t split_seed = Rng::mix(plan.seed, 1000 + static_cast<std::uint64_t>(repeat));
            std::uint64_t mask_seed = Rng::mix(plan.seed, 2000 + static_cast<std::uint64_t>(repeat));

            Hyper hyper = plan.hyper;
            double frac = plan.train_frac;
            switch (plan.axis) {
            case SweepAxis::train_frac: frac = value; break;
            case SweepAxis::eta: hyper.eta = value; break;
            case SweepAxis::lambda: hyper.lambda = value; break;
            default: break;
            }

            SplitResult split;
            std::string setup_error;
            try {
                split = split_dataset(corpus, frac, split_seed);
                if (plan.axis == SweepAxis::answer_keep)
                    split.train = mask_labels(split.train, 1.0, value, mask_seed);
                else if (plan.axis == SweepAxis::question_keep)
                    split.train = mask_labels(split.train, value, 1.0, mask_seed);
            } catch (const std::exception& e) {
                setup_error = e.what();
            }

            for (Method method : plan.methods) {
                ExperimentCell cell;
                cell.method = method;
                cell.value = value;
                cell.repeat = repeat;
                cell.seed = split_seed;
                if (!setup_error.empty()) {
                    cell.error = setup_error;
                    report.cells.push_back(std::move(cell));
                    continue;
                }
                try {
                    auto t0 = clock::now();
                    CoefficientPair model = fit_method(split.train, method, plan.task, hyper,
                                                       plan.standardize, split_seed);
                    auto t1 = clock::now();
                    cell.seconds = std::chrono::duration<double>(t1 - t0).count();
                    Evaluation ev = evaluate_method(model, split.test);
                    cell.question_metric = ev.question_metric;
                    cell.answer_metric = ev.answer_metric;
                    cell.ok = true;
                } catch (const std::exception& e) {
                    cell.ok = false;
                    cell.error = e.what();
                    cell.question_metric = std::numeric_limits<double>::quiet_NaN();
                    cell.answer_metric = std::numeric_limits<double>::quiet_NaN();
                    cell.seconds = std::numeric_limits<double>::quiet_NaN();
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }

    for (double value : plan.values) {
        for (Method method : plan.methods) {
            ExperimentAggregate agg;
            agg.method = method;
            agg.value = value;
            double sq = 0.0, sa = 0.0, st = 0.0;
            for (const ExperimentCell& cell : report.cells) {
                if (cell.method != method || cell.value != value || !cell.ok) continue;
                ++agg.n_ok;
                sq += cell.question_metric;
                sa += cell.answer_metric;
                st += cell.seconds;
            }
            if (agg.n_ok > 0) {
                agg.question_mean = sq / agg.n_ok;
                agg.answer_mean = sa / agg.n_ok;
                agg.seconds_mean = st / agg.n_ok;
                if (plan.task == Task::classification && agg.seconds_mean > 0.0) {
                    agg.question_utility = (1.0 - agg.question_mean) / agg.seconds_mean;
                    agg.answer_utility = (1.0 - agg.answer_mean) / agg.seconds_mean;
                }
            }
            report.aggregates.push_back(agg);
        }
    }
    return report;
}

inline ExperimentReport run_experiment(const ExperimentPlan& plan) {
    return run_experiment(plan, plan_dataset(plan));
}

// Plan files share the keyed-text layout of model files. Required keys:
// task, methods, axis, values. Everything else falls back to the struct
// defaults above, and the synth_* keys fill the synthetic spec used when no
// data directory is given.
inline constexpr const char* kPlanFormat = "cops-plan/1";

inline ExperimentPlan load_plan(const std::string& path) {
    detail::KeyedText text = detail::read_keyed_text(path, kPlanFormat, "plan");
    text.require_known({"task",       "methods",    "axis",       "values",     "repeats",
                        "seed",       "train_frac", "eta",        "lambda",     "gamma",
                        "max_iter",   "tol",        "standardize", "data",
                        "synth_questions", "synth_answers_min", "synth_answers_max", "synth_rho",
                        "synth_noise", "synth_d_q", "synth_d_a",  "synth_seed"});

    ExperimentPlan plan;
    try {
        plan.task = parse_task(text.get("task"));
        for (const std::string& name : text.get_names("methods"))
            plan.methods.push_back(parse_method(name));
        plan.axis = parse_axis(text.get("axis"));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    Vector values = text.get_vector("values");
    plan.values.assign(values.data(), values.data() + values.size());
    plan.repeats = static_cast<int>(text.get_ll_or("repeats", plan.repeats));
    plan.seed = static_cast<std::uint64_t>(text.get_ll_or("seed", 0));
    plan.train_frac = text.get_double_or("train_frac", plan.train_frac);
    plan.hyper.eta = text.get_double_or("eta", plan.hyper.eta);
    plan.hyper.lambda = text.get_double_or("lambda", plan.hyper.lambda);
    plan.hyper.gamma = text.get_double_or("gamma", plan.hyper.gamma);
    plan.hyper.max_iter = static_cast<int>(text.get_ll_or("max_iter", plan.hyper.max_iter));
    plan.hyper.tol = text.get_double_or("tol", plan.hyper.tol);
    long long standardize = text.get_ll_or("standardize", 1);
    if (standardize != 0 && standardize != 1)
        text.fail("standardize", "standardize must be 0 or 1");
    plan.standardize = standardize == 1;
    if (text.has("data")) plan.data_dir = text.get("data");
    plan.synth.n_questions = static_cast<Index>(text.get_ll_or("synth_questions", plan.synth.n_questions));
    plan.synth.answers_min = static_cast<int>(text.get_ll_or("synth_answers_min", plan.synth.answers_min));
    plan.synth.answers_max = static_cast<int>(text.get_ll_or("synth_answers_max", plan.synth.answers_max));
    plan.synth.rho = text.get_double_or("synth_rho", plan.synth.rho);
    plan.synth.noise = text.get_double_or("synth_noise", plan.synth.noise);
    plan.synth.d_q = static_cast<int>(text.get_ll_or("synth_d_q", plan.synth.d_q));
    plan.synth.d_a = static_cast<int>(text.get_ll_or("synth_d_a", plan.synth.d_a));
    plan.synth.seed = static_cast<std::uint64_t>(text.get_ll_or("synth_seed", 0));

    try {
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return plan;
}

// Line-oriented report: the effective plan, one 'cell:' line per fit in run
// order, one 'aggregate:' line per (value, method), and a trailing
// human-readable summary as comments. Failed cells print NaN metrics and
// leave their error on an adjacent comment line.
inline void write_report(const ExperimentReport& report, const std::string& path,
                         const std::string& comment = "") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report file: " + path);
    if (!comment.empty())
        for (auto part : split(comment, '\n')) out << "# " << part << "\n";

    const ExperimentPlan& plan = report.plan;
    out << "format: cops-report/1\n";
    out << "task: " << task_name(plan.task) << "\n";
    out << "axis: " << axis_name(plan.axis) << "\n";
    std::string methods;
    for (Method m : plan.methods) {
        if (!methods.empty()) methods += " ";
        methods += method_name(m);
    }
    out << "methods: " << methods << "\n";
    std::string values;
    for (double v : plan.values) {
        if (!values.empty()) values += " ";
        values += format_double(v);
    }
    out << "values: " << values << "\n";
    out << "repeats: " << plan.repeats << "\n";
    out << "seed: " << plan.seed << "\n";
    out << "train_frac: " << format_double(plan.train_frac) << "\n";
    out << "eta: " << format_double(plan.hyper.eta) << "\n";
    out << "lambda: " << format_double(plan.hyper.lambda) << "\n";
    out << "gamma: " << format_double(plan.hyper.gamma) << "\n";
    out << "max_iter: " << plan.hyper.max_iter << "\n";
    out << "tol: " << format_double(plan.hyper.tol) << "\n";
    out << "standardize: " << (plan.standardize ? 1 : 0) << "\n";
    if (!plan.data_dir.empty()) out << "data: " << plan.data_dir << "\n";

    out << "columns: method value repeat seed status question_metric answer_metric seconds\n";
    for (const ExperimentCell& c : report.cells) {
        out << "cell: " << method_name(c.method) << " " << format_double(c.value) << " " << c.repeat
            << " " << c.seed << " " << (c.ok ? "ok" : "error") << " "
            << format_double(c.question_metric) << " " << format_double(c.answer_metric) << " "
            << format_double(c.seconds) << "\n";
        if (!c.ok)
            out << "# " << method_name(c.method) << " " << format_double(c.value) << " rep "
                << c.repeat << ": " << c.error << "\n";
    }

    out << "aggregate_columns: method value n_ok question_mean answer_mean seconds_mean "
           "question_utility answer_utility\n";
    for (const ExperimentAggregate& a : report.aggregates)
        out << "aggregate: " << method_name(a.method) << " " << format_double(a.value) << " "
            << a.n_ok << " " << format_double(a.question_mean) << " " << format_double(a.answer_mean)
            << " " << format_double(a.seconds_mean) << " " << format_double(a.question_utility)
            << " " << format_double(a.answer_utility) << "\n";

    // Summary table: one row per aggregate, fixed-width comment block.
    out << "#\n# " << axis_name(plan.axis)
        << " sweep, mean over successful repeats (question / answer "
        << (plan.task == Task::regression ? "RMSE" : "error") << ")\n";
    char line[160];
    std::snprintf(line, sizeof line, "# %-10s %12s %5s %12s %12s %12s\n", "method", "value", "ok",
                  "question", "answer", "seconds");
    out << line;
    for (const ExperimentAggregate& a : report.aggregates) {
        std::snprintf(line, sizeof line, "# %-10s %12.6g %5d %12.6g %12.6g %12.6g\n",
                      method_name(a.method), a.value, a.n_ok, a.question_mean, a.answer_mean,
                      a.seconds_mean);
        out << line;
    }
    if (!out) throw std::runtime_error("failed writing report file: " + path);
}

} // namespace cops
