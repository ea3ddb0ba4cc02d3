// Command-line front end: dataset ingestion, synthesis, correlation analysis,
// model training, prediction, and sweep experiments. Every output file starts
// with a comment echoing the effective configuration, so any artifact can be
// regenerated from its own header.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cops/csv.hpp"
#include "cops/experiment.hpp"
#include "cops/methods.hpp"
#include "cops/metrics.hpp"
#include "cops/model_io.hpp"
#include "cops/pipeline.hpp"
#include "cops/synth.hpp"
#include "cops/text.hpp"

namespace {

using namespace cops;

std::string opt(const std::string& flag, const std::string& value) {
    return " --" + flag + " " + value;
}
std::string opt(const std::string& flag, double value) { return opt(flag, format_double(value)); }
std::string opt(const std::string& flag, long long value) { return opt(flag, std::to_string(value)); }
std::string opt(const std::string& flag, std::uint64_t value) {
    return opt(flag, std::to_string(value));
}
std::string opt(const std::string& flag, int value) { return opt(flag, std::to_string(value)); }

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

struct IngestArgs {
    std::string posts, votes, comments, users, out_dir;
    int window_hours = 24;
    bool rebalance_flag = false;
    std::uint64_t seed = 0;
};

void run_ingest(const IngestArgs& a) {
    std::string echo = "cops ingest" + opt("posts", a.posts) + opt("votes", a.votes) +
                       opt("comments", a.comments) + opt("users", a.users) +
                       opt("out", a.out_dir) + opt("window-hours", a.window_hours) +
                       (a.rebalance_flag ? " --rebalance" : "") + opt("seed", a.seed);

    RawData raw = parse_dump(a.posts, a.votes, a.comments, a.users);
    PreprocessedCorpus corpus = preprocess(raw, a.window_hours);
    IngestCounters counters = corpus.counters;
    Dataset d = extract_features(corpus, {}, &counters);

    RebalanceCounters rebalance_counters;
    if (a.rebalance_flag) d = rebalance(d, a.seed, &rebalance_counters);

    std::filesystem::create_directories(a.out_dir);
    write_csv(d, a.out_dir, echo);

    std::string log_path = a.out_dir + "/ingest_log.txt";
    std::ofstream log = open_output(log_path);
    log << "# " << echo << "\n";
    log << "format: cops-ingest-log/1\n";
    for (auto [name, count] : counters.lines()) log << name << ": " << count << "\n";
    if (a.rebalance_flag)
        for (auto [name, count] : rebalance_counters.lines()) log << name << ": " << count << "\n";
    log << "dataset_questions: " << d.n_questions() << "\n";
    log << "dataset_answers: " << d.n_answers() << "\n";
    finish_output(log, log_path);

    std::cout << "wrote " << d.n_questions() << " questions and " << d.n_answers()
              << " answers to " << a.out_dir << "\n";
    std::cout << "ingest log: " << log_path << "\n";
}

struct SynthArgs {
    SynthSpec spec;
    std::string out_dir;
};

void run_synth(const SynthArgs& a) {
    std::string echo = "cops synth" + opt("questions", static_cast<long long>(a.spec.n_questions)) +
                       opt("rho", a.spec.rho) + opt("answers-min", a.spec.answers_min) +
                       opt("answers-max", a.spec.answers_max) + opt("noise", a.spec.noise) +
                       opt("seed", a.spec.seed) + opt("out", a.out_dir);

    Dataset d = generate_synthetic(a.spec);
    std::filesystem::create_directories(a.out_dir);
    write_csv(d, a.out_dir, echo);
    std::cout << "wrote " << d.n_questions() << " questions and " << d.n_answers()
              << " answers to " << a.out_dir << "\n";
}

struct AnalyzeArgs {
    std::string data_dir, out_path;
};

// Correlation and score-distribution summary of one dataset: Pearson r between
// a question's score and the mean score of its answers, per-bin histograms of
// both sides, and the row-normalized question-bin x answer-bin table.
void run_analyze(const AnalyzeArgs& a) {
    std::string echo = "cops analyze" + opt("data", a.data_dir) + opt("out", a.out_path);
    Dataset d = read_csv(a.data_dir);

    std::vector<double> pair_q, pair_mean;
    for (Index i = 0; i < d.n_questions(); ++i) {
        if (!d.question_quality.is_labeled(i)) continue;
        double sum = 0.0;
        Index count = 0;
        for (Index j : d.association.answers_of(i)) {
            if (!d.answer_quality.is_labeled(j)) continue;
            sum += d.answer_quality.values[j];
            ++count;
        }
        if (count == 0) continue;
        pair_q.push_back(d.question_quality.values[i]);
        pair_mean.push_back(sum / static_cast<double>(count));
    }
    Vector vx = Eigen::Map<const Vector>(pair_q.data(), static_cast<Index>(pair_q.size()));
    Vector vy = Eigen::Map<const Vector>(pair_mean.data(), static_cast<Index>(pair_mean.size()));
    PearsonResult corr = pearson(vx, vy);

    std::vector<long long> q_scores(static_cast<std::size_t>(d.n_questions()), 0);
    std::vector<long long> hist_q(kScoreBins, 0), hist_a(kScoreBins, 0);
    for (Index i = 0; i < d.n_questions(); ++i) {
        if (!d.question_quality.is_labeled(i)) continue;
        long long s = std::llround(d.question_quality.values[i]);
        q_scores[static_cast<std::size_t>(i)] = s;
        ++hist_q[static_cast<std::size_t>(bin_score(s) - 1)];
    }
    std::vector<long long> a_scores;
    std::vector<Index> a_question;
    for (Index j = 0; j < d.n_answers(); ++j) {
        if (!d.answer_quality.is_labeled(j)) continue;
        long long s = std::llround(d.answer_quality.values[j]);
        ++hist_a[static_cast<std::size_t>(bin_score(s) - 1)];
        Index q = d.association.question_of(j);
        if (!d.question_quality.is_labeled(q)) continue;
        a_scores.push_back(s);
        a_question.push_back(q);
    }
    BinDistribution bins = bin_distribution(q_scores, a_scores, a_question);

    std::ofstream out = open_output(a.out_path);
    out << "# " << echo << "\n";
    out << "format: cops-analysis/1\n";
    out << "questions: " << d.n_questions() << "\n";
    out << "answers: " << d.n_answers() << "\n";
    out << "pearson_pairs: " << corr.n << "\n";
    out << "pearson_r: " << format_double(corr.r) << "\n";
    out << "pearson_t: " << format_double(corr.t) << "\n";
    auto write_counts = [&out](const char* key, const std::vector<long long>& counts) {
        out << key << ":";
        for (long long c : counts) out << " " << c;
        out << "\n";
    };
    out << "bin_labels:";
    for (int b = 1; b <= kScoreBins; ++b) out << " " << bin_label(b);
    out << "\n";
    write_counts("question_histogram", hist_q);
    write_counts("answer_histogram", hist_a);
    write_counts("bin_row_answers",
                 std::vector<long long>(bins.row_counts.begin(), bins.row_counts.end()));
    for (int r = 0; r < kScoreBins; ++r) {
        out << "bin_row_" << r + 1 << ":";
        for (int c = 0; c < kScoreBins; ++c) out << " " << format_double(bins.table(r, c));
        out << "\n";
    }
    out << "#\n# answer-score distribution per question-score bin (rows sum to 1)\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "# %8s", "q \\ a");
    out << buf;
    for (int c = 1; c <= kScoreBins; ++c) {
        std::snprintf(buf, sizeof buf, " %7s", bin_label(c));
        out << buf;
    }
    out << "\n";
    for (int r = 1; r <= kScoreBins; ++r) {
        std::snprintf(buf, sizeof buf, "# %8s", bin_label(r));
        out << buf;
        for (int c = 1; c <= kScoreBins; ++c) {
            std::snprintf(buf, sizeof buf, " %7.4f", bins.table(r - 1, c - 1));
            out << buf;
        }
        out << "\n";
    }
    finish_output(out, a.out_path);

    std::cout << "pearson r: " << format_double(corr.r) << " (t = " << format_double(corr.t)
              << ", n = " << corr.n << ")\n";
    std::cout << "analysis: " << a.out_path << "\n";
}

struct TrainArgs {
    std::string data_dir, method_name, task_name, model_out;
    double train_frac = 0.0;
    std::uint64_t seed = 0;
    Hyper hyper;
};

void run_train(const TrainArgs& a) {
    Method method = parse_method(a.method_name);
    Task task = parse_task(a.task_name);
    std::string echo = "cops train" + opt("data", a.data_dir) + opt("method", a.method_name) +
                       opt("task", a.task_name) + opt("train-frac", a.train_frac) +
                       opt("seed", a.seed) + opt("eta", a.hyper.eta) +
                       opt("lambda", a.hyper.lambda) + opt("gamma", a.hyper.gamma) +
                       opt("max-iter", static_cast<long long>(a.hyper.max_iter)) +
                       opt("tol", a.hyper.tol) + opt("model-out", a.model_out);

    Dataset d = read_csv(a.data_dir);
    SplitResult split = split_dataset(d, a.train_frac, a.seed);
    CoefficientPair model = fit_method(split.train, method, task, a.hyper, true, a.seed);
    write_model(model, a.model_out, echo);
    Evaluation ev = evaluate_method(model, split.test);

    const char* metric = task == Task::regression ? "rmse" : "error";
    std::cout << "train: " << split.train.n_questions() << " questions, "
              << split.train.n_answers() << " answers\n";
    std::cout << "test: " << split.test.n_questions() << " questions, "
              << split.test.n_answers() << " answers\n";
    std::cout << "question " << metric << ": " << format_double(ev.question_metric) << "\n";
    std::cout << "answer " << metric << ": " << format_double(ev.answer_metric) << "\n";
    std::cout << "model: " << a.model_out << "\n";
}

struct PredictArgs {
    std::string model_path, data_dir, out_path;
};

void run_predict(const PredictArgs& a) {
    std::string echo = "cops predict" + opt("model", a.model_path) + opt("data", a.data_dir) +
                       opt("out", a.out_path);
    CoefficientPair model = read_model(a.model_path);
    Dataset d = read_csv(a.data_dir);
    Predictions pred = predict_method(model, d);

    // Regression predictions live on the model's normalized scale; the score
    // column maps them back to the training score range. Classification rows
    // carry the margin and its sign label.
    std::ofstream out = open_output(a.out_path);
    out << "# " << echo << "\n";
    out << "# model method: " << method_name(model.method) << ", task: "
        << (model.task == Task::regression ? "regression" : "classification") << "\n";
    bool regression = model.task == Task::regression;
    out << (regression ? "kind,id,prediction,score\n" : "kind,id,prediction,label\n");
    auto emit = [&](const char* kind, const std::vector<long long>& ids, const Vector& scores,
                    const ScoreRange& range) {
        Vector labels = regression ? Vector() : sign_labels(scores);
        for (Index i = 0; i < scores.size(); ++i) {
            out << kind << "," << ids[static_cast<std::size_t>(i)] << ","
                << format_double(scores[i]) << ",";
            if (regression)
                out << format_double(range.min + scores[i] * (range.max - range.min));
            else
                out << (labels[i] > 0 ? "1" : "-1");
            out << "\n";
        }
    };
    emit("question", d.question_ids, pred.score_q, model.range_q);
    emit("answer", d.answer_ids, pred.score_a, model.range_a);
    finish_output(out, a.out_path);

    std::cout << "wrote " << d.n_questions() + d.n_answers() << " predictions to " << a.out_path
              << "\n";
}

struct ExperimentArgs {
    std::string plan_path, out_path;
};

void run_experiment_cmd(const ExperimentArgs& a) {
    std::string echo = "cops experiment" + opt("plan", a.plan_path) + opt("out", a.out_path);
    ExperimentPlan plan = load_plan(a.plan_path);
    Dataset d = plan_dataset(plan);
    ExperimentReport report = run_experiment(plan, d);
    write_report(report, a.out_path, echo);

    long long failed = 0;
    for (const ExperimentCell& c : report.cells)
        if (!c.ok) ++failed;
    std::cout << "ran " << report.cells.size() << " cells (" << failed << " failed), "
              << report.aggregates.size() << " aggregates\n";
    std::cout << "report: " << a.out_path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint quality prediction for community Q&A questions and answers"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    CLI::App* ingest_cmd =
        app.add_subcommand("ingest", "Convert a site dump (XML) into a CSV dataset");
    ingest_cmd->add_option("--posts", ingest_args.posts, "posts XML file")->required();
    ingest_cmd->add_option("--votes", ingest_args.votes, "votes XML file")->required();
    ingest_cmd->add_option("--comments", ingest_args.comments, "comments XML file")->required();
    ingest_cmd->add_option("--users", ingest_args.users, "users XML file")->required();
    ingest_cmd->add_option("--out", ingest_args.out_dir, "output dataset directory")->required();
    ingest_cmd->add_option("--window-hours", ingest_args.window_hours,
                           "answer window length in hours");
    ingest_cmd->add_flag("--rebalance", ingest_args.rebalance_flag,
                         "thin the dominant score bins after extraction");
    ingest_cmd->add_option("--seed", ingest_args.seed, "seed for rebalance sampling");
    ingest_cmd->callback([&] { run_ingest(ingest_args); });

    SynthArgs synth_args;
    long long synth_questions = 0;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic dataset with known correlation");
    synth_cmd->add_option("--questions", synth_questions, "number of questions")->required();
    synth_cmd->add_option("--rho", synth_args.spec.rho, "question/answer quality correlation")
        ->required();
    synth_cmd->add_option("--answers-min", synth_args.spec.answers_min, "answers per question, lower bound");
    synth_cmd->add_option("--answers-max", synth_args.spec.answers_max, "answers per question, upper bound");
    synth_cmd->add_option("--noise", synth_args.spec.noise, "feature noise scale");
    synth_cmd->add_option("--seed", synth_args.spec.seed, "generator seed")->required();
    synth_cmd->add_option("--out", synth_args.out_dir, "output dataset directory")->required();
    synth_cmd->callback([&] {
        synth_args.spec.n_questions = static_cast<Index>(synth_questions);
        run_synth(synth_args);
    });

    AnalyzeArgs analyze_args;
    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "Summarize score correlation and distributions");
    analyze_cmd->add_option("--data", analyze_args.data_dir, "dataset directory")->required();
    analyze_cmd->add_option("--out", analyze_args.out_path, "analysis output file")->required();
    analyze_cmd->callback([&] { run_analyze(analyze_args); });

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "Fit a model on a seeded train split");
    train_cmd->add_option("--data", train_args.data_dir, "dataset directory")->required();
    train_cmd
        ->add_option("--method", train_args.method_name,
                     "separate, cops-iter, cops-qq, cops-qg, cops-gg, or cops-gq")
        ->required();
    train_cmd->add_option("--task", train_args.task_name, "regression or classification")
        ->required();
    train_cmd
        ->add_option("--train-frac", train_args.train_frac,
                     "percent of questions used for training, in (0, 100)")
        ->required();
    train_cmd->add_option("--seed", train_args.seed, "split seed")->required();
    train_cmd->add_option("--eta", train_args.hyper.eta, "coupling strength");
    train_cmd->add_option("--lambda", train_args.hyper.lambda, "ridge penalty");
    train_cmd->add_option("--gamma", train_args.hyper.gamma, "gradient step size");
    train_cmd->add_option("--max-iter", train_args.hyper.max_iter, "iteration cap");
    train_cmd->add_option("--tol", train_args.hyper.tol, "convergence tolerance");
    train_cmd->add_option("--model-out", train_args.model_out, "model output file")->required();
    train_cmd->callback([&] { run_train(train_args); });

    PredictArgs predict_args;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Score every post in a dataset with a saved model");
    predict_cmd->add_option("--model", predict_args.model_path, "model file")->required();
    predict_cmd->add_option("--data", predict_args.data_dir, "dataset directory")->required();
    predict_cmd->add_option("--out", predict_args.out_path, "predictions output file")->required();
    predict_cmd->callback([&] { run_predict(predict_args); });

    ExperimentArgs experiment_args;
    CLI::App* experiment_cmd =
        app.add_subcommand("experiment", "Run a sweep plan and write the report");
    experiment_cmd->add_option("--plan", experiment_args.plan_path, "plan file")->required();
    experiment_cmd->add_option("--out", experiment_args.out_path, "report output file")
        ->required();
    experiment_cmd->callback([&] { run_experiment_cmd(experiment_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
