#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "clickbait/corpus.hpp"
#include "clickbait/errors.hpp"
#include "clickbait/eval.hpp"
#include "clickbait/matrix.hpp"
#include "clickbait/models.hpp"
#include "clickbait/selection.hpp"
#include "clickbait/textstats.hpp"

namespace clickbait::cli {
namespace {

namespace fs = std::filesystem;

// Settings recorded in every artifact. Output paths and thread counts are
// left out: they never change the bytes written.
using RunRecord = std::vector<std::pair<std::string, std::string>>;

std::vector<std::string> record_lines(const std::string& command, const RunRecord& record) {
    std::vector<std::string> lines{"clickbait " + command};
    for (const auto& [k, v] : record) lines.push_back(k + " = " + v);
    return lines;
}

void write_comments(std::ostream& out, const std::vector<std::string>& lines) {
    for (const auto& l : lines) out << "# " << l << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    return f;
}

// Writes through `fn` to `path`, or to `fallback` when no path is given.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
    if (path.empty()) {
        fn(fallback);
        return;
    }
    auto f = open_output(path);
    fn(f);
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

struct CorpusArgs {
    std::string instances;
    std::string truth;
    std::string schema;

    void add(CLI::App* sub, bool truth_required) {
        sub->add_option("--instances", instances, "post/article records, one JSON object per line")->required();
        auto* t = sub->add_option("--truth", truth, "truth labels, one JSON object per line");
        if (truth_required) t->required();
        sub->add_option("--schema", schema, "field-name mapping (key = value lines)");
    }

    Schema load_schema() const { return schema.empty() ? Schema{} : clickbait::load_schema(schema); }

    void record(RunRecord& r) const {
        r.emplace_back("instances", instances);
        r.emplace_back("truth", truth.empty() ? "-" : truth);
        r.emplace_back("schema", schema.empty() ? "default" : schema);
    }
};

struct ModelArgs {
    std::string algorithm = "gradient_boosting";
    std::string features = "all";
    std::string ranking;
    int bins = kDefaultBins;
    std::uint64_t seed = 1;
    std::optional<int> depth;
    std::optional<int> trees;
    std::optional<double> learning_rate;
    std::optional<int> min_leaf;
    std::optional<double> feature_fraction;
    std::optional<bool> bootstrap;

    void add(CLI::App* sub) {
        sub->add_option("--algorithm", algorithm, "decision_tree | random_forest | adaboost | gradient_boosting")
            ->check(CLI::IsMember({"decision_tree", "random_forest", "adaboost", "gradient_boosting"}));
        sub->add_option("--features", features, "all | top:<k> | list:<file>");
        sub->add_option("--ranking", ranking, "ranking file for top:<k> (ranked from the matrix when omitted)");
        sub->add_option("--bins", bins, "discretization bins when ranking from the matrix")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--depth", depth, "maximum tree depth")->check(CLI::PositiveNumber);
        sub->add_option("--trees", trees, "number of trees or boosting rounds")->check(CLI::PositiveNumber);
        sub->add_option("--learning-rate", learning_rate, "boosting shrinkage");
        sub->add_option("--min-leaf", min_leaf, "minimum instances per leaf")->check(CLI::PositiveNumber);
        sub->add_option("--feature-fraction", feature_fraction, "share of features tried per forest split");
        sub->add_option("--bootstrap", bootstrap, "bootstrap forest samples (true/false)");
    }

    TrainConfig config(const FeatureMatrix& matrix) const {
        auto c = TrainConfig::defaults_for(parse_algorithm(algorithm));
        c.seed = seed;
        if (depth) c.tree_depth_max = *depth;
        if (trees) c.n_trees = *trees;
        if (learning_rate) c.learning_rate = *learning_rate;
        if (min_leaf) c.min_leaf = *min_leaf;
        if (feature_fraction) c.feature_fraction = *feature_fraction;
        if (bootstrap) c.bootstrap = *bootstrap;
        c.feature_subset = resolve_features(matrix);
        c.validate();
        return c;
    }

    std::optional<std::vector<std::string>> resolve_features(const FeatureMatrix& matrix) const {
        if (features == "all") return std::nullopt;
        if (features.starts_with("list:")) return read_feature_list(features.substr(5));
        if (features.starts_with("top:")) {
            std::size_t k = 0;
            const auto text = features.substr(4);
            const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
            if (ec != std::errc{} || p != text.data() + text.size())
                throw DomainError("--features top:<k> needs an integer k, got '" + text + "'");
            GainRanking r;
            if (ranking.empty()) {
                r = rank_features(matrix, bins);
            } else {
                std::ifstream in(ranking, std::ios::binary);
                if (!in) throw IoError("cannot open ranking '" + ranking + "'");
                r = read_ranking(in);
            }
            return top_k(r, k);
        }
        throw DomainError("--features must be all, top:<k> or list:<file>, got '" + features + "'");
    }
};

void require_labels(const FeatureMatrix& m, const std::string& path) {
    if (!m.labeled()) throw ValidationError("matrix '" + path + "' has no label column");
}

// --- extract ---------------------------------------------------------------

struct ExtractCmd {
    CorpusArgs corpus;
    std::string wordlist = CLICKBAIT_DEFAULT_WORDLIST;
    std::string reference_time;
    std::string format = "csv";
    std::uint64_t seed = 1;
    bool need_labels = false;

    void add(CLI::App* sub) {
        corpus.add(sub, false);
        sub->add_option("--wordlist", wordlist, "English word list, one word per line");
        sub->add_option("--reference-time", reference_time, "timestamp post longevity is measured against");
        sub->add_option("--format", format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
        sub->add_option("--seed", seed, "recorded in the output; extraction is not randomized");
        sub->add_flag("--require-labels", need_labels, "fail unless --truth is given");
    }

    void run(const std::string& out_path, unsigned threads, std::ostream& out, std::ostream& err) const {
        if (need_labels && corpus.truth.empty()) throw ValidationError("--require-labels needs --truth");
        const auto schema = corpus.load_schema();
        auto dataset = load_instances(corpus.instances, schema);
        if (!corpus.truth.empty()) dataset = join(dataset, load_truth(corpus.truth, schema));
        if (dataset.instances.empty()) err << "warning: '" << corpus.instances << "' holds no instances\n";

        ExtractOptions options;
        options.threads = threads;
        if (!reference_time.empty()) {
            options.reference_time = parse_timestamp(reference_time);
            if (!options.reference_time) throw DomainError("unparseable --reference-time '" + reference_time + "'");
        } else {
            options.reference_time = default_reference_time(dataset);
        }
        const auto dict = WordList::load(wordlist);
        const auto matrix = extract_matrix(dataset, dict, options);

        RunRecord record;
        corpus.record(record);
        record.emplace_back("wordlist", wordlist);
        record.emplace_back("reference_time",
                            options.reference_time ? format_timestamp(*options.reference_time) : std::string("none"));
        record.emplace_back("seed", std::to_string(seed));
        emit(out_path, out, [&](std::ostream& o) {
            if (format == "csv") {
                write_matrix_csv(o, matrix, record_lines("extract", record));
            } else {
                write_matrix_jsonl(o, matrix);
            }
        });
    }
};

// --- rank ------------------------------------------------------------------

struct RankCmd {
    std::string matrix;
    int bins = kDefaultBins;
    std::uint64_t seed = 1;
    std::size_t echo = 12;

    void add(CLI::App* sub) {
        sub->add_option("--matrix", matrix, "labeled feature matrix")->required();
        sub->add_option("--bins", bins, "equal-frequency bins per feature")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "recorded in the output; ranking is not randomized");
        sub->add_option("--echo", echo, "rows of the ranking echoed to standard output");
    }

    void run(const std::string& out_path, unsigned threads, std::ostream& out, std::ostream& err) const {
        const auto m = load_matrix_csv(matrix);
        require_labels(m, matrix);
        if (bins == 1) err << "warning: --bins 1 puts every value in one bin; all gains are 0\n";
        const auto ranking = rank_features(m, bins, threads);
        const RunRecord record{{"matrix", matrix}, {"bins", std::to_string(bins)}, {"seed", std::to_string(seed)}};
        emit(out_path, out, [&](std::ostream& o) { write_ranking(o, ranking, record_lines("rank", record)); });
        if (out_path.empty()) return;
        const auto shown = std::min(echo, ranking.entries.size());
        char buf[64];
        out << "rank  info_gain  feature\n";
        for (std::size_t i = 0; i < shown; ++i) {
            std::snprintf(buf, sizeof buf, "%4zu  %9.6f  ", i + 1, ranking.entries[i].gain);
            out << buf << ranking.entries[i].name << '\n';
        }
    }
};

// --- train -----------------------------------------------------------------

struct TrainCmd {
    std::string matrix;
    ModelArgs model;

    void add(CLI::App* sub) {
        sub->add_option("--matrix", matrix, "labeled feature matrix")->required();
        model.add(sub);
    }

    void run(const std::string& out_path, unsigned threads, std::ostream& out, std::ostream&) const {
        const auto m = load_matrix_csv(matrix);
        require_labels(m, matrix);
        const auto config = model.config(m);
        TrainOptions options;
        options.threads = threads;
        const auto trained = train(m, config, options);
        emit(out_path, out, [&](std::ostream& o) { write_model(o, trained); });
    }
};

// --- evaluate --------------------------------------------------------------

struct EvaluateCmd {
    std::string matrix;
    ModelArgs model;
    int k = 10;
    double threshold = 0.5;
    int positive_class = 1;

    void add(CLI::App* sub) {
        sub->add_option("--matrix", matrix, "labeled feature matrix")->required();
        model.add(sub);
        sub->add_option("--k-folds", k, "cross-validation folds")->check(CLI::Range(2, 1 << 30));
        sub->add_option("--threshold", threshold, "score cut for accuracy, precision and recall")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--positive-class", positive_class, "class scored by precision and recall (1 = clickbait)")
            ->check(CLI::IsMember({0, 1}));
    }

    void run(const std::string& out_dir, unsigned threads, std::ostream& out, std::ostream&) const {
        const auto m = load_matrix_csv(matrix);
        require_labels(m, matrix);
        const auto config = model.config(m);
        CrossValidationOptions options;
        options.k = k;
        options.seed = model.seed;
        options.threshold = threshold;
        options.positive_class = positive_class;
        options.threads = threads;
        options.dataset = fs::path(matrix).filename().string();
        const auto report = cross_validate(m, config, options);
        write_report_text(out, report);
        if (out_dir.empty()) return;
        fs::create_directories(out_dir);
        emit((fs::path(out_dir) / "report.txt").string(), out, [&](std::ostream& o) { write_report_text(o, report); });
        emit((fs::path(out_dir) / "report.jsonl").string(), out,
             [&](std::ostream& o) { write_report_jsonl(o, report); });
    }
};

// --- predict ---------------------------------------------------------------

struct PredictCmd {
    std::string model_path;
    std::string matrix;
    double threshold = 0.5;
    std::uint64_t seed = 1;

    void add(CLI::App* sub) {
        sub->add_option("--model", model_path, "model file written by train")->required();
        sub->add_option("--matrix", matrix, "feature matrix to score")->required();
        sub->add_option("--threshold", threshold, "predicted class is 1 when score >= threshold")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--seed", seed, "recorded in the output; prediction is not randomized");
    }

    void run(const std::string& out_path, unsigned, std::ostream& out, std::ostream&) const {
        const auto model = load_model(model_path);
        const auto m = load_matrix_csv(matrix);
        const Eigen::VectorXd scores = predict_proba(model, m);
        const RunRecord record{{"model", model_path},
                               {"matrix", matrix},
                               {"algorithm", std::string(algorithm_name(model.algorithm()))},
                               {"threshold", format_double(threshold)},
                               {"seed", std::to_string(seed)}};
        emit(out_path, out, [&](std::ostream& o) {
            write_comments(o, record_lines("predict", record));
            o << "id,score,predicted_class\n";
            for (std::size_t i = 0; i < m.rows(); ++i) {
                const double s = scores[static_cast<Eigen::Index>(i)];
                o << m.ids()[i] << ',' << format_double(s) << ',' << (s >= threshold ? 1 : 0) << '\n';
            }
        });
    }
};

// --- stats -----------------------------------------------------------------

struct StatsCmd {
    CorpusArgs corpus;
    std::uint64_t seed = 1;

    void add(CLI::App* sub) {
        corpus.add(sub, true);
        sub->add_option("--seed", seed, "recorded in the output; statistics are not randomized");
    }

    void run(const std::string& out_path, unsigned, std::ostream& out, std::ostream&) const {
        const auto schema = corpus.load_schema();
        const auto dataset = join(load_instances(corpus.instances, schema), load_truth(corpus.truth, schema));
        const auto stats = title_length_stats(dataset);
        const auto chars = significance_test(stats.clickbait.chars, stats.legitimate.chars);
        const auto words = significance_test(stats.clickbait.words, stats.legitimate.words);
        RunRecord record;
        corpus.record(record);
        record.emplace_back("seed", std::to_string(seed));
        emit(out_path, out, [&](std::ostream& o) {
            write_comments(o, record_lines("stats", record));
            char buf[256];
            std::snprintf(buf, sizeof buf, "%-20s %10s %10s %12s %12s\n", "post title length", "clickbait",
                          "legitimate", "welch_p", "mann_whitney_p");
            o << buf;
            std::snprintf(buf, sizeof buf, "%-20s %10.3f %10.3f %12.4g %12.4g\n", "num of characters",
                          stats.clickbait.mean_chars, stats.legitimate.mean_chars, chars.t_p_value, chars.u_p_value);
            o << buf;
            std::snprintf(buf, sizeof buf, "%-20s %10.3f %10.3f %12.4g %12.4g\n", "num of words",
                          stats.clickbait.mean_words, stats.legitimate.mean_words, words.t_p_value, words.u_p_value);
            o << buf;
            std::snprintf(buf, sizeof buf, "%-20s %10zu %10zu\n", "titled posts", stats.clickbait.chars.size(),
                          stats.legitimate.chars.size());
            o << buf;
        });
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Clickbait detection pipeline: extract, rank, train, evaluate, predict, stats", "clickbait"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with one [subcommand] section; flags override it");
    std::string out_path;
    unsigned threads = 0;

    ExtractCmd extract;
    RankCmd rank;
    TrainCmd train_cmd;
    EvaluateCmd evaluate;
    PredictCmd predict;
    StatsCmd stats;

    auto common = [&](CLI::App* sub, const char* out_help) {
        sub->fallthrough();
        sub->add_option("--out", out_path, out_help);
        sub->add_option("--threads", threads, "worker threads (0 = all cores); output does not depend on it");
    };
    auto* s_extract = app.add_subcommand("extract", "compute the feature matrix of a corpus");
    extract.add(s_extract);
    common(s_extract, "matrix file (standard output when omitted)");
    auto* s_rank = app.add_subcommand("rank", "rank features by information gain");
    rank.add(s_rank);
    common(s_rank, "ranking file (standard output when omitted)");
    auto* s_train = app.add_subcommand("train", "train a classifier");
    train_cmd.add(s_train);
    common(s_train, "model file (standard output when omitted)");
    auto* s_evaluate = app.add_subcommand("evaluate", "k-fold cross-validation");
    evaluate.add(s_evaluate);
    common(s_evaluate, "directory for report.txt and report.jsonl");
    auto* s_predict = app.add_subcommand("predict", "score a matrix with a trained model");
    predict.add(s_predict);
    common(s_predict, "score file (standard output when omitted)");
    auto* s_stats = app.add_subcommand("stats", "post title length statistics per class");
    stats.add(s_stats);
    common(s_stats, "report file (standard output when omitted)");

    // CLI11 consumes arguments in reverse order, without the program name.
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*s_extract) extract.run(out_path, threads, out, err);
        else if (*s_rank) rank.run(out_path, threads, out, err);
        else if (*s_train) train_cmd.run(out_path, threads, out, err);
        else if (*s_evaluate) evaluate.run(out_path, threads, out, err);
        else if (*s_predict) predict.run(out_path, threads, out, err);
        else if (*s_stats) stats.run(out_path, threads, out, err);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace clickbait::cli
