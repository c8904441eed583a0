// Acceptance suite: one PASS / FAIL / SKIP line per criterion. Exits
// nonzero when any criterion fails. Criteria 5-7 need the labeled corpora
// on disk: set CLICKBAIT_TRAIN_DIR and/or CLICKBAIT_VALIDATION_DIR to
// directories holding instances.jsonl and truth.jsonl.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "clickbait/corpus.hpp"
#include "clickbait/eval.hpp"
#include "clickbait/features.hpp"
#include "clickbait/matrix.hpp"
#include "clickbait/models.hpp"
#include "clickbait/selection.hpp"
#include "clickbait/textstats.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace clickbait;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kGainTolerance = 1e-9;
constexpr double kAucTolerance = 1e-12;
constexpr double kCatalogSeconds = 10.0;
constexpr double kCharMeanTolerance = 2.0;
constexpr double kWordMeanTolerance = 0.8;
constexpr double kSignificance = 0.05;
constexpr double kValidationAucFloor = 0.75;
constexpr double kTrainingAucFloor = 0.67;
constexpr double kReplicationSeconds = 30.0 * 60.0;
constexpr std::size_t kRankingHitsNeeded = 6;
constexpr std::size_t kRankingWindow = 20;

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome = Outcome::pass;
    std::string detail;
};

// Collects failed checks; the first few are reported.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        ++total_;
        if (ok) return;
        if (failures_.size() < 5) failures_.push_back(what);
        ++failed_;
    }
    Verdict verdict(const std::string& summary) const {
        if (failed_ == 0) return {Outcome::pass, summary + ", " + std::to_string(total_) + " checks"};
        std::string d = std::to_string(failed_) + " of " + std::to_string(total_) + " checks failed";
        for (const auto& f : failures_) d += "; " + f;
        return {Outcome::fail, d};
    }

private:
    std::size_t total_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> failures_;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- 1: feature catalog properties -----------------------------------------

bool mentions(const std::string& name, std::string_view slug) {
    const std::string s(slug);
    return name.ends_with("_" + s) || name.find("__" + s + "__") != std::string::npos;
}

void swap_fields(PostInstance& p, ContentField a, ContentField b) {
    const auto scalar = [&](ContentField f) -> std::optional<std::string>* {
        switch (f) {
            case ContentField::PostTitle: return &p.post_title;
            case ContentField::PostImageText: return &p.image_text;
            case ContentField::ArticleTitle: return &p.article_title;
            case ContentField::ArticleDescription: return &p.article_description;
            default: return nullptr;
        }
    };
    const auto list = [&](ContentField f) -> std::optional<std::vector<std::string>>* {
        switch (f) {
            case ContentField::ArticleKeywords: return &p.article_keywords;
            case ContentField::ArticleCaptions: return &p.article_captions;
            case ContentField::ArticleParagraphs: return &p.article_paragraphs;
            default: return nullptr;
        }
    };
    if (scalar(a) && scalar(b)) std::swap(*scalar(a), *scalar(b));
    else std::swap(*list(a), *list(b));
}

bool same_kind(ContentField a, ContentField b) {
    const auto is_list = [](ContentField f) {
        return f == ContentField::ArticleKeywords || f == ContentField::ArticleCaptions ||
               f == ContentField::ArticleParagraphs;
    };
    return is_list(a) == is_list(b);
}

Verdict feature_catalog() {
    const auto start = std::chrono::steady_clock::now();
    const auto corpus = testing::synthetic_corpus(200, 2024);
    const auto& catalog = FeatureCatalog::instance();
    const auto& pairs = field_pairs();
    Checks c;

    // Every presence pattern of the seven fields occurs in the fixture.
    std::vector<bool> patterns(128, false);
    for (const auto& p : corpus.instances) {
        unsigned mask = 0;
        for (std::size_t i = 0; i < kContentFieldCount; ++i)
            if (content(p, kContentFields[i]).present()) mask |= 1U << i;
        patterns[mask] = true;
    }
    c.expect(std::all_of(patterns.begin(), patterns.end(), [](bool b) { return b; }), "absence patterns incomplete");

    for (const auto& dict : {testing::small_wordlist(), testing::bundled_wordlist()}) {
        const auto reference = default_reference_time(corpus);
        for (const auto& p : corpus.instances) {
            const auto v = extract_all(p, dict, reference);
            const std::string id = "instance " + p.id;
            c.expect(v.values.size() == 188, id + ": feature count");
            c.expect(v.values.allFinite(), id + ": non-finite value");

            // Sentinel discipline.
            for (auto f : kContentFields) {
                const auto value = content(p, f);
                if (value.present()) continue;
                for (std::size_t k = 0; k < catalog.size(); ++k)
                    if (mentions(catalog.name(k), field_slug(f)))
                        c.expect(v.values[static_cast<Eigen::Index>(k)] == kMissing, id + ": " + catalog.name(k));
                if (f == ContentField::ArticleKeywords)
                    for (auto g : kOverlapFields)
                        c.expect(v.at("common_keywords_" + std::string(field_slug(g))) == kMissing,
                                 id + ": keyword overlap without keywords");
            }
            for (Eigen::Index k = 0; k < v.values.size(); ++k)
                c.expect(v.values[k] >= 0 || v.values[k] == kMissing, id + ": negative non-sentinel value");

            // Pairwise consistency with the count features, plus swap symmetry.
            for (const auto mode : {CountMode::characters, CountMode::words}) {
                const auto counts = mode == CountMode::characters ? char_count_features(p) : word_count_features(p);
                const auto diff = pairwise_diff_features(p, mode);
                const auto ratio = pairwise_ratio_features(p, mode);
                for (std::size_t k = 0; k < pairs.size(); ++k) {
                    const auto [a, b] = pairs[k];
                    const double ca = counts[static_cast<std::size_t>(a)];
                    const double cb = counts[static_cast<std::size_t>(b)];
                    const bool both = ca != kMissing && cb != kMissing;
                    c.expect(diff[k] == (both ? std::abs(ca - cb) : kMissing), id + ": diff");
                    c.expect(ratio[k] == (both && cb > 0 ? ca / cb : kMissing), id + ": ratio");
                    if (!same_kind(a, b)) continue;
                    PostInstance swapped = p;
                    swap_fields(swapped, a, b);
                    c.expect(pairwise_diff_features(swapped, mode)[k] == diff[k], id + ": diff symmetry");
                    const double back = pairwise_ratio_features(swapped, mode)[k];
                    if (both && ca > 0 && cb > 0)
                        c.expect(std::abs(back * ratio[k] - 1.0) <= 1e-12, id + ": ratio reciprocity");
                    else if (!both)
                        c.expect(back == kMissing, id + ": ratio reciprocity sentinel");
                }
            }

            // Formal and informal words partition each field's distinct words.
            const auto fi = formal_informal_features(p, dict);
            for (std::size_t i = 0; i < kContentFieldCount; ++i) {
                const auto w = words(content(p, kContentFields[i]));
                const auto formal = formal_words(w, dict);
                const auto informal = informal_words(w, dict);
                c.expect(formal.size() + informal.size() == w.size(), id + ": partition size");
                for (const auto& t : formal) c.expect(!informal.contains(t), id + ": partition overlap");
                const double* f4 = &fi[4 * i];
                if (w.empty()) {
                    for (int j = 0; j < 4; ++j) c.expect(f4[j] == kMissing, id + ": dictionary sentinel");
                    continue;
                }
                c.expect(f4[0] == static_cast<double>(formal.size()), id + ": formal count");
                c.expect(f4[1] == static_cast<double>(informal.size()), id + ": informal count");
                c.expect(f4[0] + f4[1] == static_cast<double>(w.size()), id + ": counts sum");
                c.expect(std::abs(f4[2] + f4[3] - 1.0) <= 1e-12, id + ": ratios sum");
            }
        }
    }
    const double elapsed = seconds_since(start);
    c.expect(elapsed < kCatalogSeconds, "took " + fmt("%.1f s", elapsed));
    return c.verdict("200 instances, 128 absence patterns, " + fmt("%.2f s", elapsed));
}

// --- 2: information gain oracle ----------------------------------------------

Verdict information_gain_oracle() {
    Checks c;
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = testing::random_matrix(30, 5, 2 + static_cast<int>(seed % 9), seed * 7919 + 1);
        const std::vector<int> y(m.labels().data(), m.labels().data() + m.rows());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Eigen::VectorXd col = m.column(j);
            const std::vector<double> x(col.data(), col.data() + col.size());
            const double diff =
                std::abs(information_gain(col, m.labels()) - testing::information_gain_oracle(x, y, kDefaultBins));
            worst = std::max(worst, diff);
            c.expect(diff <= kGainTolerance, "seed " + std::to_string(seed) + " column " + std::to_string(j));
        }
    }
    return c.verdict("50 matrices 30x5, max |diff| " + fmt("%.2e", worst));
}

// --- 3: AUC oracle -----------------------------------------------------------

Verdict auc_oracle() {
    Checks c;
    std::mt19937_64 rng(31337);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 50)(rng);
        const int grid = std::uniform_int_distribution<int>(1, 20)(rng);
        Eigen::VectorXd s(n);
        Eigen::VectorXi y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            s[i] = static_cast<double>(std::uniform_int_distribution<int>(0, grid)(rng)) / grid;
            y[i] = std::bernoulli_distribution(0.4)(rng) ? 1 : 0;
        }
        y[std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng)] = 1;
        if (y.sum() == n) y[std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng)] = 0;
        if (y.sum() == n || y.sum() == 0) y[0] = 1 - y[1];
        const double diff = std::abs(auc(s, y) - testing::auc_oracle({s.data(), s.data() + n},
                                                                     {y.data(), y.data() + n}));
        worst = std::max(worst, diff);
        c.expect(diff <= kAucTolerance, "trial " + std::to_string(trial));
    }
    return c.verdict("100 vectors, max |diff| " + fmt("%.2e", worst));
}

// --- 4: classifier sanity ----------------------------------------------------

Verdict classifier_sanity() {
    Checks c;
    const auto x = testing::xor_matrix(10);
    auto gb = TrainConfig::defaults_for(Algorithm::gradient_boosting);
    gb.n_trees = 50;
    const Eigen::VectorXd s = predict_proba(train(x, gb), x);
    int right = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) right += (s[i] >= 0.5 ? 1 : 0) == x.labels()[i];
    c.expect(right == s.size(), "xor accuracy " + std::to_string(right) + "/" + std::to_string(s.size()));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = testing::random_matrix(100, 6, 8, 9000 + seed);
        const auto dt = TrainConfig::defaults_for(Algorithm::decision_tree);
        auto rf = TrainConfig::defaults_for(Algorithm::random_forest);
        rf.n_trees = 1;
        rf.bootstrap = false;
        rf.feature_fraction = 1.0;
        rf.tree_depth_max = dt.tree_depth_max;
        rf.min_leaf = dt.min_leaf;
        rf.seed = seed;
        const Eigen::VectorXd a = predict_proba(train(m, dt), m);
        const Eigen::VectorXd b = predict_proba(train(m, rf), m);
        c.expect(a == b, "fixture " + std::to_string(seed));
    }
    return c.verdict("xor 40/40 within 50 rounds, 20 forest/tree fixtures identical");
}

// --- 5-7: corpora on disk ----------------------------------------------------

struct Corpus {
    std::string role;  // "training" or "validation"
    fs::path dir;
};

std::vector<Corpus> corpora_from_env() {
    std::vector<Corpus> out;
    for (const auto& [role, var] : {std::pair{"training", "CLICKBAIT_TRAIN_DIR"},
                                    std::pair{"validation", "CLICKBAIT_VALIDATION_DIR"}}) {
        if (const char* v = std::getenv(var); v && *v) out.push_back({role, v});
    }
    return out;
}

Dataset load_corpus(const Corpus& c) {
    return join(load_instances(c.dir / "instances.jsonl"), load_truth(c.dir / "truth.jsonl"));
}

struct ExpectedLengths {
    double clickbait_chars, legitimate_chars, clickbait_words, legitimate_words;
};

ExpectedLengths expected_lengths(const std::string& role) {
    if (role == "training") return {71.83, 81.746, 11.787, 12.877};
    return {59.288, 74.69, 10.012, 11.898};
}

std::string missing_note(const std::vector<Corpus>& corpora) {
    return corpora.size() == 2 ? "" : " (only " + corpora[0].role + " corpus provided)";
}

Verdict title_lengths(const std::vector<Corpus>& corpora) {
    if (corpora.empty()) return {Outcome::skip, "set CLICKBAIT_TRAIN_DIR / CLICKBAIT_VALIDATION_DIR"};
    Checks c;
    std::string summary;
    for (const auto& corpus : corpora) {
        const auto stats = title_length_stats(load_corpus(corpus));
        const auto want = expected_lengths(corpus.role);
        const auto& cb = stats.clickbait;
        const auto& lg = stats.legitimate;
        const auto near = [&](double got, double expected, double tol, const std::string& what) {
            c.expect(std::abs(got - expected) <= tol,
                     corpus.role + " " + what + " " + fmt("%.3f", got) + " vs " + fmt("%.3f", expected));
        };
        near(cb.mean_chars, want.clickbait_chars, kCharMeanTolerance, "clickbait chars");
        near(lg.mean_chars, want.legitimate_chars, kCharMeanTolerance, "legitimate chars");
        near(cb.mean_words, want.clickbait_words, kWordMeanTolerance, "clickbait words");
        near(lg.mean_words, want.legitimate_words, kWordMeanTolerance, "legitimate words");
        const auto chars = significance_test(cb.chars, lg.chars);
        const auto words = significance_test(cb.words, lg.words);
        for (const auto& [p, what] : {std::pair{chars.t_p_value, "chars welch"}, std::pair{chars.u_p_value, "chars mw"},
                                      std::pair{words.t_p_value, "words welch"}, std::pair{words.u_p_value, "words mw"}})
            c.expect(p < kSignificance, corpus.role + " " + what + " p=" + fmt("%.3g", p));
        summary += (summary.empty() ? "" : "; ") + corpus.role + " chars " + fmt("%.2f", cb.mean_chars) + "/" +
                   fmt("%.2f", lg.mean_chars) + " words " + fmt("%.2f", cb.mean_words) + "/" +
                   fmt("%.2f", lg.mean_words);
    }
    return c.verdict(summary + missing_note(corpora));
}

FeatureMatrix extract_corpus(const Dataset& d) {
    ExtractOptions opts;
    opts.threads = 0;
    opts.reference_time = default_reference_time(d);
    return extract_matrix(d, testing::bundled_wordlist(), opts);
}

Verdict classification(const std::vector<Corpus>& corpora) {
    if (corpora.empty()) return {Outcome::skip, "set CLICKBAIT_TRAIN_DIR / CLICKBAIT_VALIDATION_DIR"};
    Checks c;
    std::string summary;
    for (const auto& corpus : corpora) {
        const auto start = std::chrono::steady_clock::now();
        const auto m = extract_corpus(load_corpus(corpus));
        CrossValidationOptions opts;
        opts.k = 10;
        opts.threads = 0;
        opts.dataset = corpus.role;
        const auto report = cross_validate(m, TrainConfig::defaults_for(Algorithm::gradient_boosting), opts);
        const double elapsed = seconds_since(start);
        const double floor = corpus.role == "training" ? kTrainingAucFloor : kValidationAucFloor;
        c.expect(report.aggregate.auc >= floor,
                 corpus.role + " auc " + fmt("%.4f", report.aggregate.auc) + " < " + fmt("%.2f", floor));
        c.expect(elapsed < kReplicationSeconds, corpus.role + " took " + fmt("%.0f s", elapsed));
        summary += (summary.empty() ? "" : "; ") + corpus.role + " auc " + fmt("%.4f", report.aggregate.auc) +
                   " in " + fmt("%.0f s", elapsed);
    }
    return c.verdict(summary + missing_note(corpora));
}

// The twelve validation-set features reported as most informative.
const std::vector<std::string>& reported_top_features() {
    static const std::vector<std::string> names = {
        "num_chars_post_title",
        "ratio_num_chars__post_title__post_image_text",
        "diff_num_chars__post_title__article_keywords",
        "diff_num_chars__post_title__post_image_text",
        "ratio_num_words__post_title__post_image_text",
        "num_words_post_title",
        "num_formal_words_post_title",
        "ratio_num_words__post_title__article_description",
        "ratio_num_chars__post_title__article_description",
        "ratio_num_chars__post_title__article_title",
        "ratio_num_words__post_title__article_title",
        "diff_num_words__post_title__article_keywords",
    };
    return names;
}

Verdict ranking_shape(const std::vector<Corpus>& corpora) {
    const auto it = std::find_if(corpora.begin(), corpora.end(), [](const Corpus& c) { return c.role == "validation"; });
    if (it == corpora.end()) return {Outcome::skip, "set CLICKBAIT_VALIDATION_DIR"};
    const auto ranking = rank_features(extract_corpus(load_corpus(*it)), kDefaultBins, 0);
    const auto top = top_k(ranking, std::min(kRankingWindow, ranking.entries.size()));
    std::size_t hits = 0;
    for (const auto& name : reported_top_features())
        if (std::find(top.begin(), top.end(), name) != top.end()) ++hits;
    Checks c;
    c.expect(hits >= kRankingHitsNeeded, std::to_string(hits) + " of 12 in the top 20");
    return c.verdict(std::to_string(hits) + " of 12 in the top 20");
}

// --- 8: pipeline determinism -------------------------------------------------

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "clickbait");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return code;
}

// Runs extract, rank, train, evaluate, predict and stats under `dir`;
// returns every artifact's bytes keyed by relative path.
std::optional<std::vector<std::pair<std::string, std::string>>> pipeline(const fs::path& dir,
                                                                          const fs::path& corpus) {
    const auto p = [&](const char* name) { return (dir / name).string(); };
    const auto instances = (corpus / "instances.jsonl").string();
    const auto truth = (corpus / "truth.jsonl").string();
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> steps = {
        {"extract", "--instances", instances, "--truth", truth, "--wordlist", CLICKBAIT_TEST_WORDLIST, "--out",
         p("matrix.csv")},
        {"rank", "--matrix", p("matrix.csv"), "--out", p("ranking.tsv")},
        {"train", "--matrix", p("matrix.csv"), "--features", "top:20", "--ranking", p("ranking.tsv"), "--trees", "40",
         "--out", p("model.txt")},
        {"train", "--matrix", p("matrix.csv"), "--algorithm", "random_forest", "--trees", "30", "--out",
         p("forest.txt")},
        {"evaluate", "--matrix", p("matrix.csv"), "--trees", "40", "--k-folds", "5", "--out", p("eval")},
        {"predict", "--model", p("model.txt"), "--matrix", p("matrix.csv"), "--out", p("scores.csv")},
        {"stats", "--instances", instances, "--truth", truth, "--out", p("stats.txt")},
    };
    for (const auto& s : steps)
        if (cli(s) != 0) return std::nullopt;
    std::vector<std::pair<std::string, std::string>> artifacts;
    for (const auto* name : {"matrix.csv", "ranking.tsv", "model.txt", "forest.txt", "eval/report.txt",
                             "eval/report.jsonl", "scores.csv", "stats.txt"})
        artifacts.emplace_back(name, testing::read_file(dir / name));
    return artifacts;
}

Verdict determinism() {
    testing::TempDir tmp("acceptance");
    testing::write_corpus(tmp / "corpus", testing::synthetic_corpus(300, 77));
    const auto first = pipeline(tmp / "run", tmp / "corpus");
    if (!first) return {Outcome::fail, "first pipeline run failed"};
    fs::remove_all(tmp / "run");
    const auto second = pipeline(tmp / "run", tmp / "corpus");
    if (!second) return {Outcome::fail, "second pipeline run failed"};
    Checks c;
    for (std::size_t i = 0; i < first->size(); ++i) {
        c.expect(!(*first)[i].second.empty(), (*first)[i].first + " is empty");
        c.expect((*first)[i].second == (*second)[i].second, (*first)[i].first + " differs");
    }
    return c.verdict(std::to_string(first->size()) + " artifacts byte-identical");
}

}  // namespace

int main() {
    const auto corpora = corpora_from_env();
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"feature catalog properties", feature_catalog},
        {"information gain matches oracle", information_gain_oracle},
        {"auc matches oracle", auc_oracle},
        {"classifier sanity", classifier_sanity},
        {"title length replication", [&] { return title_lengths(corpora); }},
        {"classification replication", [&] { return classification(corpora); }},
        {"ranking shape", [&] { return ranking_shape(corpora); }},
        {"pipeline determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {Outcome::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
        if (v.outcome == Outcome::fail) ++failed;
        std::printf("criterion %zu: %s  %s (%s)\n", i + 1, tag, criteria[i].first.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
