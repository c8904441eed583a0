#include "clickbait/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <boost/math/distributions/students_t.hpp>

#include "clickbait/parallel.hpp"
#include "clickbait/random.hpp"
#include "clickbait/textstats.hpp"
#include "json.hpp"

namespace clickbait {

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(i);
    return out;
}

FoldPlan make_folds(const Eigen::VectorXi& labels, int k, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(labels.size());
    if (k < 2) throw DomainError("k-fold needs k >= 2, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) > n)
        throw DomainError("k=" + std::to_string(k) + " exceeds instance count " + std::to_string(n));
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < n; ++i) (labels[static_cast<Eigen::Index>(i)] != 0 ? positives : negatives).push_back(i);
    if (positives.empty() || negatives.empty()) throw DomainError("k-fold needs both classes present");

    std::mt19937_64 rng(splitmix64(seed));
    shuffle(positives, rng);
    shuffle(negatives, rng);
    FoldPlan plan{std::vector<int>(n, 0), k, seed};
    std::size_t dealt = 0;
    for (const auto* group : {&positives, &negatives})
        for (auto i : *group) plan.assignments[i] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
    return plan;
}

ThresholdMetrics threshold_metrics(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels, double threshold,
                                   int positive_class) {
    if (scores.size() != labels.size()) throw DomainError("threshold_metrics: score and label lengths differ");
    if (scores.size() == 0) throw DomainError("threshold_metrics: no instances");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError("threshold must lie in [0, 1]");
    if (positive_class != 0 && positive_class != 1) throw DomainError("positive class must be 0 or 1");
    long tp = 0, fp = 0, tn = 0, fn = 0;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        const bool predicted = positive_class == 1 ? scores[i] >= threshold : scores[i] < threshold;
        const bool actual = labels[i] == positive_class;
        if (predicted && actual) ++tp;
        else if (predicted) ++fp;
        else if (actual) ++fn;
        else ++tn;
    }
    ThresholdMetrics m;
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
    m.precision_undefined = tp + fp == 0;
    m.recall_undefined = tp + fn == 0;
    m.precision = m.precision_undefined ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = m.recall_undefined ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    return m;
}

MetricSet compute_metrics(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels, double threshold,
                          int positive_class) {
    const auto primary = threshold_metrics(scores, labels, threshold, positive_class);
    const auto other = threshold_metrics(scores, labels, threshold, 1 - positive_class);
    MetricSet m;
    m.auc = auc(scores, labels);
    m.accuracy = primary.accuracy;
    m.precision = primary.precision;
    m.recall = primary.recall;
    m.precision_other = other.precision;
    m.recall_other = other.recall;
    return m;
}

EvaluationReport cross_validate(const FeatureMatrix& matrix, const TrainConfig& config,
                                const CrossValidationOptions& options) {
    const auto& labels = matrix.labels();
    const auto plan = make_folds(labels, options.k, options.seed);
    EvaluationReport report;
    report.dataset = options.dataset;
    report.config = config;
    report.k = options.k;
    report.seed = options.seed;
    report.threshold = options.threshold;
    report.positive_class = options.positive_class;
    report.per_fold.resize(static_cast<std::size_t>(options.k));

    Eigen::VectorXd pooled_scores(labels.size());
    // Folds run in parallel; each trains single-threaded.
    parallel_for(static_cast<std::size_t>(options.k), options.threads, [&](std::size_t fold) {
        const auto train_rows = plan.train_rows(static_cast<int>(fold));
        const auto test_rows = plan.test_rows(static_cast<int>(fold));
        const auto model = train(matrix.select_rows(train_rows), config);
        const auto test = matrix.select_rows(test_rows);
        const Eigen::VectorXd scores = predict_proba(model, test);
        for (std::size_t i = 0; i < test_rows.size(); ++i)
            pooled_scores[static_cast<Eigen::Index>(test_rows[i])] = scores[static_cast<Eigen::Index>(i)];
        report.per_fold[fold] = compute_metrics(scores, test.labels(), options.threshold, options.positive_class);
    });

    const double k = static_cast<double>(options.k);
    for (const auto& m : report.per_fold) {
        report.aggregate.auc += m.auc / k;
        report.aggregate.accuracy += m.accuracy / k;
        report.aggregate.precision += m.precision / k;
        report.aggregate.recall += m.recall / k;
        report.aggregate.precision_other += m.precision_other / k;
        report.aggregate.recall_other += m.recall_other / k;
    }
    report.pooled = compute_metrics(pooled_scores, labels, options.threshold, options.positive_class);
    return report;
}

namespace {

nlohmann::ordered_json metrics_json(const MetricSet& m) {
    nlohmann::ordered_json j;
    j["auc"] = m.auc;
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["precision_other_class"] = m.precision_other;
    j["recall_other_class"] = m.recall_other;
    return j;
}

nlohmann::ordered_json report_context(const EvaluationReport& r) {
    nlohmann::ordered_json j;
    j["dataset"] = r.dataset;
    j["k"] = r.k;
    j["seed"] = r.seed;
    j["threshold"] = r.threshold;
    j["positive_class"] = r.positive_class;
    j["config"] = nlohmann::ordered_json::parse(config_to_json(r.config));
    return j;
}

std::string metric_row(const std::string& label, const MetricSet& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %8.4f %9.4f %10.4f %8.4f %12.4f %10.4f", label.c_str(), m.auc, m.accuracy,
                  m.precision, m.recall, m.precision_other, m.recall_other);
    return buf;
}

}  // namespace

void write_report_text(std::ostream& out, const EvaluationReport& r) {
    out << "dataset: " << r.dataset << '\n';
    out << "algorithm: " << algorithm_name(r.config.algorithm) << "  features: "
        << (r.config.feature_subset ? std::to_string(r.config.feature_subset->size()) : std::string("all"))
        << "  folds: " << r.k << "  seed: " << r.seed << "  threshold: " << r.threshold
        << "  positive class: " << r.positive_class << '\n';
    out << "config: " << config_to_json(r.config) << '\n';
    out << "fold          auc  accuracy  precision   recall  prec(other)  rec(other)\n";
    for (std::size_t f = 0; f < r.per_fold.size(); ++f) out << metric_row(std::to_string(f), r.per_fold[f]) << '\n';
    out << metric_row("mean", r.aggregate) << '\n';
    out << metric_row("pooled", r.pooled) << '\n';
}

void write_report_jsonl(std::ostream& out, const EvaluationReport& r) {
    const auto context = report_context(r);
    for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
        nlohmann::ordered_json j;
        j["record"] = "fold";
        j["fold"] = f;
        j["metrics"] = metrics_json(r.per_fold[f]);
        j["run"] = context;
        out << j.dump() << '\n';
    }
    for (const auto& [name, m] : {std::pair{"aggregate", &r.aggregate}, std::pair{"pooled", &r.pooled}}) {
        nlohmann::ordered_json j;
        j["record"] = name;
        j["metrics"] = metrics_json(*m);
        j["run"] = context;
        out << j.dump() << '\n';
    }
}

TitleLengthStats title_length_stats(const Dataset& dataset) {
    if (!dataset.labels) throw DomainError("title length statistics need a labeled dataset");
    TitleLengthStats stats;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& p = dataset.instances[i];
        if (!p.post_title) continue;
        auto& cls = (*dataset.labels)[i].label == Label::clickbait ? stats.clickbait : stats.legitimate;
        const auto v = ContentValue::text(*p.post_title);
        cls.chars.push_back(len_characters(v));
        cls.words.push_back(len_words(v));
    }
    for (auto* cls : {&stats.clickbait, &stats.legitimate}) {
        if (cls->chars.empty()) throw DomainError("a class has no titled posts");
        const double n = static_cast<double>(cls->chars.size());
        cls->mean_chars = std::accumulate(cls->chars.begin(), cls->chars.end(), 0.0) / n;
        cls->mean_words = std::accumulate(cls->words.begin(), cls->words.end(), 0.0) / n;
    }
    return stats;
}

double welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("welch t-test: each sample needs at least 2 values");
    const auto moments = [](const std::vector<double>& x) {
        const double n = static_cast<double>(x.size());
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : x) ss += (v - mean) * (v - mean);
        return std::pair{mean, ss / (n - 1.0)};
    };
    const auto [ma, va] = moments(a);
    const auto [mb, vb] = moments(b);
    const double qa = va / static_cast<double>(a.size());
    const double qb = vb / static_cast<double>(b.size());
    if (!(qa + qb > 0)) throw DomainError("welch t-test: both samples have zero variance");
    const double t = (ma - mb) / std::sqrt(qa + qb);
    double df = (qa + qb) * (qa + qb);
    df /= qa * qa / static_cast<double>(a.size() - 1) + qb * qb / static_cast<double>(b.size() - 1);
    const boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double mann_whitney_u_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw DomainError("mann-whitney u-test: empty sample");
    Eigen::VectorXd scores(static_cast<Eigen::Index>(a.size() + b.size()));
    Eigen::VectorXi member(scores.size());
    for (std::size_t i = 0; i < a.size(); ++i) scores[static_cast<Eigen::Index>(i)] = a[i], member[static_cast<Eigen::Index>(i)] = 1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(a.size() + i);
        scores[k] = b[i];
        member[k] = 0;
    }
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double n = n1 + n2;

    std::vector<double> sorted(scores.data(), scores.data() + scores.size());
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(variance > 0)) throw DomainError("mann-whitney u-test: all values are tied");
    // U of sample a equals auc * n1 * n2.
    const double u = auc(scores, member) * n1 * n2;
    const double z = (u - n1 * n2 / 2.0) / std::sqrt(variance);
    return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

SignificanceResult significance_test(const std::vector<double>& a, const std::vector<double>& b) {
    return {welch_t_test(a, b), mann_whitney_u_test(a, b)};
}

}  // namespace clickbait
