#pragma once

// Cross-validation, ranking and threshold metrics, title-length statistics
// and two-sample significance tests.

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clickbait/corpus.hpp"
#include "clickbait/errors.hpp"
#include "clickbait/matrix.hpp"
#include "clickbait/models.hpp"

namespace clickbait {

struct FoldPlan {
    std::vector<int> assignments;  // fold index per instance
    int k = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_rows(int fold) const;
    std::vector<std::size_t> train_rows(int fold) const;
};

// Stratified, seeded plan: each class is shuffled and dealt round-robin,
// so fold sizes and per-fold positive counts differ by at most one.
FoldPlan make_folds(const Eigen::VectorXi& labels, int k, std::uint64_t seed);

// Mann-Whitney AUC with average ranks; tied pairs count one half.
template <typename DerivedS, typename DerivedL>
double auc(const Eigen::DenseBase<DerivedS>& scores, const Eigen::DenseBase<DerivedL>& labels) {
    const auto n = scores.size();
    if (labels.size() != n) throw DomainError("auc: score and label lengths differ");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return scores.derived().coeff(a) < scores.derived().coeff(b);
    });
    double rank_sum = 0.0;
    Eigen::Index positives = 0;
    for (Eigen::Index i = 0; i < n;) {
        Eigen::Index j = i;
        const double v = scores.derived().coeff(order[static_cast<std::size_t>(i)]);
        while (j < n && scores.derived().coeff(order[static_cast<std::size_t>(j)]) == v) ++j;
        const double average_rank = static_cast<double>(i + j + 1) / 2.0;  // 1-based ranks i+1..j
        for (Eigen::Index t = i; t < j; ++t) {
            if (labels.derived().coeff(order[static_cast<std::size_t>(t)]) != 0) {
                rank_sum += average_rank;
                ++positives;
            }
        }
        i = j;
    }
    const Eigen::Index negatives = n - positives;
    if (positives == 0 || negatives == 0) throw DomainError("auc: labels contain a single class");
    const double p = static_cast<double>(positives);
    return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

struct ThresholdMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    bool precision_undefined = false;  // no positive predictions; precision reported as 0
    bool recall_undefined = false;     // no positive instances; recall reported as 0
};

// With positive_class 1 an instance is predicted positive when
// score >= threshold; with positive_class 0 when score < threshold.
ThresholdMetrics threshold_metrics(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels, double threshold,
                                   int positive_class);

struct MetricSet {
    double auc = 0.0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    // Precision and recall with the other class taken as positive.
    double precision_other = 0.0;
    double recall_other = 0.0;
};

MetricSet compute_metrics(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels, double threshold,
                          int positive_class);

struct EvaluationReport {
    std::string dataset;
    TrainConfig config;
    int k = 0;
    std::uint64_t seed = 0;
    double threshold = 0.5;
    int positive_class = 1;
    std::vector<MetricSet> per_fold;
    MetricSet aggregate;  // field-wise mean over folds
    MetricSet pooled;     // metrics over all out-of-fold scores at once
};

struct CrossValidationOptions {
    int k = 10;
    std::uint64_t seed = 1;
    double threshold = 0.5;
    int positive_class = 1;
    unsigned threads = 1;
    std::string dataset;
};

EvaluationReport cross_validate(const FeatureMatrix& matrix, const TrainConfig& config,
                                const CrossValidationOptions& options);

// Human-readable table and line-delimited JSON (one record per fold, then
// the aggregate and pooled records), each carrying the config snapshot.
void write_report_text(std::ostream& out, const EvaluationReport& report);
void write_report_jsonl(std::ostream& out, const EvaluationReport& report);

struct ClassLengths {
    std::vector<double> chars;
    std::vector<double> words;
    double mean_chars = 0.0;
    double mean_words = 0.0;
};

struct TitleLengthStats {
    ClassLengths clickbait;
    ClassLengths legitimate;
};

// Post-title lengths per class; untitled posts are skipped. Throws
// DomainError for unlabeled data or a class without titled posts.
TitleLengthStats title_length_stats(const Dataset& dataset);

struct SignificanceResult {
    double t_p_value = 1.0;  // two-sided Welch t-test
    double u_p_value = 1.0;  // two-sided Mann-Whitney U, normal approximation with tie correction
};

SignificanceResult significance_test(const std::vector<double>& a, const std::vector<double>& b);
double welch_t_test(const std::vector<double>& a, const std::vector<double>& b);
double mann_whitney_u_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace clickbait
