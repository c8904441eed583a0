#pragma once

// Tree-ensemble classifiers built on one exact greedy CART learner:
// single tree, bagged random forest, SAMME AdaBoost and logistic-loss
// gradient boosting. Every model scores into [0, 1].

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "clickbait/features.hpp"
#include "clickbait/matrix.hpp"

namespace clickbait {

enum class Algorithm { decision_tree, random_forest, adaboost, gradient_boosting };

std::string_view algorithm_name(Algorithm a);
// Throws DomainError for unknown names.
Algorithm parse_algorithm(std::string_view name);

struct TrainConfig {
    Algorithm algorithm = Algorithm::gradient_boosting;
    std::optional<std::vector<std::string>> feature_subset;  // nullopt: every matrix column
    std::uint64_t seed = 1;
    int tree_depth_max = 3;
    int n_trees = 200;
    double learning_rate = 0.1;  // boosting only
    int min_leaf = 5;
    double feature_fraction = 1.0;  // random_forest: share of features tried per split
    bool bootstrap = true;          // random_forest only

    // Per-algorithm defaults:
    //   decision_tree      depth 8, min_leaf 5
    //   random_forest      200 trees, depth 10, min_leaf 2, feature_fraction 0.3, bootstrap
    //   adaboost           200 stumps (depth 1), learning_rate 1, min_leaf 1
    //   gradient_boosting  200 trees, depth 3, learning_rate 0.1, min_leaf 5
    static TrainConfig defaults_for(Algorithm a);

    // Throws DomainError when a bound is violated.
    void validate() const;

    bool operator==(const TrainConfig&) const = default;
};

std::string config_to_json(const TrainConfig& c);
TrainConfig config_from_json(std::string_view text);

// Flat binary tree. A node with feature < 0 is a leaf holding `value`;
// otherwise rows with x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    template <typename Row>
    double evaluate(const Row& x) const {
        int i = 0;
        while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
            const auto& n = nodes[static_cast<std::size_t>(i)];
            i = x[n.feature] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(i)].value;
    }

    int depth() const;
    bool operator==(const Tree&) const = default;
};

struct WeightedTree {
    Tree tree;
    double weight = 1.0;
    bool operator==(const WeightedTree&) const = default;
};

enum class Link { identity, logistic };

class EnsembleModel {
public:
    EnsembleModel(TrainConfig config, std::vector<std::string> features, std::vector<WeightedTree> trees,
                  double base_score, Link link);

    Algorithm algorithm() const { return config_.algorithm; }
    const TrainConfig& config() const { return config_; }
    const std::vector<std::string>& features() const { return features_; }
    const std::vector<WeightedTree>& trees() const { return trees_; }
    double base_score() const { return base_score_; }
    Link link() const { return link_; }

    // `x` is indexed by position in features(). Result is clamped to [0, 1].
    template <typename Row>
    double score(const Row& x) const {
        double f = base_score_;
        for (const auto& t : trees_) f += t.weight * t.tree.evaluate(x);
        return finish(f);
    }

    bool operator==(const EnsembleModel&) const = default;

private:
    double finish(double raw) const;

    TrainConfig config_;
    std::vector<std::string> features_;
    std::vector<WeightedTree> trees_;
    double base_score_ = 0.0;
    Link link_ = Link::identity;
};

// Per-round diagnostics filled by train() when requested.
struct TrainingTrace {
    std::vector<double> loss;            // gradient_boosting: mean logistic loss after each round, [0] = initial
    std::vector<double> weighted_error;  // adaboost: weighted error of each candidate stump
};

struct TrainOptions {
    unsigned threads = 1;
    TrainingTrace* trace = nullptr;
};

// Deterministic for a fixed (matrix, config). Throws TrainingError for
// single-class or empty training data, DomainError for a bad config or
// feature subset.
EnsembleModel train(const FeatureMatrix& matrix, const TrainConfig& config, const TrainOptions& options = {});

// Throws DomainError naming the first model feature the vector lacks.
double predict_proba(const EnsembleModel& model, const FeatureVector& vector);
// Scores every row; throws DomainError naming the first missing feature.
Eigen::VectorXd predict_proba(const EnsembleModel& model, const FeatureMatrix& matrix);

void save_model(const EnsembleModel& model, const std::filesystem::path& path);
void write_model(std::ostream& out, const EnsembleModel& model);
// Throws IoError when unreadable and ModelLoadError on version mismatch or corruption.
EnsembleModel load_model(const std::filesystem::path& path);
EnsembleModel read_model(std::istream& in);

inline constexpr int kModelFormatVersion = 1;

}  // namespace clickbait
