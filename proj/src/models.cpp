#include "clickbait/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "clickbait/errors.hpp"
#include "clickbait/parallel.hpp"
#include "clickbait/random.hpp"
#include "json.hpp"

namespace clickbait {

namespace {

double sigmoid(double f) {
    if (f >= 0) return 1.0 / (1.0 + std::exp(-f));
    const double e = std::exp(f);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct NodeStats {
    double w = 0.0;  // sum of weights
    double s = 0.0;   // sum of weight * target
    double ss = 0.0;  // sum of weight * target^2
    long count = 0;   // samples, with bootstrap multiplicity

    void add(double weight, double target, long c) {
        w += weight;
        s += weight * target;
        ss += weight * target * target;
        count += c;
    }
    NodeStats operator-(const NodeStats& o) const { return {w - o.w, s - o.s, ss - o.ss, count - o.count}; }
    double impurity() const { return ss - score(); }
    double score() const { return w > 0 ? s * s / w : 0.0; }
    double mean() const { return w > 0 ? s / w : 0.0; }
};

// Training rows for one fit: the design matrix restricted to the model's
// features, with every column presorted once.
struct Presorted {
    const Eigen::MatrixXd& x;
    std::vector<std::vector<int>> order;

    explicit Presorted(const Eigen::MatrixXd& design) : x(design), order(static_cast<std::size_t>(design.cols())) {
        const auto n = static_cast<int>(design.rows());
        for (std::size_t f = 0; f < order.size(); ++f) {
            auto& o = order[f];
            o.resize(static_cast<std::size_t>(n));
            std::iota(o.begin(), o.end(), 0);
            const auto col = design.col(static_cast<Eigen::Index>(f));
            std::stable_sort(o.begin(), o.end(), [&](int a, int b) { return col[a] < col[b]; });
        }
    }
};

struct TreeParams {
    int max_depth = 3;
    int min_leaf = 1;
    double feature_fraction = 1.0;
};

// Level-wise exact greedy CART. Each split maximises
//   S_L^2/W_L + S_R^2/W_R - S^2/W
// over midpoints of consecutive distinct values; for 0/1 targets this is
// half the weighted Gini decrease, for real targets the squared-error
// decrease. Leaves hold the weighted target mean. Ties keep the lowest
// feature index, then the lowest threshold.
Tree grow_tree(const Presorted& data, const std::vector<double>& target, const std::vector<double>& weight,
               const std::vector<long>& multiplicity, const TreeParams& params, std::mt19937_64* rng) {
    const auto n = data.x.rows();
    const auto d = static_cast<std::size_t>(data.x.cols());

    struct Open {
        int node;
        NodeStats stats;
    };
    Tree tree;
    tree.nodes.emplace_back();
    std::vector<Open> open(1, Open{0, {}});
    std::vector<int> slot_of(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (multiplicity[k] == 0) continue;
        slot_of[k] = 0;
        open[0].stats.add(weight[k], target[k], multiplicity[k]);
    }

    const std::size_t tried = params.feature_fraction >= 1.0
                                  ? d
                                  : std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(params.feature_fraction * static_cast<double>(d))));

    for (int depth = 0; depth < params.max_depth && !open.empty(); ++depth) {
        const std::size_t m = open.size();
        std::vector<char> splittable(m, 0);
        bool any = false;
        for (std::size_t o = 0; o < m; ++o) {
            const auto& st = open[o].stats;
            splittable[o] = st.count >= 2L * params.min_leaf && st.impurity() > 1e-12 * std::max(st.ss, 1e-300);
            any = any || splittable[o];
        }
        if (!any) break;

        // Per-node feature masks, drawn in node order.
        std::vector<char> mask;
        if (tried < d) {
            mask.assign(m * d, 0);
            std::vector<std::size_t> perm(d);
            for (std::size_t o = 0; o < m; ++o) {
                if (!splittable[o]) continue;
                std::iota(perm.begin(), perm.end(), 0);
                for (std::size_t k = 0; k < tried; ++k) {
                    std::swap(perm[k], perm[k + uniform_index(*rng, d - k)]);
                    mask[o * d + perm[k]] = 1;
                }
            }
        }

        struct Best {
            double gain = -std::numeric_limits<double>::infinity();
            int feature = -1;
            double threshold = 0.0;
        };
        std::vector<Best> best(m);
        std::vector<NodeStats> left(m);
        std::vector<double> last(m);
        std::vector<char> seen(m);
        for (std::size_t f = 0; f < d; ++f) {
            std::fill(left.begin(), left.end(), NodeStats{});
            std::fill(seen.begin(), seen.end(), 0);
            const auto col = data.x.col(static_cast<Eigen::Index>(f));
            for (int row : data.order[f]) {
                const auto k = static_cast<std::size_t>(row);
                const int o = slot_of[k];
                if (o < 0) continue;
                const auto ou = static_cast<std::size_t>(o);
                if (!splittable[ou] || (!mask.empty() && !mask[ou * d + f])) continue;
                const double v = col[row];
                if (seen[ou] && v != last[ou]) {
                    const NodeStats& l = left[ou];
                    const NodeStats r = open[ou].stats - l;
                    if (l.count >= params.min_leaf && r.count >= params.min_leaf) {
                        const double gain = l.score() + r.score() - open[ou].stats.score();
                        if (gain > best[ou].gain) {
                            double thr = last[ou] + (v - last[ou]) / 2.0;
                            if (!(thr < v)) thr = last[ou];
                            best[ou] = {gain, static_cast<int>(f), thr};
                        }
                    }
                }
                left[ou].add(weight[k], target[k], multiplicity[k]);
                last[ou] = v;
                seen[ou] = 1;
            }
        }

        std::vector<Open> next;
        std::vector<int> child_slot(2 * m, -1);
        for (std::size_t o = 0; o < m; ++o) {
            auto& node = tree.nodes[static_cast<std::size_t>(open[o].node)];
            if (best[o].feature < 0) {
                node.value = open[o].stats.mean();
                continue;
            }
            const int l = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& parent = tree.nodes[static_cast<std::size_t>(open[o].node)];
            parent.feature = best[o].feature;
            parent.threshold = best[o].threshold;
            parent.left = l;
            parent.right = l + 1;
            child_slot[2 * o] = static_cast<int>(next.size());
            next.push_back({l, {}});
            child_slot[2 * o + 1] = static_cast<int>(next.size());
            next.push_back({l + 1, {}});
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const int o = slot_of[k];
            if (o < 0) continue;
            const auto& b = best[static_cast<std::size_t>(o)];
            if (b.feature < 0) {
                slot_of[k] = -1;
                continue;
            }
            const bool go_left = data.x(i, b.feature) <= b.threshold;
            const int c = child_slot[2 * static_cast<std::size_t>(o) + (go_left ? 0 : 1)];
            slot_of[k] = c;
            next[static_cast<std::size_t>(c)].stats.add(weight[k], target[k], multiplicity[k]);
        }
        open = std::move(next);
    }
    for (const auto& o : open) tree.nodes[static_cast<std::size_t>(o.node)].value = o.stats.mean();
    return tree;
}

double mean_logistic_loss(const std::vector<double>& f, const std::vector<double>& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) total += y[i] > 0.5 ? softplus(-f[i]) : softplus(f[i]);
    return total / static_cast<double>(f.size());
}

EnsembleModel fit_decision_tree(const Presorted& data, const std::vector<double>& y, const TrainConfig& c,
                                std::vector<std::string> features) {
    const std::vector<double> w(y.size(), 1.0);
    const std::vector<long> mult(y.size(), 1);
    Tree t = grow_tree(data, y, w, mult, {c.tree_depth_max, c.min_leaf, 1.0}, nullptr);
    return EnsembleModel(c, std::move(features), {WeightedTree{std::move(t), 1.0}}, 0.0, Link::identity);
}

EnsembleModel fit_random_forest(const Presorted& data, const std::vector<double>& y, const TrainConfig& c,
                                std::vector<std::string> features, unsigned threads) {
    const auto n = y.size();
    const std::vector<double> unit(n, 1.0);
    std::vector<WeightedTree> trees(static_cast<std::size_t>(c.n_trees));
    parallel_for(trees.size(), threads, [&](std::size_t t) {
        std::mt19937_64 rng(splitmix64(c.seed ^ splitmix64(t + 1)));
        std::vector<long> mult(n, 1);
        if (c.bootstrap) {
            std::fill(mult.begin(), mult.end(), 0);
            for (std::size_t k = 0; k < n; ++k) ++mult[uniform_index(rng, n)];
        }
        std::vector<double> w(mult.begin(), mult.end());
        trees[t] = WeightedTree{grow_tree(data, y, w, mult, {c.tree_depth_max, c.min_leaf, c.feature_fraction}, &rng),
                                1.0 / static_cast<double>(c.n_trees)};
    });
    return EnsembleModel(c, std::move(features), std::move(trees), 0.0, Link::identity);
}

EnsembleModel fit_adaboost(const Presorted& data, const std::vector<double>& y, const TrainConfig& c,
                           std::vector<std::string> features, TrainingTrace* trace) {
    constexpr double kTinyError = 1e-10;
    // Rounding in the weight sums can put a chance-level stump a hair under 0.5.
    constexpr double kChanceSlack = 1e-12;
    const auto n = y.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    const std::vector<long> mult(n, 1);
    std::vector<WeightedTree> trees;
    for (int round = 0; round < c.n_trees; ++round) {
        Tree t = grow_tree(data, y, w, mult, {c.tree_depth_max, c.min_leaf, 1.0}, nullptr);
        for (auto& node : t.nodes)
            if (node.is_leaf()) node.value = node.value >= 0.5 ? 1.0 : -1.0;

        std::vector<char> miss(n);
        double err = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool predicted_positive = t.evaluate(data.x.row(static_cast<Eigen::Index>(i))) > 0;
            miss[i] = predicted_positive != (y[i] > 0.5);
            total += w[i];
            if (miss[i]) err += w[i];
        }
        err /= total;
        if (trace) trace->weighted_error.push_back(err);
        if (err >= 0.5 - kChanceSlack) break;
        const double e = std::max(err, kTinyError);
        const double alpha = c.learning_rate * std::log((1.0 - e) / e);
        trees.push_back({std::move(t), alpha});
        if (err <= kTinyError) break;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (miss[i]) w[i] *= std::exp(alpha);
            sum += w[i];
        }
        for (auto& wi : w) wi /= sum;
    }
    return EnsembleModel(c, std::move(features), std::move(trees), 0.0, Link::logistic);
}

EnsembleModel fit_gradient_boosting(const Presorted& data, const std::vector<double>& y, const TrainConfig& c,
                                    std::vector<std::string> features, TrainingTrace* trace) {
    const auto n = y.size();
    const double prior = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    const double base = std::log(prior / (1.0 - prior));
    std::vector<double> f(n, base), residual(n);
    const std::vector<double> w(n, 1.0);
    const std::vector<long> mult(n, 1);
    if (trace) trace->loss.push_back(mean_logistic_loss(f, y));
    std::vector<WeightedTree> trees;
    trees.reserve(static_cast<std::size_t>(c.n_trees));
    for (int round = 0; round < c.n_trees; ++round) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - sigmoid(f[i]);
        Tree t = grow_tree(data, residual, w, mult, {c.tree_depth_max, c.min_leaf, 1.0}, nullptr);
        for (std::size_t i = 0; i < n; ++i) f[i] += c.learning_rate * t.evaluate(data.x.row(static_cast<Eigen::Index>(i)));
        if (trace) trace->loss.push_back(mean_logistic_loss(f, y));
        trees.push_back({std::move(t), c.learning_rate});
    }
    return EnsembleModel(c, std::move(features), std::move(trees), base, Link::logistic);
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::decision_tree: return "decision_tree";
        case Algorithm::random_forest: return "random_forest";
        case Algorithm::adaboost: return "adaboost";
        case Algorithm::gradient_boosting: return "gradient_boosting";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::decision_tree, Algorithm::random_forest, Algorithm::adaboost, Algorithm::gradient_boosting})
        if (algorithm_name(a) == name) return a;
    throw DomainError("unknown algorithm '" + std::string(name) + "'");
}

TrainConfig TrainConfig::defaults_for(Algorithm a) {
    TrainConfig c;
    c.algorithm = a;
    switch (a) {
        case Algorithm::decision_tree:
            c.n_trees = 1;
            c.tree_depth_max = 8;
            c.min_leaf = 5;
            break;
        case Algorithm::random_forest:
            c.n_trees = 200;
            c.tree_depth_max = 10;
            c.min_leaf = 2;
            c.feature_fraction = 0.3;
            c.bootstrap = true;
            break;
        case Algorithm::adaboost:
            c.n_trees = 200;
            c.tree_depth_max = 1;
            c.learning_rate = 1.0;
            c.min_leaf = 1;
            break;
        case Algorithm::gradient_boosting:
            c.n_trees = 200;
            c.tree_depth_max = 3;
            c.learning_rate = 0.1;
            c.min_leaf = 5;
            break;
    }
    return c;
}

void TrainConfig::validate() const {
    if (tree_depth_max < 1) throw DomainError("tree_depth_max must be >= 1");
    if (n_trees < 1) throw DomainError("n_trees must be >= 1");
    if (!(learning_rate > 0) || !std::isfinite(learning_rate)) throw DomainError("learning_rate must be > 0");
    if (min_leaf < 1) throw DomainError("min_leaf must be >= 1");
    if (!(feature_fraction > 0 && feature_fraction <= 1)) throw DomainError("feature_fraction must be in (0, 1]");
    if (feature_subset && feature_subset->empty()) throw DomainError("feature subset is empty");
}

std::string config_to_json(const TrainConfig& c) {
    nlohmann::ordered_json j;
    j["algorithm"] = algorithm_name(c.algorithm);
    j["features"] = c.feature_subset ? nlohmann::ordered_json(*c.feature_subset) : nlohmann::ordered_json("all");
    j["seed"] = c.seed;
    j["tree_depth_max"] = c.tree_depth_max;
    j["n_trees"] = c.n_trees;
    j["learning_rate"] = c.learning_rate;
    j["min_leaf"] = c.min_leaf;
    j["feature_fraction"] = c.feature_fraction;
    j["bootstrap"] = c.bootstrap;
    return j.dump();
}

TrainConfig config_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        TrainConfig c;
        c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        const auto& f = j.at("features");
        if (f.is_array()) c.feature_subset = f.get<std::vector<std::string>>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.tree_depth_max = j.at("tree_depth_max").get<int>();
        c.n_trees = j.at("n_trees").get<int>();
        c.learning_rate = j.at("learning_rate").get<double>();
        c.min_leaf = j.at("min_leaf").get<int>();
        c.feature_fraction = j.at("feature_fraction").get<double>();
        c.bootstrap = j.at("bootstrap").get<bool>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("train config: ") + e.what());
    }
}

int Tree::depth() const {
    if (nodes.empty()) return 0;
    std::vector<int> level(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

EnsembleModel::EnsembleModel(TrainConfig config, std::vector<std::string> features, std::vector<WeightedTree> trees,
                             double base_score, Link link)
    : config_(std::move(config)),
      features_(std::move(features)),
      trees_(std::move(trees)),
      base_score_(base_score),
      link_(link) {}

double EnsembleModel::finish(double raw) const {
    const double p = link_ == Link::logistic ? sigmoid(raw) : raw;
    if (std::isnan(p)) return 0.5;
    return std::clamp(p, 0.0, 1.0);
}

EnsembleModel train(const FeatureMatrix& matrix, const TrainConfig& config, const TrainOptions& options) {
    config.validate();
    const auto& labels = matrix.labels();
    if (matrix.rows() == 0) throw TrainingError("training matrix has no rows");
    const auto positives = labels.sum();
    if (positives == 0 || positives == labels.size()) throw TrainingError("training data contains a single class");

    std::vector<std::string> features = config.feature_subset ? *config.feature_subset : matrix.names();
    const auto columns = matrix.indices_of(features);
    Eigen::MatrixXd design(static_cast<Eigen::Index>(matrix.rows()), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) design.col(static_cast<Eigen::Index>(j)) = matrix.column(columns[j]);
    const Presorted data(design);
    std::vector<double> y(labels.size());
    for (Eigen::Index i = 0; i < labels.size(); ++i) y[static_cast<std::size_t>(i)] = labels[i];

    switch (config.algorithm) {
        case Algorithm::decision_tree: return fit_decision_tree(data, y, config, std::move(features));
        case Algorithm::random_forest: return fit_random_forest(data, y, config, std::move(features), options.threads);
        case Algorithm::adaboost: return fit_adaboost(data, y, config, std::move(features), options.trace);
        case Algorithm::gradient_boosting: return fit_gradient_boosting(data, y, config, std::move(features), options.trace);
    }
    throw DomainError("unknown algorithm");
}

double predict_proba(const EnsembleModel& model, const FeatureVector& vector) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(model.features().size()));
    for (std::size_t j = 0; j < model.features().size(); ++j) x[static_cast<Eigen::Index>(j)] = vector.at(model.features()[j]);
    return model.score(x);
}

Eigen::VectorXd predict_proba(const EnsembleModel& model, const FeatureMatrix& matrix) {
    const auto columns = matrix.indices_of(model.features());
    Eigen::MatrixXd design(static_cast<Eigen::Index>(matrix.rows()), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) design.col(static_cast<Eigen::Index>(j)) = matrix.column(columns[j]);
    Eigen::VectorXd out(design.rows());
    for (Eigen::Index i = 0; i < design.rows(); ++i) out[i] = model.score(design.row(i));
    return out;
}

void write_model(std::ostream& out, const EnsembleModel& model) {
    out << "clickbait-model " << kModelFormatVersion << '\n';
    out << "algorithm " << algorithm_name(model.algorithm()) << '\n';
    out << "link " << (model.link() == Link::logistic ? "logistic" : "identity") << '\n';
    out << "base_score " << format_double(model.base_score()) << '\n';
    out << "config " << config_to_json(model.config()) << '\n';
    out << "features " << model.features().size() << '\n';
    for (const auto& f : model.features()) out << f << '\n';
    out << "trees " << model.trees().size() << '\n';
    for (const auto& t : model.trees()) {
        out << "tree " << format_double(t.weight) << ' ' << t.tree.nodes.size() << '\n';
        for (const auto& n : t.tree.nodes)
            out << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
                << format_double(n.value) << '\n';
    }
    out << "end\n";
}

void save_model(const EnsembleModel& model, const std::filesystem::path& path) {
    if (path.empty()) throw IoError("empty model path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_model(out, model);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

class ModelReader {
public:
    explicit ModelReader(std::istream& in) : in_(in) {}

    std::string line() {
        std::string s;
        if (!std::getline(in_, s)) fail("unexpected end of file");
        ++line_no_;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        return s;
    }

    // "key value" line; returns the value.
    std::string keyed(std::string_view key) {
        const auto s = line();
        if (s.size() <= key.size() || s.compare(0, key.size(), key) != 0 || s[key.size()] != ' ')
            fail("expected '" + std::string(key) + "'");
        return s.substr(key.size() + 1);
    }

    template <typename T>
    T number(std::string_view text) {
        T v{};
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size()) fail("invalid number '" + std::string(text) + "'");
        return v;
    }

    std::vector<std::string_view> fields(std::string_view s) {
        std::vector<std::string_view> out;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const auto sp = s.find(' ', pos);
            out.push_back(s.substr(pos, sp == std::string_view::npos ? std::string_view::npos : sp - pos));
            if (sp == std::string_view::npos) break;
            pos = sp + 1;
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ModelLoadError("model line " + std::to_string(line_no_) + ": " + what);
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

}  // namespace

EnsembleModel read_model(std::istream& in) {
    ModelReader r(in);
    const auto version = r.number<int>(r.keyed("clickbait-model"));
    if (version != kModelFormatVersion)
        r.fail("unsupported model format version " + std::to_string(version) + " (expected " +
               std::to_string(kModelFormatVersion) + ")");
    const auto algorithm = r.keyed("algorithm");
    const auto link_text = r.keyed("link");
    if (link_text != "logistic" && link_text != "identity") r.fail("unknown link '" + link_text + "'");
    const auto base = r.number<double>(r.keyed("base_score"));
    TrainConfig config;
    try {
        config = config_from_json(r.keyed("config"));
    } catch (const Error& e) {
        r.fail(e.what());
    }
    if (algorithm_name(config.algorithm) != algorithm) r.fail("algorithm does not match config");

    const auto nfeatures = r.number<std::size_t>(r.keyed("features"));
    std::vector<std::string> features;
    for (std::size_t i = 0; i < nfeatures; ++i) features.push_back(r.line());
    const auto ntrees = r.number<std::size_t>(r.keyed("trees"));
    std::vector<WeightedTree> trees;
    for (std::size_t t = 0; t < ntrees; ++t) {
        const auto head_line = r.keyed("tree");
        const auto head = r.fields(head_line);
        if (head.size() != 2) r.fail("malformed tree header");
        WeightedTree wt;
        wt.weight = r.number<double>(head[0]);
        const auto nnodes = r.number<std::size_t>(head[1]);
        if (nnodes == 0) r.fail("tree without nodes");
        for (std::size_t k = 0; k < nnodes; ++k) {
            const auto node_line = r.line();
            const auto f = r.fields(node_line);
            if (f.size() != 5) r.fail("malformed tree node");
            TreeNode n{r.number<int>(f[0]), r.number<double>(f[1]), r.number<int>(f[2]), r.number<int>(f[3]),
                       r.number<double>(f[4])};
            if (!n.is_leaf()) {
                const auto nn = static_cast<int>(nnodes);
                if (n.feature >= static_cast<int>(nfeatures) || n.left <= static_cast<int>(k) || n.right <= static_cast<int>(k) ||
                    n.left >= nn || n.right >= nn)
                    r.fail("tree node references out of range");
            }
            wt.tree.nodes.push_back(n);
        }
        trees.push_back(std::move(wt));
    }
    if (r.line() != "end") r.fail("missing end marker");
    return EnsembleModel(std::move(config), std::move(features), std::move(trees), base,
                         link_text == "logistic" ? Link::logistic : Link::identity);
}

EnsembleModel load_model(const std::filesystem::path& path) {
    if (path.empty()) throw IoError("empty model path");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model '" + path.string() + "'");
    return read_model(in);
}

}  // namespace clickbait
