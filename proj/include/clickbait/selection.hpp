#pragma once

// Information-gain feature ranking over a discretized feature matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clickbait/errors.hpp"
#include "clickbait/features.hpp"
#include "clickbait/matrix.hpp"

namespace clickbait {

inline constexpr int kDefaultBins = 10;

// Binary Shannon entropy in bits. `labels` holds 0/1 values.
template <typename Derived>
double entropy(const Eigen::DenseBase<Derived>& labels) {
    const auto n = labels.size();
    if (n == 0) throw DomainError("entropy of an empty label vector");
    const auto positives = (labels.derived().array() != 0).count();
    double h = 0.0;
    for (const auto c : {positives, n - positives}) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        h -= p * std::log2(p);
    }
    return h;
}

// Bin index per value. With bins > 1 the -1 sentinel gets bin 0 and the
// remaining values are split at equal-frequency cut points
// sorted[floor(b*m/bins)], b = 1..bins-1 (duplicates merged), into bins
// 1..; a value equal to a cut point goes to the upper side. bins == 1
// puts everything, sentinel included, in one bin.
template <typename Derived>
std::vector<int> discretize(const Eigen::DenseBase<Derived>& column, int bins) {
    if (bins < 1) throw DomainError("bins must be >= 1");
    const auto n = static_cast<std::size_t>(column.size());
    std::vector<int> out(n, 0);
    if (bins == 1) return out;
    std::vector<double> sorted;
    sorted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = column.derived().coeff(static_cast<Eigen::Index>(i));
        if (v != kMissing) sorted.push_back(v);
    }
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    std::vector<double> cuts;
    if (m > 0) {
        for (int b = 1; b < bins; ++b) cuts.push_back(sorted[static_cast<std::size_t>(b) * m / static_cast<std::size_t>(bins)]);
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double v = column.derived().coeff(static_cast<Eigen::Index>(i));
        if (v == kMissing) continue;
        out[i] = 1 + static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
    }
    return out;
}

template <typename DerivedC, typename DerivedL>
double information_gain(const Eigen::DenseBase<DerivedC>& column, const Eigen::DenseBase<DerivedL>& labels,
                        int bins = kDefaultBins) {
    const auto n = column.size();
    if (n != labels.size()) throw DomainError("information_gain: column and label lengths differ");
    if (n == 0) throw DomainError("information_gain: empty column");
    const double h = entropy(labels);
    const auto bin = discretize(column, bins);
    const int nbins = 1 + *std::max_element(bin.begin(), bin.end());
    std::vector<Eigen::Index> total(static_cast<std::size_t>(nbins), 0), positive(static_cast<std::size_t>(nbins), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto b = static_cast<std::size_t>(bin[static_cast<std::size_t>(i)]);
        ++total[b];
        if (labels.derived().coeff(i) != 0) ++positive[b];
    }
    double conditional = 0.0;
    for (std::size_t b = 0; b < total.size(); ++b) {
        if (total[b] == 0) continue;
        double hb = 0.0;
        for (const auto c : {positive[b], total[b] - positive[b]}) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / static_cast<double>(total[b]);
            hb -= p * std::log2(p);
        }
        conditional += static_cast<double>(total[b]) / static_cast<double>(n) * hb;
    }
    return std::clamp(h - conditional, 0.0, h);
}

struct GainEntry {
    std::string name;
    double gain = 0.0;
};

// Descending by gain; equal gains follow catalog order, then unknown names
// alphabetically.
struct GainRanking {
    std::vector<GainEntry> entries;
};

GainRanking rank_features(const FeatureMatrix& matrix, int bins = kDefaultBins, unsigned threads = 1);

// First k names; DomainError unless 1 <= k <= size.
std::vector<std::string> top_k(const GainRanking& ranking, std::size_t k);

// "feature<TAB>info_gain" table, gains to 6 decimals, '#' comment preamble.
void write_ranking(std::ostream& out, const GainRanking& ranking, const std::vector<std::string>& comments = {});
GainRanking read_ranking(std::istream& in);

// One feature name per line, '#' comments ignored.
void write_feature_list(std::ostream& out, const std::vector<std::string>& names);
std::vector<std::string> read_feature_list(const std::filesystem::path& path);

}  // namespace clickbait
