#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "clickbait/corpus.hpp"
#include "clickbait/features.hpp"

namespace clickbait {

// Dense instance-by-feature matrix. Column-major storage keeps each feature
// contiguous for gain computation and split search.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    // Throws DomainError on shape mismatch, duplicate names or non-finite values.
    FeatureMatrix(std::vector<std::string> names, std::vector<std::string> ids, Eigen::MatrixXd values,
                  std::optional<Eigen::VectorXi> labels = std::nullopt);

    std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const Eigen::MatrixXd& values() const { return values_; }
    bool labeled() const { return labels_.has_value(); }
    // Throws DomainError when unlabeled.
    const Eigen::VectorXi& labels() const;

    std::optional<std::size_t> index_of(std::string_view name) const;
    // Throws DomainError naming the first unknown feature.
    std::vector<std::size_t> indices_of(const std::vector<std::string>& names) const;
    auto column(std::size_t j) const { return values_.col(static_cast<Eigen::Index>(j)); }

    FeatureMatrix select_rows(const std::vector<std::size_t>& rows) const;
    FeatureMatrix select_columns(const std::vector<std::string>& names) const;

private:
    std::vector<std::string> names_;
    std::vector<std::string> ids_;
    Eigen::MatrixXd values_;
    std::optional<Eigen::VectorXi> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct ExtractOptions {
    std::optional<Timestamp> reference_time;  // default: latest post timestamp
    unsigned threads = 1;
};

// Runs extract_all over every instance; rows follow dataset order.
FeatureMatrix extract_matrix(const Dataset& dataset, const WordList& dict, const ExtractOptions& options = {});

// Comma-separated: optional '#' comment lines (written from `comments`),
// header "id[,label],<feature names>", one row per instance.
void write_matrix_csv(std::ostream& out, const FeatureMatrix& m, const std::vector<std::string>& comments = {});
FeatureMatrix read_matrix_csv(std::istream& in);
FeatureMatrix load_matrix_csv(const std::filesystem::path& path);

// One JSON object per instance: {"id", ["label"], "features": {name: value}}.
void write_matrix_jsonl(std::ostream& out, const FeatureMatrix& m);

// Shortest round-trip decimal text for a double.
std::string format_double(double v);

}  // namespace clickbait
