#pragma once

// The hand-crafted feature catalog: image, length, pairwise length, keyword
// overlap, dictionary, behavior and article-property families. Every feature
// is a finite real; -1 marks missing content.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "clickbait/corpus.hpp"
#include "clickbait/textstats.hpp"

namespace clickbait {

inline constexpr double kMissing = -1.0;

enum class FeatureFamily : int {
    image,
    char_count,
    char_diff,
    char_ratio,
    word_count,
    word_diff,
    word_ratio,
    keyword_overlap,
    formal_informal,
    behavior,
    article_property,
};

inline constexpr std::size_t kFeatureFamilyCount = 11;
std::string_view family_name(FeatureFamily f);

enum class CountMode { characters, words };

// The 21 unordered field pairs (i < j) in canonical order.
inline constexpr std::size_t kFieldPairCount = kContentFieldCount * (kContentFieldCount - 1) / 2;
const std::array<std::pair<ContentField, ContentField>, kFieldPairCount>& field_pairs();

// Fields compared against the article keywords (all but the keywords).
inline constexpr std::array<ContentField, 6> kOverlapFields = {
    ContentField::PostTitle,          ContentField::PostImageText,   ContentField::ArticleTitle,
    ContentField::ArticleDescription, ContentField::ArticleCaptions, ContentField::ArticleParagraphs,
};

class FeatureCatalog {
public:
    static const FeatureCatalog& instance();

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    FeatureFamily family(std::size_t i) const { return families_[i]; }
    std::size_t family_size(FeatureFamily f) const;
    std::optional<std::size_t> index_of(std::string_view name) const;

private:
    FeatureCatalog();
    std::vector<std::string> names_;
    std::vector<FeatureFamily> families_;
};

inline constexpr std::size_t kFeatureCount = 188;

struct FeatureVector {
    std::string instance_id;
    Eigen::VectorXd values;  // catalog order

    // Throws DomainError naming the key when it is not in the catalog.
    double at(std::string_view name) const;
};

int image_presence(const PostInstance& p);
int text_in_image(const PostInstance& p);

std::array<double, 7> char_count_features(const PostInstance& p);
std::array<double, 7> word_count_features(const PostInstance& p);
std::array<double, 21> pairwise_diff_features(const PostInstance& p, CountMode mode);
std::array<double, 21> pairwise_ratio_features(const PostInstance& p, CountMode mode);
std::array<double, 6> keyword_overlap_features(const PostInstance& p);
// Per field: formal count, informal count, formal ratio, informal ratio.
std::array<double, 28> formal_informal_features(const PostInstance& p, const WordList& dict);
// Per field: '@', '#', "rt" tokens, '?', ',', ':', ellipses; then creation
// hour and longevity in seconds.
std::array<double, 51> behavior_features(const PostInstance& p, std::optional<Timestamp> reference_time);
std::array<double, 3> article_property_features(const PostInstance& p);

// Counters used by behavior_features, exposed for tests.
std::size_t count_char(std::string_view text, char c);
std::size_t count_ellipses(std::string_view text);
std::size_t count_retweet_markers(std::string_view text);

FeatureVector extract_all(const PostInstance& p, const WordList& dict, std::optional<Timestamp> reference_time);

// Latest post timestamp in the dataset, if any post has one.
std::optional<Timestamp> default_reference_time(const Dataset& dataset);

}  // namespace clickbait
