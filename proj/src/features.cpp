#include "clickbait/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "clickbait/errors.hpp"

namespace clickbait {

namespace {

constexpr std::array<std::string_view, 7> kBehaviorCounters = {
    "num_at_signs", "num_hashtags", "num_retweets", "num_question_marks", "num_commas", "num_colons", "num_ellipses",
};

constexpr std::array<std::string_view, 4> kDictionaryFeatures = {
    "num_formal_words", "num_informal_words", "pct_formal_words", "pct_informal_words",
};

// Per-field measurements shared by several families.
struct FieldStats {
    ContentValue value;
    double chars = kMissing;
    double words = kMissing;
    WordSet word_set;
};

struct PostStats {
    std::array<FieldStats, kContentFieldCount> fields;

    explicit PostStats(const PostInstance& p, bool with_word_sets) {
        for (auto f : kContentFields) {
            auto& s = fields[static_cast<std::size_t>(f)];
            s.value = content(p, f);
            s.chars = len_characters(s.value);
            s.words = len_words(s.value);
            if (with_word_sets) s.word_set = words(s.value);
        }
    }
    const FieldStats& operator[](ContentField f) const { return fields[static_cast<std::size_t>(f)]; }
};

double count_of(const FieldStats& s, CountMode mode) { return mode == CountMode::characters ? s.chars : s.words; }

std::array<double, 7> counts(const PostStats& ps, CountMode mode) {
    std::array<double, 7> out{};
    for (std::size_t i = 0; i < kContentFieldCount; ++i) out[i] = count_of(ps.fields[i], mode);
    return out;
}

std::array<double, 21> diffs(const PostStats& ps, CountMode mode) {
    std::array<double, 21> out{};
    const auto& pairs = field_pairs();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double x = count_of(ps[pairs[k].first], mode);
        const double y = count_of(ps[pairs[k].second], mode);
        out[k] = (x < 0 || y < 0) ? kMissing : std::abs(x - y);
    }
    return out;
}

std::array<double, 21> ratios(const PostStats& ps, CountMode mode) {
    std::array<double, 21> out{};
    const auto& pairs = field_pairs();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double x = count_of(ps[pairs[k].first], mode);
        const double y = count_of(ps[pairs[k].second], mode);
        out[k] = (x < 0 || y <= 0) ? kMissing : x / y;
    }
    return out;
}

std::array<double, 6> overlaps(const PostStats& ps) {
    std::array<double, 6> out{};
    const auto& keywords = ps[ContentField::ArticleKeywords];
    for (std::size_t k = 0; k < kOverlapFields.size(); ++k) {
        const auto& field = ps[kOverlapFields[k]];
        if (!keywords.value.present() || !field.value.present()) {
            out[k] = kMissing;
            continue;
        }
        std::size_t common = 0;
        for (const auto& w : keywords.word_set) common += field.word_set.contains(w) ? 1 : 0;
        out[k] = static_cast<double>(common);
    }
    return out;
}

std::array<double, 28> dictionary(const PostStats& ps, const WordList& dict) {
    std::array<double, 28> out{};
    for (std::size_t i = 0; i < kContentFieldCount; ++i) {
        const auto& ws = ps.fields[i].word_set;
        double* slot = &out[4 * i];
        if (!ps.fields[i].value.present() || ws.empty()) {
            std::fill(slot, slot + 4, kMissing);
            continue;
        }
        const auto formal = static_cast<double>(formal_words(ws, dict).size());
        const auto total = static_cast<double>(ws.size());
        const double informal = total - formal;
        slot[0] = formal;
        slot[1] = informal;
        slot[2] = formal / total;
        slot[3] = informal / total;
    }
    return out;
}

std::array<double, 51> behavior(const PostInstance& p, const PostStats& ps, std::optional<Timestamp> reference_time) {
    std::array<double, 51> out{};
    for (std::size_t i = 0; i < kContentFieldCount; ++i) {
        const auto& v = ps.fields[i].value;
        double* slot = &out[7 * i];
        if (v.empty_content()) {
            std::fill(slot, slot + 7, kMissing);
            continue;
        }
        std::array<std::size_t, 7> c{};
        v.for_each_text([&](std::string_view s) {
            c[0] += count_char(s, '@');
            c[1] += count_char(s, '#');
            c[2] += count_retweet_markers(s);
            c[3] += count_char(s, '?');
            c[4] += count_char(s, ',');
            c[5] += count_char(s, ':');
            c[6] += count_ellipses(s);
        });
        for (std::size_t k = 0; k < 7; ++k) slot[k] = static_cast<double>(c[k]);
    }
    if (p.post_timestamp) {
        using namespace std::chrono;
        const auto t = *p.post_timestamp;
        out[49] = static_cast<double>(duration_cast<hours>(t - floor<days>(t)).count());
        out[50] = reference_time ? static_cast<double>((*reference_time - t).count()) : kMissing;
    } else {
        out[49] = kMissing;
        out[50] = kMissing;
    }
    return out;
}

double list_size(const std::optional<std::vector<std::string>>& l) {
    return l ? static_cast<double>(l->size()) : kMissing;
}

}  // namespace

std::string_view family_name(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::image: return "image";
        case FeatureFamily::char_count: return "char_count";
        case FeatureFamily::char_diff: return "char_diff";
        case FeatureFamily::char_ratio: return "char_ratio";
        case FeatureFamily::word_count: return "word_count";
        case FeatureFamily::word_diff: return "word_diff";
        case FeatureFamily::word_ratio: return "word_ratio";
        case FeatureFamily::keyword_overlap: return "keyword_overlap";
        case FeatureFamily::formal_informal: return "formal_informal";
        case FeatureFamily::behavior: return "behavior";
        case FeatureFamily::article_property: return "article_property";
    }
    return "unknown";
}

const std::array<std::pair<ContentField, ContentField>, kFieldPairCount>& field_pairs() {
    static const auto pairs = [] {
        std::array<std::pair<ContentField, ContentField>, kFieldPairCount> out{};
        std::size_t k = 0;
        for (std::size_t i = 0; i < kContentFieldCount; ++i)
            for (std::size_t j = i + 1; j < kContentFieldCount; ++j) out[k++] = {kContentFields[i], kContentFields[j]};
        return out;
    }();
    return pairs;
}

const FeatureCatalog& FeatureCatalog::instance() {
    static const FeatureCatalog catalog;
    return catalog;
}

FeatureCatalog::FeatureCatalog() {
    const auto add = [this](std::string name, FeatureFamily family) {
        names_.push_back(std::move(name));
        families_.push_back(family);
    };
    const auto slug = [](ContentField f) { return std::string(field_slug(f)); };
    const auto pair_name = [&](std::string_view stem, const std::pair<ContentField, ContentField>& p) {
        return std::string(stem) + "__" + slug(p.first) + "__" + slug(p.second);
    };

    add("image_presence", FeatureFamily::image);
    add("text_in_image", FeatureFamily::image);
    for (auto f : kContentFields) add("num_chars_" + slug(f), FeatureFamily::char_count);
    for (const auto& p : field_pairs()) add(pair_name("diff_num_chars", p), FeatureFamily::char_diff);
    for (const auto& p : field_pairs()) add(pair_name("ratio_num_chars", p), FeatureFamily::char_ratio);
    for (auto f : kContentFields) add("num_words_" + slug(f), FeatureFamily::word_count);
    for (const auto& p : field_pairs()) add(pair_name("diff_num_words", p), FeatureFamily::word_diff);
    for (const auto& p : field_pairs()) add(pair_name("ratio_num_words", p), FeatureFamily::word_ratio);
    for (auto f : kOverlapFields) add("common_keywords_" + slug(f), FeatureFamily::keyword_overlap);
    for (auto f : kContentFields)
        for (auto stem : kDictionaryFeatures) add(std::string(stem) + "_" + slug(f), FeatureFamily::formal_informal);
    for (auto f : kContentFields)
        for (auto stem : kBehaviorCounters) add(std::string(stem) + "_" + slug(f), FeatureFamily::behavior);
    add("post_creation_hour", FeatureFamily::behavior);
    add("post_longevity", FeatureFamily::behavior);
    add("num_article_keywords", FeatureFamily::article_property);
    add("num_article_paragraphs", FeatureFamily::article_property);
    add("num_article_captions", FeatureFamily::article_property);
}

std::size_t FeatureCatalog::family_size(FeatureFamily f) const {
    return static_cast<std::size_t>(std::count(families_.begin(), families_.end(), f));
}

std::optional<std::size_t> FeatureCatalog::index_of(std::string_view name) const {
    static const auto index = [this] {
        std::unordered_map<std::string_view, std::size_t> m;
        for (std::size_t i = 0; i < names_.size(); ++i) m.emplace(names_[i], i);
        return m;
    }();
    const auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

double FeatureVector::at(std::string_view name) const {
    const auto i = FeatureCatalog::instance().index_of(name);
    if (!i || static_cast<Eigen::Index>(*i) >= values.size())
        throw DomainError("feature vector has no feature '" + std::string(name) + "'");
    return values[static_cast<Eigen::Index>(*i)];
}

int image_presence(const PostInstance& p) { return p.image_ref ? 1 : 0; }

int text_in_image(const PostInstance& p) {
    if (!p.image_ref || !p.image_text) return 0;
    return p.image_text->find_first_not_of(" \t\r\n\f\v") != std::string::npos ? 1 : 0;
}

std::array<double, 7> char_count_features(const PostInstance& p) {
    return counts(PostStats(p, false), CountMode::characters);
}

std::array<double, 7> word_count_features(const PostInstance& p) {
    return counts(PostStats(p, false), CountMode::words);
}

std::array<double, 21> pairwise_diff_features(const PostInstance& p, CountMode mode) {
    return diffs(PostStats(p, false), mode);
}

std::array<double, 21> pairwise_ratio_features(const PostInstance& p, CountMode mode) {
    return ratios(PostStats(p, false), mode);
}

std::array<double, 6> keyword_overlap_features(const PostInstance& p) { return overlaps(PostStats(p, true)); }

std::array<double, 28> formal_informal_features(const PostInstance& p, const WordList& dict) {
    return dictionary(PostStats(p, true), dict);
}

std::array<double, 51> behavior_features(const PostInstance& p, std::optional<Timestamp> reference_time) {
    return behavior(p, PostStats(p, false), reference_time);
}

std::array<double, 3> article_property_features(const PostInstance& p) {
    return {list_size(p.article_keywords), list_size(p.article_paragraphs), list_size(p.article_captions)};
}

std::size_t count_char(std::string_view text, char c) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), c));
}

std::size_t count_ellipses(std::string_view text) {
    static constexpr std::string_view kHorizontalEllipsis = "\xE2\x80\xA6";
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (text.compare(i, 3, "...") == 0 || text.compare(i, 3, kHorizontalEllipsis) == 0) {
            ++n;
            i += 3;
        } else {
            ++i;
        }
    }
    return n;
}

std::size_t count_retweet_markers(std::string_view text) {
    const auto tokens = tokenize(text);
    return static_cast<std::size_t>(std::count(tokens.begin(), tokens.end(), "rt"));
}

FeatureVector extract_all(const PostInstance& p, const WordList& dict, std::optional<Timestamp> reference_time) {
    const PostStats ps(p, true);
    FeatureVector fv;
    fv.instance_id = p.id;
    fv.values.resize(static_cast<Eigen::Index>(kFeatureCount));
    Eigen::Index k = 0;
    const auto put = [&](const auto& block) {
        for (double v : block) fv.values[k++] = v;
    };
    put(std::array<double, 2>{static_cast<double>(image_presence(p)), static_cast<double>(text_in_image(p))});
    put(counts(ps, CountMode::characters));
    put(diffs(ps, CountMode::characters));
    put(ratios(ps, CountMode::characters));
    put(counts(ps, CountMode::words));
    put(diffs(ps, CountMode::words));
    put(ratios(ps, CountMode::words));
    put(overlaps(ps));
    put(dictionary(ps, dict));
    put(behavior(p, ps, reference_time));
    put(article_property_features(p));
    return fv;
}

std::optional<Timestamp> default_reference_time(const Dataset& dataset) {
    std::optional<Timestamp> latest;
    for (const auto& p : dataset.instances)
        if (p.post_timestamp && (!latest || *p.post_timestamp > *latest)) latest = p.post_timestamp;
    return latest;
}

}  // namespace clickbait
