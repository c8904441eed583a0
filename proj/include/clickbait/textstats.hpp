#pragma once

// Base content functions: lengths, tokens, word sets and dictionary
// (formal / informal) classification over the seven content fields.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "clickbait/corpus.hpp"

namespace clickbait {

enum class ContentField : int {
    PostTitle = 0,
    PostImageText,
    ArticleTitle,
    ArticleDescription,
    ArticleKeywords,
    ArticleCaptions,
    ArticleParagraphs,
};

inline constexpr std::size_t kContentFieldCount = 7;

inline constexpr std::array<ContentField, kContentFieldCount> kContentFields = {
    ContentField::PostTitle,          ContentField::PostImageText,   ContentField::ArticleTitle,
    ContentField::ArticleDescription, ContentField::ArticleKeywords, ContentField::ArticleCaptions,
    ContentField::ArticleParagraphs,
};

// snake_case name used inside feature names, e.g. "post_title".
std::string_view field_slug(ContentField f);

// Non-owning view of one content field of a post.
class ContentValue {
public:
    enum class Kind { absent, scalar, list };

    static ContentValue absent() { return ContentValue{}; }
    static ContentValue text(std::string_view s) {
        ContentValue v;
        v.kind_ = Kind::scalar;
        v.text_ = s;
        return v;
    }
    static ContentValue list(std::span<const std::string> items) {
        ContentValue v;
        v.kind_ = Kind::list;
        v.items_ = items;
        return v;
    }

    Kind kind() const { return kind_; }
    bool present() const { return kind_ != Kind::absent; }
    std::string_view scalar() const { return text_; }
    std::span<const std::string> items() const { return items_; }

    // Absent, or a list with no items.
    bool empty_content() const { return kind_ == Kind::absent || (kind_ == Kind::list && items_.empty()); }

    template <typename Fn>
    void for_each_text(Fn&& fn) const {
        if (kind_ == Kind::scalar) {
            fn(text_);
        } else if (kind_ == Kind::list) {
            for (const auto& s : items_) fn(std::string_view(s));
        }
    }

private:
    Kind kind_ = Kind::absent;
    std::string_view text_;
    std::span<const std::string> items_;
};

// The field's value; views into `p`, which must outlive the result.
ContentValue content(const PostInstance& p, ContentField f);

using WordSet = std::set<std::string, std::less<>>;

class WordList {
public:
    // Entries are lowercased; throws ValidationError when empty or when an
    // entry contains whitespace.
    WordList(std::vector<std::string> entries, std::string source_name);

    // UTF-8, one word per line, '#' lines ignored.
    static WordList load(const std::filesystem::path& path);
    static WordList parse(std::istream& in, std::string source_name);

    bool contains(std::string_view word) const { return entries_.contains(std::string(word)); }
    std::size_t size() const { return entries_.size(); }
    const std::string& source_name() const { return source_name_; }

private:
    std::unordered_set<std::string> entries_;
    std::string source_name_;
};

// -1 when absent (or an empty list); codepoint count for text; mean per-item
// count for lists.
double len_characters(const ContentValue& v);
// As len_characters, counting tokens.
double len_words(const ContentValue& v);

// Whitespace split, edge punctuation stripped (a leading '#' or '@' is
// kept), lowercased, empties dropped.
std::vector<std::string> tokenize(std::string_view text);

WordSet words(const ContentValue& v);

WordSet formal_words(const WordSet& tokens, const WordList& dict);
WordSet informal_words(const WordSet& tokens, const WordList& dict);

// UTF-8 helpers shared with the feature extractor.
std::size_t codepoint_count(std::string_view utf8);
std::string to_lower(std::string_view utf8);

}  // namespace clickbait
