#pragma once

// Post/article corpora: line-delimited JSON instances and truth files,
// mapped onto PostInstance through a configurable key schema.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clickbait {

using Timestamp = std::chrono::sys_seconds;

struct PostInstance {
    std::string id;
    std::optional<std::string> post_title;
    std::optional<Timestamp> post_timestamp;
    std::optional<std::string> image_ref;
    std::optional<std::string> image_text;  // pre-extracted OCR text
    std::optional<std::string> article_title;
    std::optional<std::string> article_description;
    std::optional<std::vector<std::string>> article_keywords;
    std::optional<std::vector<std::string>> article_paragraphs;
    std::optional<std::vector<std::string>> article_captions;

    bool operator==(const PostInstance&) const = default;
};

enum class Label : int { legitimate = 0, clickbait = 1 };

struct TruthLabel {
    std::string id;
    Label label = Label::legitimate;

    bool operator==(const TruthLabel&) const = default;
};

struct Dataset {
    std::vector<PostInstance> instances;
    std::optional<std::vector<TruthLabel>> labels;  // aligned with instances when present

    bool labeled() const { return labels.has_value(); }
    std::size_t size() const { return instances.size(); }
    std::size_t count(Label l) const;
};

// Record keys for each PostInstance field. Defaults follow the
// Clickbait Challenge 2017 layout.
struct Schema {
    std::string id = "id";
    std::string post_title = "postText";
    std::string post_timestamp = "postTimestamp";
    std::string image_ref = "postMedia";
    std::string image_text = "postImageText";  // inline OCR text; sidecar used otherwise
    std::string article_title = "targetTitle";
    std::string article_description = "targetDescription";
    std::string article_keywords = "targetKeywords";
    std::string article_paragraphs = "targetParagraphs";
    std::string article_captions = "targetCaptions";

    std::string truth_id = "id";
    std::string truth_class = "truthClass";
    std::string positive_class = "clickbait";
    std::string negative_class = "no-clickbait";

    bool operator==(const Schema&) const = default;
};

// Reads `key = value` lines ('#' comments, blank lines ignored). Keys are the
// Schema member names; unknown keys are a ParseError.
Schema load_schema(const std::filesystem::path& path);
Schema parse_schema(std::istream& in);

// One PostInstance per non-blank line, in file order. Sidecar OCR text is
// read from `<dir of path>/<image_ref>.txt` when the record carries none inline.
Dataset load_instances(const std::filesystem::path& path, const Schema& schema = {});
Dataset parse_instances(std::istream& in, const Schema& schema = {},
                        const std::filesystem::path& media_root = {});

std::vector<TruthLabel> load_truth(const std::filesystem::path& path, const Schema& schema = {});
std::vector<TruthLabel> parse_truth(std::istream& in, const Schema& schema = {});

// Aligns labels with instances; label order is irrelevant.
Dataset join(const Dataset& dataset, const std::vector<TruthLabel>& labels);

// Canonical dump in the same line-delimited form. Keywords are written as
// an array, image text inline, timestamps in ISO-8601.
void write_instances(std::ostream& out, const Dataset& dataset, const Schema& schema = {});
void write_truth(std::ostream& out, const std::vector<TruthLabel>& labels, const Schema& schema = {});

// Accepts "Tue Jun 09 16:31:10 +0000 2015" and ISO-8601
// ("2015-06-09T16:31:10Z", optional fraction and +hh:mm offset).
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

// Splits on commas, trims ASCII whitespace, drops empty pieces.
std::vector<std::string> split_keywords(std::string_view text);

}  // namespace clickbait
