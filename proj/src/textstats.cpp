#include "clickbait/textstats.hpp"

#include <fstream>
#include <istream>

#include "clickbait/errors.hpp"

namespace clickbait {

namespace {

struct Decoded {
    char32_t cp;
    std::size_t length;  // bytes consumed
};

constexpr char32_t kReplacement = 0xFFFD;

// Invalid or truncated sequences decode as one U+FFFD per byte.
Decoded decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
        return {kReplacement, 1};
    }
    if (i + len > s.size()) return {kReplacement, 1};
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return {kReplacement, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {kReplacement, 1};
    return {cp, len};
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_space(char32_t c) {
    return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
           (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
           c == 0x3000;
}

bool is_punct(char32_t c) {
    if (c < 0x80) {
        return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
               (c >= 0x7B && c <= 0x7E);
    }
    return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 || c == 0xBB || c == 0xBF ||
           (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003) ||
           (c >= 0x3008 && c <= 0x3011) || (c >= 0xFF01 && c <= 0xFF0F) || c == kReplacement;
}

// Simple one-to-one case folding for Latin, Greek and Cyrillic.
char32_t lower(char32_t c) {
    if (c >= 'A' && c <= 'Z') return c + 32;
    if (c < 0xC0) return c;
    if (c <= 0xDE) return c == 0xD7 ? c : c + 32;
    if (c >= 0x100 && c <= 0x137) return c % 2 == 0 ? c + 1 : c;
    if (c >= 0x139 && c <= 0x148) return c % 2 == 1 ? c + 1 : c;
    if (c >= 0x14A && c <= 0x177) return c % 2 == 0 ? c + 1 : c;
    if (c == 0x178) return 0xFF;
    if (c >= 0x179 && c <= 0x17E) return c % 2 == 1 ? c + 1 : c;
    if (c == 0x386) return 0x3AC;
    if (c >= 0x388 && c <= 0x38A) return c + 37;
    if (c == 0x38C) return 0x3CC;
    if (c == 0x38E || c == 0x38F) return c + 63;
    if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
    if (c >= 0x400 && c <= 0x40F) return c + 80;
    if (c >= 0x410 && c <= 0x42F) return c + 32;
    return c;
}

double count_or_sentinel(const ContentValue& v, std::size_t (*measure)(std::string_view)) {
    switch (v.kind()) {
        case ContentValue::Kind::absent:
            return -1.0;
        case ContentValue::Kind::scalar:
            return static_cast<double>(measure(v.scalar()));
        case ContentValue::Kind::list: {
            if (v.items().empty()) return -1.0;
            double total = 0.0;
            for (const auto& item : v.items()) total += static_cast<double>(measure(item));
            return total / static_cast<double>(v.items().size());
        }
    }
    return -1.0;
}

std::size_t token_count(std::string_view s) { return tokenize(s).size(); }

std::string_view strip_tag_prefix(std::string_view token) {
    while (!token.empty() && (token.front() == '#' || token.front() == '@')) token.remove_prefix(1);
    return token;
}

}  // namespace

std::string_view field_slug(ContentField f) {
    switch (f) {
        case ContentField::PostTitle: return "post_title";
        case ContentField::PostImageText: return "post_image_text";
        case ContentField::ArticleTitle: return "article_title";
        case ContentField::ArticleDescription: return "article_description";
        case ContentField::ArticleKeywords: return "article_keywords";
        case ContentField::ArticleCaptions: return "article_captions";
        case ContentField::ArticleParagraphs: return "article_paragraphs";
    }
    return "unknown";
}

ContentValue content(const PostInstance& p, ContentField f) {
    const auto scalar = [](const std::optional<std::string>& s) {
        return s ? ContentValue::text(*s) : ContentValue::absent();
    };
    const auto list = [](const std::optional<std::vector<std::string>>& l) {
        return l ? ContentValue::list(*l) : ContentValue::absent();
    };
    switch (f) {
        case ContentField::PostTitle: return scalar(p.post_title);
        case ContentField::PostImageText: return scalar(p.image_text);
        case ContentField::ArticleTitle: return scalar(p.article_title);
        case ContentField::ArticleDescription: return scalar(p.article_description);
        case ContentField::ArticleKeywords: return list(p.article_keywords);
        case ContentField::ArticleCaptions: return list(p.article_captions);
        case ContentField::ArticleParagraphs: return list(p.article_paragraphs);
    }
    return ContentValue::absent();
}

std::size_t codepoint_count(std::string_view utf8) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < utf8.size(); i += decode(utf8, i).length) ++n;
    return n;
}

std::string to_lower(std::string_view utf8) {
    std::string out;
    out.reserve(utf8.size());
    for (std::size_t i = 0; i < utf8.size();) {
        const auto d = decode(utf8, i);
        if (d.cp == kReplacement && d.length == 1 && static_cast<unsigned char>(utf8[i]) >= 0x80) {
            out += utf8[i];  // keep invalid bytes verbatim
        } else {
            encode(lower(d.cp), out);
        }
        i += d.length;
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::vector<Decoded> cps;
    std::size_t i = 0;
    while (i < text.size()) {
        // Skip whitespace.
        Decoded d = decode(text, i);
        if (is_space(d.cp)) {
            i += d.length;
            continue;
        }
        cps.clear();
        const std::size_t start = i;
        while (i < text.size()) {
            d = decode(text, i);
            if (is_space(d.cp)) break;
            cps.push_back(d);
            i += d.length;
        }
        std::size_t lo = 0, hi = cps.size();
        std::size_t lo_bytes = 0, hi_bytes = i - start;
        while (hi > lo && is_punct(cps[hi - 1].cp)) hi_bytes -= cps[--hi].length;
        while (lo < hi && is_punct(cps[lo].cp) && cps[lo].cp != '#' && cps[lo].cp != '@')
            lo_bytes += cps[lo++].length;
        if (lo == hi) continue;
        tokens.push_back(to_lower(text.substr(start + lo_bytes, hi_bytes - lo_bytes)));
    }
    return tokens;
}

double len_characters(const ContentValue& v) { return count_or_sentinel(v, &codepoint_count); }

double len_words(const ContentValue& v) { return count_or_sentinel(v, &token_count); }

WordSet words(const ContentValue& v) {
    WordSet out;
    v.for_each_text([&](std::string_view s) {
        for (auto& t : tokenize(s)) out.insert(std::move(t));
    });
    return out;
}

WordSet formal_words(const WordSet& tokens, const WordList& dict) {
    WordSet out;
    for (const auto& t : tokens) {
        const auto bare = strip_tag_prefix(t);
        if (!bare.empty() && dict.contains(bare)) out.insert(t);
    }
    return out;
}

WordSet informal_words(const WordSet& tokens, const WordList& dict) {
    WordSet out;
    for (const auto& t : tokens) {
        const auto bare = strip_tag_prefix(t);
        if (bare.empty() || !dict.contains(bare)) out.insert(t);
    }
    return out;
}

WordList::WordList(std::vector<std::string> entries, std::string source_name)
    : source_name_(std::move(source_name)) {
    for (auto& e : entries) {
        for (std::size_t i = 0; i < e.size();) {
            const auto d = decode(e, i);
            if (is_space(d.cp)) throw ValidationError("word list '" + source_name_ + "': entry '" + e + "' contains whitespace");
            i += d.length;
        }
        if (!e.empty()) entries_.insert(to_lower(e));
    }
    if (entries_.empty()) throw ValidationError("word list '" + source_name_ + "' is empty");
}

WordList WordList::parse(std::istream& in, std::string source_name) {
    std::vector<std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        std::size_t b = 0;
        while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
        if (b == line.size() || line[b] == '#') continue;
        entries.push_back(line.substr(b));
    }
    return WordList(std::move(entries), std::move(source_name));
}

WordList WordList::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open word list '" + path.string() + "'");
    return parse(in, path.filename().string());
}

}  // namespace clickbait
