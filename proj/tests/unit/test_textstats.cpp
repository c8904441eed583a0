#include <random>
#include <sstream>

#include "clickbait/errors.hpp"
#include "clickbait/textstats.hpp"
#include "doctest.h"
#include "support/synthetic.hpp"

using namespace clickbait;

namespace {

using Tokens = std::vector<std::string>;

WordSet set_of(std::initializer_list<const char*> items) {
    WordSet s;
    for (const char* i : items) s.emplace(i);
    return s;
}

}  // namespace

TEST_CASE("len_characters") {
    CHECK(len_characters(ContentValue::absent()) == -1);
    CHECK(len_characters(ContentValue::text("abc")) == 3);
    CHECK(len_characters(ContentValue::text("")) == 0);
    const std::vector<std::string> items{"ab", "abcd"};
    CHECK(len_characters(ContentValue::list(items)) == 3.0);
    const std::vector<std::string> none;
    CHECK(len_characters(ContentValue::list(none)) == -1);
    // Codepoints, not bytes.
    CHECK(len_characters(ContentValue::text("na\xC3\xAFve \xE6\x97\xA5")) == 7);
}

TEST_CASE("len_words") {
    CHECK(len_words(ContentValue::absent()) == -1);
    CHECK(len_words(ContentValue::text("Here's what people really thought")) == 5);
    const std::vector<std::string> items{"a b", "c d e f"};
    CHECK(len_words(ContentValue::list(items)) == 3.0);
    const std::vector<std::string> none;
    CHECK(len_words(ContentValue::list(none)) == -1);
    CHECK(len_words(ContentValue::text("")) == 0);
    CHECK(len_words(ContentValue::text("?! ...")) == 0);
}

TEST_CASE("tokenize") {
    CHECK(tokenize("Trump press conference") == Tokens{"trump", "press", "conference"});
    CHECK(tokenize("15 surprising facts!") == Tokens{"15", "surprising", "facts"});
    CHECK(tokenize("#wow @you RT") == Tokens{"#wow", "@you", "rt"});
    CHECK(tokenize("  \"Quoted,\"  (words)... ") == Tokens{"quoted", "words"});
    CHECK(tokenize("Here's") == Tokens{"here's"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("... ? !").empty());
    // Unicode whitespace and lowercase folding.
    CHECK(tokenize("\xC3\x9C" "BER\xE2\x80\x83" "Caf\xC3\x89\xE2\x80\xA6") ==
          Tokens{"\xC3\xBC" "ber", "caf\xC3\xA9"});
}

TEST_CASE("words deduplicates and unions") {
    CHECK(words(ContentValue::text("the the cat")) == set_of({"the", "cat"}));
    const std::vector<std::string> items{"a b", "b c"};
    CHECK(words(ContentValue::list(items)) == set_of({"a", "b", "c"}));
    CHECK(words(ContentValue::text("")).empty());
    CHECK(words(ContentValue::absent()).empty());
}

TEST_CASE("formal and informal words") {
    const WordList dict({"cat", "wow"}, "test");
    CHECK(formal_words(set_of({"cat", "zzxq"}), dict) == set_of({"cat"}));
    CHECK(informal_words(set_of({"cat", "zzxq"}), dict) == set_of({"zzxq"}));
    CHECK(formal_words({}, dict).empty());
    CHECK(informal_words(set_of({"cat"}), dict).empty());
    // '#' and '@' prefixes are stripped before lookup.
    CHECK(formal_words(set_of({"#wow", "@cat", "#"}), dict) == set_of({"#wow", "@cat"}));
}

TEST_CASE("bundled word list") {
    const auto dict = testing::bundled_wordlist();
    CHECK(dict.size() > 40000);
    CHECK(formal_words(set_of({"15", "facts"}), dict) == set_of({"facts"}));
    CHECK(informal_words(set_of({"15", "facts"}), dict) == set_of({"15"}));
    for (const char* w : {"cat", "surprising", "trump", "cars", "the"}) CHECK(dict.contains(w));
    CHECK_FALSE(dict.contains("zzxq"));
}

TEST_CASE("word list validation") {
    CHECK_THROWS_AS(WordList({}, "empty"), ValidationError);
    CHECK_THROWS_AS(WordList({"two words"}, "bad"), ValidationError);
    const WordList upper({"Cat"}, "case");
    CHECK(upper.contains("cat"));
    std::istringstream in("# header\ncat\n\ndog\r\n");
    const auto parsed = WordList::parse(in, "stream");
    CHECK(parsed.size() == 2);
    CHECK(parsed.contains("dog"));
    CHECK(parsed.source_name() == "stream");
}

TEST_CASE("field slugs") {
    CHECK(field_slug(ContentField::PostTitle) == "post_title");
    CHECK(field_slug(ContentField::ArticleParagraphs) == "article_paragraphs");
}

TEST_CASE("content view follows the field kinds") {
    PostInstance p;
    p.post_title = "x";
    p.article_keywords = std::vector<std::string>{"a"};
    CHECK(content(p, ContentField::PostTitle).kind() == ContentValue::Kind::scalar);
    CHECK(content(p, ContentField::ArticleKeywords).kind() == ContentValue::Kind::list);
    CHECK(content(p, ContentField::ArticleTitle).kind() == ContentValue::Kind::absent);
}

TEST_CASE("property: sentinel equivalence, word/char bound, partition, tokenize idempotence") {
    const auto corpus = testing::synthetic_corpus(300, 21);
    const auto dict = testing::small_wordlist();
    for (const auto& p : corpus.instances) {
        for (auto f : kContentFields) {
            const auto v = content(p, f);
            const double c = len_characters(v);
            const double w = len_words(v);
            CHECK((c == -1) == v.empty_content());
            CHECK((w == -1) == v.empty_content());
            if (v.kind() == ContentValue::Kind::scalar && !v.scalar().empty()) CHECK(w <= c);

            const auto ws = words(v);
            const auto formal = formal_words(ws, dict);
            const auto informal = informal_words(ws, dict);
            CHECK(formal.size() + informal.size() == ws.size());
            for (const auto& t : formal) CHECK_FALSE(informal.contains(t));

            v.for_each_text([](std::string_view text) {
                const auto once = tokenize(text);
                std::string joined;
                for (const auto& t : once) joined += (joined.empty() ? "" : " ") + t;
                CHECK(tokenize(joined) == once);
            });
        }
    }
}

TEST_CASE("property: tokenize never throws on arbitrary bytes") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
        std::string s(rng() % 40, '\0');
        for (auto& ch : s) ch = static_cast<char>(rng() & 0xFF);
        const auto tokens = tokenize(s);
        for (const auto& t : tokens) CHECK_FALSE(t.empty());
        CHECK(codepoint_count(s) <= s.size());
    }
}
