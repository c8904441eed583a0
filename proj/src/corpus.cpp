#include "clickbait/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "clickbait/errors.hpp"
#include "json.hpp"

namespace clickbait {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed record: ") + e.what(), line_no);
        }
        if (!record.is_object()) throw ParseError("record is not an object", line_no);
        fn(record, line_no);
    }
}

std::string read_id(const json& record, const std::string& key, std::size_t line_no) {
    const auto it = record.find(key);
    if (it == record.end() || it->is_null()) throw ParseError("missing id field '" + key + "'", line_no);
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
    throw ParseError("id field '" + key + "' is neither string nor integer", line_no);
}

const json* find_present(const json& record, const std::string& key) {
    if (key.empty()) return nullptr;
    const auto it = record.find(key);
    if (it == record.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string join_strings(const json& array, const std::string& key, std::size_t line_no) {
    std::string out;
    bool first = true;
    for (const auto& item : array) {
        if (!item.is_string()) throw ParseError("field '" + key + "' holds a non-string item", line_no);
        if (!first) out += ' ';
        out += item.get_ref<const std::string&>();
        first = false;
    }
    return out;
}

// Scalar text; multi-valued text is joined with a single space.
std::optional<std::string> read_text(const json& record, const std::string& key, std::size_t line_no) {
    const json* v = find_present(record, key);
    if (!v) return std::nullopt;
    if (v->is_string()) return v->get<std::string>();
    if (v->is_array()) return join_strings(*v, key, line_no);
    throw ParseError("field '" + key + "' is not text", line_no);
}

std::optional<std::vector<std::string>> read_list(const json& record, const std::string& key,
                                                  std::size_t line_no) {
    const json* v = find_present(record, key);
    if (!v) return std::nullopt;
    if (v->is_string()) return std::vector<std::string>{v->get<std::string>()};
    if (!v->is_array()) throw ParseError("field '" + key + "' is not a list of text", line_no);
    std::vector<std::string> out;
    out.reserve(v->size());
    for (const auto& item : *v) {
        if (!item.is_string()) throw ParseError("field '" + key + "' holds a non-string item", line_no);
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::optional<std::vector<std::string>> read_keywords(const json& record, const std::string& key,
                                                      std::size_t line_no) {
    const json* v = find_present(record, key);
    if (!v) return std::nullopt;
    if (v->is_string()) return split_keywords(v->get_ref<const std::string&>());
    if (!v->is_array()) throw ParseError("field '" + key + "' is not keyword text", line_no);
    std::vector<std::string> out;
    for (const auto& item : *v) {
        if (!item.is_string()) throw ParseError("field '" + key + "' holds a non-string item", line_no);
        const auto t = trim(item.get_ref<const std::string&>());
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::optional<std::string> read_image_ref(const json& record, const std::string& key, std::size_t line_no) {
    const json* v = find_present(record, key);
    if (!v) return std::nullopt;
    std::string ref;
    if (v->is_string()) {
        ref = v->get<std::string>();
    } else if (v->is_array()) {
        if (v->empty()) return std::nullopt;
        if (!v->front().is_string()) throw ParseError("field '" + key + "' holds a non-string item", line_no);
        ref = v->front().get<std::string>();
    } else {
        throw ParseError("field '" + key + "' is not an image reference", line_no);
    }
    if (trim(ref).empty()) return std::nullopt;
    return ref;
}

std::optional<Timestamp> read_timestamp(const json& record, const std::string& key) {
    const json* v = find_present(record, key);
    if (!v) return std::nullopt;
    if (v->is_number_integer()) return Timestamp{std::chrono::seconds{v->get<long long>()}};
    if (v->is_string()) return parse_timestamp(v->get_ref<const std::string&>());
    return std::nullopt;
}

std::optional<std::string> read_sidecar(const std::filesystem::path& media_root, const std::string& ref) {
    std::filesystem::path p = media_root / ref;
    p += ".txt";
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) return std::nullopt;
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
    if (s.empty()) return false;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::optional<Timestamp> make_time(int y, unsigned mo, unsigned d, int h, int mi, int s, int offset_minutes) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) return std::nullopt;
    const auto t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
    return time_point_cast<seconds>(t);
}

// "+0000", "+05:30", "-0800"
bool parse_offset(std::string_view s, int& minutes) {
    if (s.size() < 3 || (s[0] != '+' && s[0] != '-')) return false;
    std::string digits;
    for (char c : s.substr(1))
        if (c != ':') digits += c;
    int hh = 0, mm = 0;
    if (digits.size() == 2) {
        if (!parse_int(std::string_view(digits), hh)) return false;
    } else if (digits.size() == 4) {
        if (!parse_int(std::string_view(digits).substr(0, 2), hh) ||
            !parse_int(std::string_view(digits).substr(2, 2), mm))
            return false;
    } else {
        return false;
    }
    if (hh > 23 || mm > 59) return false;
    minutes = (hh * 60 + mm) * (s[0] == '-' ? -1 : 1);
    return true;
}

bool parse_hms(std::string_view s, int& h, int& m, int& sec) {
    if (s.size() != 8 || s[2] != ':' || s[5] != ':') return false;
    return parse_int(s.substr(0, 2), h) && parse_int(s.substr(3, 2), m) && parse_int(s.substr(6, 2), sec);
}

std::optional<Timestamp> parse_challenge_time(std::string_view text) {
    static constexpr std::array<std::string_view, 12> months = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                                "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto b = text.find_first_not_of(' ', pos);
        if (b == std::string_view::npos) break;
        const auto e = text.find(' ', b);
        parts.push_back(text.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
        pos = e == std::string_view::npos ? text.size() : e;
    }
    if (parts.size() != 6) return std::nullopt;
    const auto mit = std::find(months.begin(), months.end(), parts[1]);
    if (mit == months.end()) return std::nullopt;
    unsigned day = 0;
    int year = 0, h = 0, m = 0, s = 0, offset = 0;
    if (!parse_int(parts[2], day) || !parse_hms(parts[3], h, m, s) || !parse_offset(parts[4], offset) ||
        !parse_int(parts[5], year))
        return std::nullopt;
    return make_time(year, static_cast<unsigned>(mit - months.begin()) + 1, day, h, m, s, offset);
}

std::optional<Timestamp> parse_iso_time(std::string_view text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int year = 0;
    unsigned mo = 0, d = 0;
    if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), mo) || !parse_int(text.substr(8, 2), d))
        return std::nullopt;
    if (text.size() == 10) return make_time(year, mo, d, 0, 0, 0, 0);
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
    std::string_view rest = text.substr(11);
    int h = 0, m = 0, s = 0;
    if (rest.size() < 8 || !parse_hms(rest.substr(0, 8), h, m, s)) return std::nullopt;
    rest.remove_prefix(8);
    if (!rest.empty() && rest[0] == '.') {
        std::size_t i = 1;
        while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
        if (i == 1) return std::nullopt;
        rest.remove_prefix(i);
    }
    int offset = 0;
    if (rest.empty() || rest == "Z" || rest == "z") {
        offset = 0;
    } else if (!parse_offset(rest, offset)) {
        return std::nullopt;
    }
    return make_time(year, mo, d, h, m, s, offset);
}

}  // namespace

std::size_t Dataset::count(Label l) const {
    if (!labels) return 0;
    return static_cast<std::size_t>(
        std::count_if(labels->begin(), labels->end(), [l](const TruthLabel& t) { return t.label == l; }));
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text[0] >= '0' && text[0] <= '9') return parse_iso_time(text);
    return parse_challenge_time(text);
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::vector<std::string> split_keywords(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto piece = trim(text.substr(start, end - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = end + 1;
    }
    return out;
}

Schema parse_schema(std::istream& in) {
    Schema schema;
    const std::map<std::string, std::string Schema::*, std::less<>> keys = {
        {"id", &Schema::id},
        {"post_title", &Schema::post_title},
        {"post_timestamp", &Schema::post_timestamp},
        {"image_ref", &Schema::image_ref},
        {"image_text", &Schema::image_text},
        {"article_title", &Schema::article_title},
        {"article_description", &Schema::article_description},
        {"article_keywords", &Schema::article_keywords},
        {"article_paragraphs", &Schema::article_paragraphs},
        {"article_captions", &Schema::article_captions},
        {"truth_id", &Schema::truth_id},
        {"truth_class", &Schema::truth_class},
        {"positive_class", &Schema::positive_class},
        {"negative_class", &Schema::negative_class},
    };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        const auto key = trim(t.substr(0, eq));
        const auto it = keys.find(key);
        if (it == keys.end()) throw ParseError("unknown schema key '" + std::string(key) + "'", line_no);
        schema.*(it->second) = std::string(trim(t.substr(eq + 1)));
    }
    if (schema.id.empty()) throw ParseError("schema maps 'id' to an empty key");
    return schema;
}

Schema load_schema(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return parse_schema(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Dataset parse_instances(std::istream& in, const Schema& schema, const std::filesystem::path& media_root) {
    Dataset ds;
    std::unordered_set<std::string> seen;
    for_each_record(in, [&](const json& r, std::size_t line_no) {
        PostInstance p;
        p.id = read_id(r, schema.id, line_no);
        if (p.id.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty id");
        if (!seen.insert(p.id).second) throw ValidationError("duplicate id '" + p.id + "'");
        p.post_title = read_text(r, schema.post_title, line_no);
        p.post_timestamp = read_timestamp(r, schema.post_timestamp);
        p.image_ref = read_image_ref(r, schema.image_ref, line_no);
        p.image_text = read_text(r, schema.image_text, line_no);
        if (!p.image_text && p.image_ref) p.image_text = read_sidecar(media_root, *p.image_ref);
        p.article_title = read_text(r, schema.article_title, line_no);
        p.article_description = read_text(r, schema.article_description, line_no);
        p.article_keywords = read_keywords(r, schema.article_keywords, line_no);
        p.article_paragraphs = read_list(r, schema.article_paragraphs, line_no);
        p.article_captions = read_list(r, schema.article_captions, line_no);
        ds.instances.push_back(std::move(p));
    });
    return ds;
}

Dataset load_instances(const std::filesystem::path& path, const Schema& schema) {
    auto in = open_input(path);
    try {
        return parse_instances(in, schema, path.parent_path());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<TruthLabel> parse_truth(std::istream& in, const Schema& schema) {
    std::vector<TruthLabel> out;
    for_each_record(in, [&](const json& r, std::size_t line_no) {
        TruthLabel t;
        t.id = read_id(r, schema.truth_id, line_no);
        if (t.id.empty()) throw ParseError("empty id", line_no);
        const auto it = r.find(schema.truth_class);
        if (it == r.end() || !it->is_string())
            throw ParseError("missing class field '" + schema.truth_class + "'", line_no);
        const auto& cls = it->get_ref<const std::string&>();
        if (cls == schema.positive_class) {
            t.label = Label::clickbait;
        } else if (cls == schema.negative_class) {
            t.label = Label::legitimate;
        } else {
            throw ParseError("unknown class \"" + cls + "\"", line_no);
        }
        out.push_back(std::move(t));
    });
    return out;
}

std::vector<TruthLabel> load_truth(const std::filesystem::path& path, const Schema& schema) {
    auto in = open_input(path);
    try {
        return parse_truth(in, schema);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Dataset join(const Dataset& dataset, const std::vector<TruthLabel>& labels) {
    std::unordered_map<std::string_view, const TruthLabel*> by_id;
    by_id.reserve(labels.size());
    std::vector<std::string> duplicates;
    for (const auto& l : labels)
        if (!by_id.emplace(l.id, &l).second) duplicates.push_back(l.id);
    if (!duplicates.empty()) {
        std::string msg = "duplicate label ids:";
        for (const auto& id : duplicates) msg += " " + id;
        throw JoinError(msg);
    }

    Dataset out;
    out.instances = dataset.instances;
    out.labels.emplace();
    out.labels->reserve(dataset.size());
    std::vector<std::string> missing;
    std::unordered_set<std::string_view> used;
    for (const auto& p : dataset.instances) {
        const auto it = by_id.find(p.id);
        if (it == by_id.end()) {
            missing.push_back(p.id);
            continue;
        }
        used.insert(it->first);
        out.labels->push_back(*it->second);
    }
    std::vector<std::string> orphans;
    for (const auto& l : labels)
        if (!used.contains(l.id)) orphans.push_back(l.id);

    if (!missing.empty() || !orphans.empty()) {
        std::string msg;
        if (!missing.empty()) {
            msg += std::to_string(missing.size()) + " unlabeled instance id(s):";
            for (const auto& id : missing) msg += " " + id;
        }
        if (!orphans.empty()) {
            if (!msg.empty()) msg += "; ";
            msg += std::to_string(orphans.size()) + " orphan label id(s):";
            for (const auto& id : orphans) msg += " " + id;
        }
        throw JoinError(msg);
    }
    return out;
}

void write_instances(std::ostream& out, const Dataset& dataset, const Schema& schema) {
    for (const auto& p : dataset.instances) {
        ordered_json r;
        r[schema.id] = p.id;
        if (p.post_title) r[schema.post_title] = ordered_json::array({*p.post_title});
        if (p.post_timestamp) r[schema.post_timestamp] = format_timestamp(*p.post_timestamp);
        if (p.image_ref) r[schema.image_ref] = ordered_json::array({*p.image_ref});
        if (p.image_text) r[schema.image_text] = *p.image_text;
        if (p.article_title) r[schema.article_title] = *p.article_title;
        if (p.article_description) r[schema.article_description] = *p.article_description;
        if (p.article_keywords) r[schema.article_keywords] = *p.article_keywords;
        if (p.article_paragraphs) r[schema.article_paragraphs] = *p.article_paragraphs;
        if (p.article_captions) r[schema.article_captions] = *p.article_captions;
        out << r.dump() << '\n';
    }
}

void write_truth(std::ostream& out, const std::vector<TruthLabel>& labels, const Schema& schema) {
    for (const auto& l : labels) {
        ordered_json r;
        r[schema.truth_id] = l.id;
        r[schema.truth_class] = l.label == Label::clickbait ? schema.positive_class : schema.negative_class;
        out << r.dump() << '\n';
    }
}

}  // namespace clickbait
