#include "clickbait/selection.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "clickbait/parallel.hpp"

namespace clickbait {

GainRanking rank_features(const FeatureMatrix& matrix, int bins, unsigned threads) {
    const auto& labels = matrix.labels();
    if (matrix.rows() == 0) throw DomainError("cannot rank features of an empty matrix");
    std::vector<double> gains(matrix.cols());
    parallel_for(matrix.cols(), threads, [&](std::size_t j) { gains[j] = information_gain(matrix.column(j), labels, bins); });

    // Equal gains fall back to catalog order; names outside the catalog
    // follow, alphabetically. Column order never matters.
    const auto& catalog = FeatureCatalog::instance();
    const auto key = [&](std::size_t j) {
        const auto idx = catalog.index_of(matrix.names()[j]);
        return std::tuple<double, std::size_t, const std::string&>(-gains[j], idx.value_or(catalog.size()), matrix.names()[j]);
    };
    std::vector<std::size_t> order(matrix.cols());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    GainRanking ranking;
    ranking.entries.reserve(order.size());
    for (auto j : order) ranking.entries.push_back({matrix.names()[j], gains[j]});
    return ranking;
}

std::vector<std::string> top_k(const GainRanking& ranking, std::size_t k) {
    if (k < 1 || k > ranking.entries.size())
        throw DomainError("top_k: k=" + std::to_string(k) + " outside [1, " + std::to_string(ranking.entries.size()) + "]");
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(ranking.entries[i].name);
    return out;
}

void write_ranking(std::ostream& out, const GainRanking& ranking, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "feature\tinfo_gain\n";
    char buf[64];
    for (const auto& e : ranking.entries) {
        std::snprintf(buf, sizeof buf, "%.6f", e.gain);
        out << e.name << '\t' << buf << '\n';
    }
}

GainRanking read_ranking(std::istream& in) {
    GainRanking r;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "feature\tinfo_gain") throw ParseError("ranking header expected", line_no);
            header = true;
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected 'feature<TAB>gain'", line_no);
        GainEntry e{line.substr(0, tab), 0.0};
        const char* b = line.data() + tab + 1;
        const char* end = line.data() + line.size();
        const auto [p, ec] = std::from_chars(b, end, e.gain);
        if (ec != std::errc{} || p != end) throw ParseError("invalid gain", line_no);
        r.entries.push_back(std::move(e));
    }
    return r;
}

void write_feature_list(std::ostream& out, const std::vector<std::string>& names) {
    for (const auto& n : names) out << n << '\n';
}

std::vector<std::string> read_feature_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature list '" + path.string() + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        // Accept ranking files too: keep the first column.
        const auto tab = line.find('\t');
        std::string name = line.substr(0, tab);
        if (name == "feature") continue;
        out.push_back(std::move(name));
    }
    if (out.empty()) throw DomainError("feature list '" + path.string() + "' is empty");
    return out;
}

}  // namespace clickbait
