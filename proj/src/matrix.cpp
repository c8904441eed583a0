#include "clickbait/matrix.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "clickbait/errors.hpp"
#include "clickbait/parallel.hpp"
#include "json.hpp"

namespace clickbait {

FeatureMatrix::FeatureMatrix(std::vector<std::string> names, std::vector<std::string> ids, Eigen::MatrixXd values,
                             std::optional<Eigen::VectorXi> labels)
    : names_(std::move(names)), ids_(std::move(ids)), values_(std::move(values)), labels_(std::move(labels)) {
    if (static_cast<std::size_t>(values_.cols()) != names_.size())
        throw DomainError("feature matrix: " + std::to_string(names_.size()) + " names for " +
                          std::to_string(values_.cols()) + " columns");
    if (static_cast<std::size_t>(values_.rows()) != ids_.size())
        throw DomainError("feature matrix: " + std::to_string(ids_.size()) + " ids for " +
                          std::to_string(values_.rows()) + " rows");
    if (labels_ && labels_->size() != values_.rows()) throw DomainError("feature matrix: label count mismatch");
    if (labels_ && ((labels_->array() != 0) && (labels_->array() != 1)).any())
        throw DomainError("feature matrix: labels must be 0 or 1");
    if (!values_.allFinite()) throw DomainError("feature matrix: non-finite value");
    for (std::size_t j = 0; j < names_.size(); ++j)
        if (!index_.emplace(names_[j], j).second) throw DomainError("feature matrix: duplicate feature '" + names_[j] + "'");
}

const Eigen::VectorXi& FeatureMatrix::labels() const {
    if (!labels_) throw DomainError("feature matrix is unlabeled");
    return *labels_;
}

std::optional<std::size_t> FeatureMatrix::index_of(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> FeatureMatrix::indices_of(const std::vector<std::string>& names) const {
    std::vector<std::size_t> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        const auto i = index_of(n);
        if (!i) throw DomainError("feature '" + n + "' is not present in the matrix");
        out.push_back(*i);
    }
    return out;
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<std::size_t>& rows) const {
    Eigen::MatrixXd v(static_cast<Eigen::Index>(rows.size()), values_.cols());
    std::vector<std::string> ids;
    ids.reserve(rows.size());
    std::optional<Eigen::VectorXi> l;
    if (labels_) l.emplace(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = static_cast<Eigen::Index>(rows[r]);
        v.row(static_cast<Eigen::Index>(r)) = values_.row(src);
        ids.push_back(ids_[rows[r]]);
        if (l) (*l)[static_cast<Eigen::Index>(r)] = (*labels_)[src];
    }
    return FeatureMatrix(names_, std::move(ids), std::move(v), std::move(l));
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::string>& names) const {
    const auto idx = indices_of(names);
    Eigen::MatrixXd v(values_.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) v.col(static_cast<Eigen::Index>(j)) = column(idx[j]);
    return FeatureMatrix(names, ids_, std::move(v), labels_);
}

FeatureMatrix extract_matrix(const Dataset& dataset, const WordList& dict, const ExtractOptions& options) {
    const auto& catalog = FeatureCatalog::instance();
    const auto n = dataset.size();
    const auto reference = options.reference_time ? options.reference_time : default_reference_time(dataset);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(catalog.size()));
    parallel_for(n, options.threads, [&](std::size_t i) {
        values.row(static_cast<Eigen::Index>(i)) = extract_all(dataset.instances[i], dict, reference).values.transpose();
    });
    std::vector<std::string> ids;
    ids.reserve(n);
    for (const auto& p : dataset.instances) ids.push_back(p.id);
    std::optional<Eigen::VectorXi> labels;
    if (dataset.labels) {
        labels.emplace(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            (*labels)[static_cast<Eigen::Index>(i)] = static_cast<int>((*dataset.labels)[i].label);
    }
    return FeatureMatrix(catalog.names(), std::move(ids), std::move(values), std::move(labels));
}

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

namespace {

std::string quote_csv(const std::string& s) {
    // A leading '#' would read back as a comment line.
    if (!s.empty() && s[0] != '#' && s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    out.push_back(std::move(cur));
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
        throw ParseError("invalid number '" + s + "'", line_no);
    return v;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const FeatureMatrix& m, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "id";
    if (m.labeled()) out << ",label";
    for (const auto& n : m.names()) out << ',' << n;
    out << '\n';
    const auto& v = m.values();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        out << quote_csv(m.ids()[static_cast<std::size_t>(i)]);
        if (m.labeled()) out << ',' << m.labels()[i];
        for (Eigen::Index j = 0; j < v.cols(); ++j) out << ',' << format_double(v(i, j));
        out << '\n';
    }
}

FeatureMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        header = split_csv(line, line_no);
        break;
    }
    if (header.empty() || header[0] != "id") throw ParseError("matrix header must start with 'id'", line_no);
    const bool labeled = header.size() > 1 && header[1] == "label";
    const std::size_t first = labeled ? 2 : 1;
    std::vector<std::string> names(header.begin() + static_cast<std::ptrdiff_t>(first), header.end());

    std::vector<std::string> ids;
    std::vector<int> labels;
    std::vector<double> cells;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv(line, line_no);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()),
                             line_no);
        ids.push_back(std::move(fields[0]));
        if (labeled) {
            if (fields[1] != "0" && fields[1] != "1") throw ParseError("label must be 0 or 1", line_no);
            labels.push_back(fields[1] == "1" ? 1 : 0);
        }
        for (std::size_t j = first; j < fields.size(); ++j) cells.push_back(parse_double(fields[j], line_no));
    }
    const auto rows = static_cast<Eigen::Index>(ids.size());
    const auto cols = static_cast<Eigen::Index>(names.size());
    Eigen::MatrixXd values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        cells.data(), rows, cols);
    std::optional<Eigen::VectorXi> l;
    if (labeled) l = Eigen::Map<Eigen::VectorXi>(labels.data(), rows);
    return FeatureMatrix(std::move(names), std::move(ids), std::move(values), std::move(l));
}

FeatureMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open matrix '" + path.string() + "'");
    try {
        return read_matrix_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_matrix_jsonl(std::ostream& out, const FeatureMatrix& m) {
    const auto& v = m.values();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        nlohmann::ordered_json r;
        r["id"] = m.ids()[static_cast<std::size_t>(i)];
        if (m.labeled()) r["label"] = m.labels()[i];
        auto& f = r["features"] = nlohmann::ordered_json::object();
        for (Eigen::Index j = 0; j < v.cols(); ++j) f[m.names()[static_cast<std::size_t>(j)]] = v(i, j);
        out << r.dump() << '\n';
    }
}

}  // namespace clickbait
