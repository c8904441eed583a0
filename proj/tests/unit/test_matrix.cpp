#include <limits>
#include <sstream>

#include "clickbait/errors.hpp"
#include "clickbait/matrix.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/synthetic.hpp"

using namespace clickbait;

TEST_CASE("construction validates shape, labels and values") {
    Eigen::MatrixXd v(2, 2);
    v << 1, 2, 3, 4;
    CHECK_THROWS_AS(FeatureMatrix({"a"}, {"r0", "r1"}, v), DomainError);
    CHECK_THROWS_AS(FeatureMatrix({"a", "b"}, {"r0"}, v), DomainError);
    CHECK_THROWS_AS(FeatureMatrix({"a", "a"}, {"r0", "r1"}, v), DomainError);
    CHECK_THROWS_AS(FeatureMatrix({"a", "b"}, {"r0", "r1"}, v, Eigen::VectorXi::Constant(2, 2)), DomainError);
    Eigen::MatrixXd bad = v;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(FeatureMatrix({"a", "b"}, {"r0", "r1"}, bad), DomainError);
    const FeatureMatrix m({"a", "b"}, {"r0", "r1"}, v);
    CHECK_FALSE(m.labeled());
    CHECK_THROWS_AS(m.labels(), DomainError);
}

TEST_CASE("column and row selection") {
    const auto m = testing::random_matrix(10, 4, 5, 1);
    const auto cols = m.select_columns({"f3", "f1"});
    CHECK(cols.names() == std::vector<std::string>{"f3", "f1"});
    CHECK(cols.values().col(0) == m.values().col(3));
    CHECK(cols.labels() == m.labels());
    const auto rows = m.select_rows({7, 2});
    CHECK(rows.ids() == std::vector<std::string>{"r7", "r2"});
    CHECK(rows.values().row(0) == m.values().row(7));
    CHECK(rows.labels()[1] == m.labels()[2]);
    try {
        m.select_columns({"f0", "zz", "yy"});
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("'zz'") != std::string::npos);
    }
}

TEST_CASE("csv round trip is exact") {
    Eigen::MatrixXd v(3, 2);
    v << 0.1, -1, 1.0 / 3.0, 1e-300, 123456789.125, 2.5;
    const FeatureMatrix m({"a", "b"}, {"x,1", "#y", "z\"q"}, v, Eigen::Vector3i(1, 0, 1));
    std::stringstream buf;
    write_matrix_csv(buf, m, {"note one", "seed = 3"});
    const auto text = buf.str();
    CHECK(text.rfind("# note one\n# seed = 3\nid,label,a,b\n", 0) == 0);
    const auto back = read_matrix_csv(buf);
    CHECK(back.names() == m.names());
    CHECK(back.ids() == m.ids());
    CHECK(back.values() == m.values());
    CHECK(back.labels() == m.labels());
}

TEST_CASE("csv errors") {
    std::istringstream no_header("a,b\n1,2\n");
    CHECK_THROWS_AS(read_matrix_csv(no_header), ParseError);
    std::istringstream short_row("id,a,b\nr0,1\n");
    CHECK_THROWS_AS(read_matrix_csv(short_row), ParseError);
    std::istringstream bad_number("id,a\nr0,abc\n");
    CHECK_THROWS_AS(read_matrix_csv(bad_number), ParseError);
    std::istringstream bad_label("id,label,a\nr0,2,1\n");
    CHECK_THROWS_AS(read_matrix_csv(bad_label), ParseError);
    CHECK_THROWS_AS(load_matrix_csv("/nonexistent/matrix.csv"), IoError);
}

TEST_CASE("header-only matrix reads back empty") {
    std::istringstream in("# empty\nid,label,a,b\n");
    const auto m = read_matrix_csv(in);
    CHECK(m.rows() == 0);
    CHECK(m.cols() == 2);
    CHECK(m.labeled());
}

TEST_CASE("jsonl export carries ids, labels and named features") {
    const auto m = testing::random_matrix(3, 2, 4, 2);
    std::stringstream buf;
    write_matrix_jsonl(buf, m);
    std::string line;
    int n = 0;
    while (std::getline(buf, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j["id"] == m.ids()[static_cast<std::size_t>(n)]);
        CHECK(j["label"] == m.labels()[n]);
        CHECK(j["features"]["f1"].get<double>() == m.values()(n, 1));
        ++n;
    }
    CHECK(n == 3);
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(-1) == "-1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("extract_matrix keeps row order and ignores the thread count") {
    const auto corpus = testing::synthetic_corpus(120, 17);
    const auto dict = testing::small_wordlist();
    ExtractOptions one;
    one.threads = 1;
    one.reference_time = default_reference_time(corpus);
    ExtractOptions many = one;
    many.threads = 7;
    const auto a = extract_matrix(corpus, dict, one);
    const auto b = extract_matrix(corpus, dict, many);
    CHECK(a.rows() == 120);
    CHECK(a.cols() == kFeatureCount);
    CHECK(a.names() == FeatureCatalog::instance().names());
    CHECK(a.values() == b.values());
    CHECK(a.ids() == b.ids());
    CHECK(a.labeled());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(a.ids()[i] == corpus.instances[i].id);
        CHECK(a.labels()[static_cast<Eigen::Index>(i)] == static_cast<int>((*corpus.labels)[i].label));
    }
}

TEST_CASE("extract_matrix on an unlabeled or empty dataset") {
    auto corpus = testing::synthetic_corpus(5, 1);
    corpus.labels.reset();
    const auto m = extract_matrix(corpus, testing::small_wordlist());
    CHECK_FALSE(m.labeled());
    const auto empty = extract_matrix(Dataset{}, testing::small_wordlist());
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == kFeatureCount);
}
