#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cobra/dataset.hpp"

namespace cobra {
namespace {

Dataset parse(const std::string& text, CsvOptions opts = {}) {
  std::istringstream in(text);
  return parse_csv(in, opts);
}

TEST(LoadCsv, NumericColumnsWithoutLabels) {
  const auto d = parse("x,y\n1,2\n3,4\n5,6\n");
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_FALSE(d.has_labels());
  EXPECT_DOUBLE_EQ(d.row(2)[1], 6.0);
}

TEST(LoadCsv, NamedLabelColumn) {
  const auto d = parse("x,y,class\n1,2,a\n3,4,b\n5,6,a\n", {"class", ','});
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.dim(), 2u);
  ASSERT_TRUE(d.has_labels());
  EXPECT_EQ(d.labels(), (std::vector<std::string>{"a", "b", "a"}));
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"x", "y"}));
}

TEST(LoadCsv, LabelColumnMayComeFirst) {
  const auto d = parse("class,x\nfoo,1.5\nbar,2.5\n", {"class", ','});
  EXPECT_EQ(d.dim(), 1u);
  EXPECT_DOUBLE_EQ(d.row(1)[0], 2.5);
  EXPECT_EQ(d.labels()[0], "foo");
}

TEST(LoadCsv, NonNumericCellReportsRowAndColumn) {
  try {
    parse("x,y\n1,2\nabc,4\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2, column 1"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, Errors) {
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), DataError);
  EXPECT_THROW(parse("x,y\n1,2\n", {"class", ','}), DataError);
  EXPECT_THROW(parse(""), DataError);
  EXPECT_THROW(parse("x,y\n1\n"), DataError);
  EXPECT_THROW(parse("x\ninf\n"), DataError);
}

TEST(LoadCsv, DelimiterQuotesAndCrLf) {
  const auto d = parse("\"a;b\";y;label\r\n1;2;\"x;y\"\r\n\r\n3;4;z\r\n", {"label", ';'});
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.feature_names()[0], "a;b");
  EXPECT_EQ(d.labels()[0], "x;y");
}

TEST(Dedupe, RemovesExactDuplicatesKeepingFirst) {
  const Dataset d({1, 2, 1, 2, 3, 4}, 2, std::vector<std::string>{"a", "b", "c"});
  const auto u = dedupe(d);
  EXPECT_EQ(u.values(), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(u.labels(), (std::vector<std::string>{"a", "c"}));
}

TEST(Dedupe, DistinctDataUnchangedAndIdempotent) {
  const Dataset d({1, 2, 3, 4, 5, 6}, 2);
  EXPECT_EQ(dedupe(d), d);
  const Dataset dup({1, 1, 2, 1, 1, 2}, 1);
  EXPECT_EQ(dedupe(dedupe(dup)), dedupe(dup));
}

TEST(Dedupe, BundledIrisHas147DistinctInstances) {
  const auto d = dedupe(load_csv(COBRA_DATA_DIR "/iris.csv", {"class", ','}));
  EXPECT_EQ(d.size(), 147u);
}

TEST(Normalize, MinMaxPerFeature) {
  EXPECT_EQ(normalize(Dataset({0, 5, 10}, 1)).values(), (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(normalize(Dataset({7, 7, 7}, 1)).values(), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(normalize(Dataset({0, 10, 10, 20}, 2)).values(), (std::vector<double>{0, 0, 1, 1}));
}

TEST(Normalize, RangeAndIdempotenceOnRandomData) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(3.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 40, m = 1 + rng() % 6;
    std::vector<double> v(n * m);
    for (auto& x : v) x = g(rng);
    const auto once = normalize(Dataset(v, m));
    for (double x : once.values()) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    const auto twice = normalize(once);
    for (std::size_t i = 0; i < v.size(); ++i)
      EXPECT_NEAR(twice.values()[i], once.values()[i], 1e-15);
  }
}

TEST(Distance, Examples) {
  const std::vector<double> o{0, 0}, p{3, 4}, a{1, 1, 1}, b{2, 2, 2};
  EXPECT_DOUBLE_EQ(distance(o, p), 5.0);
  EXPECT_DOUBLE_EQ(distance(p, p), 0.0);
  EXPECT_NEAR(distance(a, b), 1.7320508, 1e-7);
  EXPECT_THROW(distance(o, a), ConfigError);
}

TEST(Distance, TriangleInequalityAndSymmetry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 1 + rng() % 8;
    std::vector<double> x(m), y(m), z(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = u(rng), y[j] = u(rng), z[j] = u(rng);
    EXPECT_LE(distance(x, z), distance(x, y) + distance(y, z) + 1e-12);
    EXPECT_EQ(distance(x, y), distance(y, x));
  }
}

TEST(Pipeline, DeterministicForIdenticalInput) {
  const CsvOptions opts{"class", ','};
  const auto a = normalize(dedupe(load_csv(COBRA_DATA_DIR "/wine.csv", opts)));
  const auto b = normalize(dedupe(load_csv(COBRA_DATA_DIR "/wine.csv", opts)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  EXPECT_EQ(fingerprint(a).size(), 16u);
}

}  // namespace
}  // namespace cobra
