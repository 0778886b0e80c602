#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "checks.hpp"
#include "mwpx/error.hpp"
#include "mwpx/freq.hpp"

using namespace mwpx;

namespace {

Dataset fixture() { return load_dataset(std::string(MWPX_SOURCE_DIR) + "/data/freq25.jsonl"); }

MathWordProblem problem(const std::string& text, const std::string& equation) {
  MathWordProblem p;
  p.tokens = tokenize(text);
  p.numbers = {6, 2, 1};
  p.equation = PrefixEquation::from_string(equation);
  p.answer = evaluate(p.equation, p.numbers);
  p.category = classify_operation(p.equation);
  return p;
}

}  // namespace

TEST_CASE("document frequency counts each problem once") {
  Dataset ds{problem("books and a book", "+ number0 number1"), problem("Books number0", "+ number0 number1"),
             problem("book book book book book", "+ number0 number1"), problem("pens", "- number0 number1")};
  auto counts = word_document_counts(ds, Category::Add);
  CHECK(counts.at("book") == 3);
  CHECK(counts.at("and") == 1);
  CHECK_FALSE(counts.count("number0"));
  CHECK_FALSE(counts.count("pen"));
  CHECK_THROWS_AS(word_document_counts(ds, Category::Div), Error);
}

TEST_CASE("fixture matches a brute-force recount") {
  auto ds = fixture();
  REQUIRE(ds.size() == 25);
  for (std::size_t n : {1u, 3u, 5u, 8u, 50u}) CHECK_MESSAGE(checks::frequency_mismatches(ds, n) == 0, n);
}

TEST_CASE("words in every list are filtered") {
  auto report = top_words_report(fixture(), 50);
  CHECK(report.excluded_words.count("total"));
  CHECK(report.excluded_words.count("how"));
  for (const auto& c : report.categories) {
    for (const auto& w : c.words) {
      CHECK_FALSE(report.excluded_words.count(w.word));
      CHECK(w.pct > 0.0);
      CHECK(w.pct <= 1.0);
      CHECK(std::lround(w.pct * c.problems) == static_cast<long>(w.count));
    }
    for (std::size_t i = 1; i < c.words.size(); ++i) {
      const auto& a = c.words[i - 1];
      const auto& b = c.words[i];
      CHECK((a.count > b.count || (a.count == b.count && a.word < b.word)));
    }
  }
}

TEST_CASE("disjoint vocabularies exclude nothing") {
  Dataset ds{problem("alpha number0", "+ number0 number1"), problem("beta number0", "- number0 number1"),
             problem("gamma number0", "* number0 number1"), problem("delta number0", "/ number0 number1"),
             problem("epsilon number0", "+ number0 - number1 number2")};
  auto report = top_words_report(ds, 50);
  CHECK(report.excluded_words.empty());
  CHECK(report.categories[static_cast<std::size_t>(Category::Mul)].words.front().word == "gamma");
}

TEST_CASE("missing category is rejected") {
  Dataset ds{problem("alpha", "+ number0 number1"), problem("beta", "- number0 number1")};
  CHECK_THROWS_AS(top_words_report(ds, 50), Error);
}

TEST_CASE("repeating words inside a problem changes nothing") {
  auto ds = fixture();
  auto base = top_words_report(ds, 10);
  for (auto& p : ds) {
    auto copy = p.tokens;
    p.tokens.insert(p.tokens.end(), copy.begin(), copy.end());
  }
  CHECK(top_words_report(ds, 10) == base);
}

TEST_CASE("csv and json output") {
  auto report = top_words_report(fixture(), 5);
  const auto& add = report.categories[0];
  auto csv = frequency_csv(add);
  CHECK(csv.rfind("word,count,pct\n", 0) == 0);
  std::istringstream lines(csv);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s,%zu,%.2f", add.words[0].word.c_str(), add.words[0].count, add.words[0].pct);
  CHECK(first == buf);

  auto j = nlohmann::json::parse(frequency_report_json(report));
  CHECK(j.at("top_n") == 5);
  CHECK(j.at("categories").at("ADD").at("words").at(0).at("pct").get<double>() == add.words[0].pct);
}
