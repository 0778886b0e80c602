#include "mwpx/freq.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "csv.hpp"
#include "mwpx/error.hpp"
#include "mwpx/tagger.hpp"

namespace mwpx {

std::map<std::string, std::size_t> word_document_counts(std::span<const MathWordProblem> dataset,
                                                        Category category) {
  std::map<std::string, std::size_t> counts;
  std::size_t problems = 0;
  for (const auto& p : dataset) {
    if (p.category != category) continue;
    ++problems;
    std::set<std::string> words;
    for (const auto& t : p.tokens) {
      if (is_number_token(t) || is_punctuation(t)) continue;
      words.insert(normalize_word(t));
    }
    for (const auto& w : words) ++counts[w];
  }
  if (problems == 0)
    throw Error(ErrorCode::EmptyInput, "no problems in category " + std::string(to_string(category)));
  return counts;
}

FrequencyReport top_words_report(std::span<const MathWordProblem> dataset, std::size_t n) {
  const auto sizes = operation_counts(dataset);
  for (Category c : kAllCategories) {
    if (sizes[static_cast<std::size_t>(c)] == 0)
      throw Error(ErrorCode::InvalidArgument,
                  "frequency report needs all five categories; " + std::string(to_string(c)) + " is absent");
  }

  FrequencyReport report;
  report.top_n = n;
  std::array<std::vector<WordCount>, 5> tops;
  for (Category c : kAllCategories) {
    const auto ci = static_cast<std::size_t>(c);
    std::vector<WordCount> all;
    for (const auto& [word, count] : word_document_counts(dataset, c))
      all.push_back({word, count, static_cast<double>(count) / static_cast<double>(sizes[ci])});
    // Map order is alphabetical, so a stable sort keeps alphabetical ties.
    std::stable_sort(all.begin(), all.end(), [](const WordCount& a, const WordCount& b) { return a.count > b.count; });
    if (all.size() > n) all.resize(n);
    tops[ci] = std::move(all);
  }

  for (const auto& wc : tops[0]) {
    bool everywhere = std::all_of(tops.begin() + 1, tops.end(), [&](const std::vector<WordCount>& list) {
      return std::any_of(list.begin(), list.end(), [&](const WordCount& o) { return o.word == wc.word; });
    });
    if (everywhere) report.excluded_words.insert(wc.word);
  }

  for (Category c : kAllCategories) {
    const auto ci = static_cast<std::size_t>(c);
    auto& out = report.categories[ci];
    out.category = c;
    out.problems = sizes[ci];
    for (auto& wc : tops[ci])
      if (!report.excluded_words.count(wc.word)) out.words.push_back(std::move(wc));
  }
  return report;
}

std::string frequency_csv(const CategoryFrequencies& freqs) {
  std::string out = "word,count,pct\n";
  char buf[64];
  for (const auto& w : freqs.words) {
    std::snprintf(buf, sizeof buf, ",%zu,%.2f\n", w.count, w.pct);
    out += csv::escape(w.word);
    out += buf;
  }
  return out;
}

std::string frequency_report_json(const FrequencyReport& report) {
  nlohmann::json j;
  j["top_n"] = report.top_n;
  j["excluded_words"] = report.excluded_words;
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& c : report.categories) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& w : c.words) words.push_back({{"word", w.word}, {"count", w.count}, {"pct", w.pct}});
    cats[std::string(to_string(c.category))] = {{"problems", c.problems}, {"words", words}};
  }
  j["categories"] = cats;
  return j.dump(2);
}

}  // namespace mwpx
