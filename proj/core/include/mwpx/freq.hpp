#pragma once

#include <array>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mwpx/corpus.hpp"

namespace mwpx {

struct WordCount {
  std::string word;  // normalized form
  std::size_t count = 0;  // problems containing the word
  double pct = 0.0;       // count / problems in the category

  friend bool operator==(const WordCount&, const WordCount&) = default;
};

struct CategoryFrequencies {
  Category category = Category::Add;
  std::size_t problems = 0;
  std::vector<WordCount> words;  // count descending, then alphabetical

  friend bool operator==(const CategoryFrequencies&, const CategoryFrequencies&) = default;
};

struct FrequencyReport {
  std::size_t top_n = 50;
  std::array<CategoryFrequencies, 5> categories;  // indexed by Category
  std::set<std::string> excluded_words;            // in every pre-filter top-n list

  friend bool operator==(const FrequencyReport&, const FrequencyReport&) = default;
};

/// Number of problems of `category` containing each normalized word. Number
/// tokens and punctuation are not counted. Throws EmptyInput when the
/// category has no problems.
std::map<std::string, std::size_t> word_document_counts(std::span<const MathWordProblem> dataset,
                                                        Category category);

/// Per-category top-n lists with every word common to all five lists
/// removed. Throws InvalidArgument if any category is absent.
FrequencyReport top_words_report(std::span<const MathWordProblem> dataset, std::size_t n = 50);

/// word,count,pct with pct rounded to two decimals.
std::string frequency_csv(const CategoryFrequencies& freqs);
std::string frequency_report_json(const FrequencyReport& report);

}  // namespace mwpx
