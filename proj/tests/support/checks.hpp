#pragma once

// Checks shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mwpx/corpus.hpp"
#include "mwpx/freq.hpp"
#include "mwpx/perturb.hpp"
#include "mwpx/reduce.hpp"
#include "mwpx/rng.hpp"
#include "oracles.hpp"
#include "seq2seq.hpp"

namespace checks {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------- gradients

/// Largest |analytic - central difference| over every parameter entry of a
/// micro model.
inline double max_gradient_error(mwpx::CellType cell, std::size_t layers, std::uint64_t seed) {
  mwpx::SolverConfig config;
  config.embedding_dim = 3;
  config.hidden_dim = 4;
  config.layers = layers;
  config.cell = cell;
  mwpx::nn::Seq2Seq model(config, {6, 5});
  mwpx::Rng rng(seed);
  model.initialize(rng);

  mwpx::nn::Batch batch;
  batch.source = {{2, 3, 4, 5}, {1, 2}, {5, 4, 3}};
  batch.target = {{1, 3, 4, 0}, {2, 0}, {4, 1, 3, 2, 0}};
  mwpx::nn::PassOptions options;
  options.training = true;
  options.dropout = 0.0;
  options.teacher_forcing = 1.0;
  options.rng = &rng;

  model.zero_grad();
  model.loss(batch, options, true);
  double worst = 0.0;
  const double h = 1e-6;
  for (auto& p : model.params()) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      double saved = p.value(i);
      p.value(i) = saved + h;
      double up = model.loss(batch, options, false);
      p.value(i) = saved - h;
      double down = model.loss(batch, options, false);
      p.value(i) = saved;
      double numeric = (up - down) / (2 * h);
      worst = std::max(worst, std::fabs(numeric - p.grad(i)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------- perturbation algebra

inline bool selected(const mwpx::TaggedToken& t, bool entity, const std::set<mwpx::Selector>& classes) {
  using mwpx::Selector;
  using mwpx::Tag;
  if (entity && classes.count(Selector::NamedEntity)) return true;
  switch (t.tag) {
    case Tag::Noun: return classes.count(Selector::Noun);
    case Tag::Propn: return classes.count(Selector::Propn);
    case Tag::Verb: return classes.count(Selector::Verb);
    case Tag::Adj: return classes.count(Selector::Adj);
    case Tag::Wh: return classes.count(Selector::Wh);
    case Tag::Prep: return classes.count(Selector::Prep);
    case Tag::Punct: return classes.count(Selector::Punct);
    case Tag::Other: return classes.count(Selector::Other);
    case Tag::NumTok: return false;
  }
  return false;
}

struct AlgebraResult {
  std::size_t samples = 0;
  std::size_t number_preservation = 0;
  std::size_t subsequence = 0;
  std::size_t remove_union = 0;
  std::size_t keep_only_purity = 0;

  std::size_t violations() const { return number_preservation + subsequence + remove_union + keep_only_purity; }
};

/// Random tagged sequences and random class sets; counts violations of the
/// four algebraic properties of filter_tokens.
inline AlgebraResult perturbation_algebra(std::uint64_t seed, std::size_t samples) {
  using mwpx::Tag;
  using mwpx::Selector;
  static const Tag word_tags[] = {Tag::Noun, Tag::Propn, Tag::Verb, Tag::Adj,
                                  Tag::Wh,   Tag::Prep,  Tag::Punct, Tag::Other};
  static const Selector selectors[] = {Selector::Noun, Selector::Propn, Selector::Verb,
                                       Selector::Adj,  Selector::Wh,    Selector::Prep,
                                       Selector::Punct, Selector::Other, Selector::NamedEntity};
  mwpx::Rng rng(seed);
  AlgebraResult r;
  auto random_classes = [&] {
    std::set<Selector> out;
    for (auto s : selectors)
      if (rng.bernoulli(0.3)) out.insert(s);
    return out;
  };
  for (std::size_t n = 0; n < samples; ++n) {
    std::vector<mwpx::TaggedToken> tagged;
    std::vector<bool> entities;
    std::size_t len = rng.below(25), next_number = 0;
    for (std::size_t i = 0; i < len; ++i) {
      if (rng.bernoulli(0.15)) {
        tagged.push_back({"number" + std::to_string(next_number++), Tag::NumTok, ""});
        entities.push_back(false);
      } else {
        Tag tag = word_tags[rng.below(8)];
        tagged.push_back({"w" + std::to_string(i), tag, ""});
        entities.push_back(tag == Tag::Propn && rng.bernoulli(0.5));
      }
    }
    auto a = random_classes(), b = random_classes();
    std::set<Selector> ab = a;
    ab.insert(b.begin(), b.end());
    mwpx::PerturbationSpec remove_a{"a", "a", mwpx::PerturbMode::Remove, a};
    mwpx::PerturbationSpec remove_b{"b", "b", mwpx::PerturbMode::Remove, b};
    mwpx::PerturbationSpec remove_ab{"ab", "ab", mwpx::PerturbMode::Remove, ab};
    mwpx::PerturbationSpec keep_a{"ka", "ka", mwpx::PerturbMode::KeepOnly, a};

    auto ra = mwpx::filter_tokens(tagged, entities, remove_a);
    auto ka = mwpx::filter_tokens(tagged, entities, keep_a);

    Tokens numbers, ra_numbers, ka_numbers;
    for (const auto& t : tagged)
      if (t.tag == Tag::NumTok) numbers.push_back(t.surface);
    for (const auto& t : ra)
      if (mwpx::is_number_token(t)) ra_numbers.push_back(t);
    for (const auto& t : ka)
      if (mwpx::is_number_token(t)) ka_numbers.push_back(t);
    if (ra_numbers != numbers || ka_numbers != numbers) ++r.number_preservation;

    auto is_subsequence = [&](const Tokens& sub) {
      std::size_t j = 0;
      for (const auto& t : tagged)
        if (j < sub.size() && sub[j] == t.surface) ++j;
      return j == sub.size();
    };
    if (!is_subsequence(ra) || !is_subsequence(ka)) ++r.subsequence;

    // REMOVE(A ∪ B)(x) = REMOVE(B)(REMOVE(A)(x)), with REMOVE(A) computed here.
    std::vector<mwpx::TaggedToken> after_a;
    std::vector<bool> after_a_entities;
    Tokens after_a_surface;
    for (std::size_t k = 0; k < tagged.size(); ++k) {
      if (tagged[k].tag == Tag::NumTok || !selected(tagged[k], entities[k], a)) {
        after_a.push_back(tagged[k]);
        after_a_entities.push_back(entities[k]);
        after_a_surface.push_back(tagged[k].surface);
      }
    }
    if (ra != after_a_surface ||
        mwpx::filter_tokens(after_a, after_a_entities, remove_b) != mwpx::filter_tokens(tagged, entities, remove_ab))
      ++r.remove_union;

    // KEEP_ONLY keeps exactly the number tokens and the selected tokens.
    Tokens expected_kept;
    for (std::size_t k = 0; k < tagged.size(); ++k)
      if (tagged[k].tag == Tag::NumTok || selected(tagged[k], entities[k], a)) expected_kept.push_back(tagged[k].surface);
    if (ka != expected_kept) ++r.keep_only_purity;
    ++r.samples;
  }
  return r;
}

// ---------------------------------------------------------------- reduction scenarios

inline mwpx::MathWordProblem problem_from(const std::string& text, std::vector<double> numbers) {
  mwpx::MathWordProblem p;
  p.id = "stub";
  p.tokens = mwpx::tokenize(text);
  p.numbers = std::move(numbers);
  p.equation = mwpx::PrefixEquation::from_string("- number0 number1");
  p.answer = mwpx::evaluate(p.equation, p.numbers);
  p.category = mwpx::Category::Sub;
  return p;
}

inline const Tokens kGold = {"-", "number0", "number1"};
inline const Tokens kWrong = {"+", "number0", "number1"};

/// The worked reduction example: a stub whose confidence grows as the
/// types in `order` disappear, and which stays correct while "bruce" is
/// present.
inline mwpx::MathWordProblem emily_problem() {
  auto p = problem_from(
      "Emily collects number0 cards . Emily 's father gives Emily number1 more . Bruce has number2 apples . "
      "How many cards does Emily have ?",
      {10, 3, 4});
  p.id = "emily";
  return p;
}

inline const Tokens kEmilyOrder = {"does", "has",  "how",  "collects", "'s", "emily", "gives",
                                   "more", "father", "have", "many",     "?",  "cards", "bruce"};

inline oracle::StubPredictor emily_stub() {
  auto score = [](const Tokens& tokens) {
    std::set<std::string> present;
    for (const auto& t : tokens) present.insert(oracle::lower(t));
    double c = 0.2;
    for (std::size_t i = 0; i < kEmilyOrder.size(); ++i)
      if (!present.count(kEmilyOrder[i])) c += 0.05 * std::pow(0.8, static_cast<double>(i));
    return c;
  };
  auto correct = [](const Tokens& tokens) {
    return std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) { return oracle::lower(t) == "bruce"; });
  };
  return {kGold, kWrong, score, correct};
}

struct Scenario {
  mwpx::MathWordProblem problem;
  std::unique_ptr<oracle::StubPredictor> model;
};

/// Random sentence over at most `max_types` word types with small integer
/// confidence weights, so ties between candidates are common.
inline Scenario random_scenario(mwpx::Rng& rng, std::size_t max_types) {
  static const Tokens vocab = {"alpha", "Beta", "gamma", "delta", "eps", "zeta", "eta", "theta", "?", "."};
  std::size_t types = 1 + rng.below(max_types);
  Tokens chosen(vocab.begin(), vocab.begin() + static_cast<std::ptrdiff_t>(types));
  std::string text;
  std::size_t len = 2 + rng.below(14);
  bool n0 = false, n1 = false;
  for (std::size_t i = 0; i < len; ++i) {
    if (!n0 && rng.bernoulli(0.2)) {
      text += "number0 ";
      n0 = true;
    } else if (n0 && !n1 && rng.bernoulli(0.3)) {
      text += "number1 ";
      n1 = true;
    }
    std::string w = chosen[rng.below(types)];
    if (rng.bernoulli(0.2)) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    text += w + " ";
  }
  if (!n0) text += "number0 ";
  if (!n1) text += "number1";

  std::map<std::string, double> weight;
  for (const auto& w : chosen) weight[oracle::lower(w)] = static_cast<double>(rng.below(4));
  std::set<std::string> required;
  for (const auto& w : chosen)
    if (rng.bernoulli(0.25)) required.insert(oracle::lower(w));

  auto score = [weight](const Tokens& tokens) {
    std::set<std::string> present;
    for (const auto& t : tokens) present.insert(oracle::lower(t));
    double c = 0.1;
    for (const auto& [w, v] : weight)
      if (!present.count(w)) c += 0.05 * v;
    return c;
  };
  auto correct = [required](const Tokens& tokens) {
    std::set<std::string> present;
    for (const auto& t : tokens) present.insert(oracle::lower(t));
    return std::all_of(required.begin(), required.end(), [&](const std::string& w) { return present.count(w) > 0; });
  };
  Scenario s{problem_from(text, {9, 4}), std::make_unique<oracle::StubPredictor>(kGold, kWrong, score, correct)};
  s.problem.id = "scenario";
  return s;
}

/// Compares a library trace with the exhaustive oracle trace.
inline bool traces_agree(const mwpx::ReductionTrace& t, const oracle::OracleTrace& o) {
  if (t.initially_correct != o.initially_correct || t.steps.size() != o.steps.size()) return false;
  if (t.removed_fraction != o.removed_fraction) return false;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& a = t.steps[i];
    const auto& b = o.steps[i];
    if (a.step_index != i + 1 || a.removed_word != b.word || a.occurrences != b.occurrences ||
        a.confidence_after != b.confidence || a.correct_after != b.correct || a.remaining_tokens != b.remaining)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------- frequency

/// Number of disagreements between top_words_report and a brute-force
/// recount of the same dataset.
inline std::size_t frequency_mismatches(const mwpx::Dataset& ds, std::size_t n) {
  std::size_t bad = 0;
  auto report = mwpx::top_words_report(ds, n);
  std::array<std::vector<std::string>, 5> tops;
  std::array<std::map<std::string, std::size_t>, 5> counts;
  for (auto c : mwpx::kAllCategories) {
    auto ci = static_cast<std::size_t>(c);
    counts[ci] = oracle::document_counts(ds, c);
    if (mwpx::word_document_counts(ds, c) != counts[ci]) ++bad;
    tops[ci] = oracle::top_n(counts[ci], n);
  }
  std::set<std::string> everywhere(tops[0].begin(), tops[0].end());
  for (std::size_t ci = 1; ci < 5; ++ci) {
    std::set<std::string> next;
    for (const auto& w : tops[ci])
      if (everywhere.count(w)) next.insert(w);
    everywhere = next;
  }
  if (report.excluded_words != everywhere) ++bad;
  for (auto c : mwpx::kAllCategories) {
    auto ci = static_cast<std::size_t>(c);
    const auto& got = report.categories[ci];
    std::size_t size = 0;
    for (const auto& p : ds) size += p.category == c;
    if (got.category != c || got.problems != size) ++bad;
    std::vector<std::string> expected;
    for (const auto& w : tops[ci])
      if (!everywhere.count(w)) expected.push_back(w);
    if (got.words.size() != expected.size()) {
      ++bad;
      continue;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& wc = got.words[i];
      if (wc.word != expected[i] || wc.count != counts[ci].at(expected[i]) ||
          wc.pct != static_cast<double>(wc.count) / static_cast<double>(size))
        ++bad;
    }
  }
  return bad;
}

}  // namespace checks
