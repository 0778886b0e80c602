#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "mwpx/equation.hpp"
#include "mwpx/error.hpp"
#include "mwpx/rng.hpp"
#include "mwpx/tagger.hpp"

namespace mwpx {

namespace {

constexpr std::size_t kTags = kAllTags.size();
constexpr std::size_t kTagdictMinCount = 20;
constexpr double kTagdictMinShare = 0.97;

std::string shape(std::string_view w) {
  if (is_number_token(w)) return "!NUM";
  std::string out(w);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string suffix(std::string_view w, std::size_t n) {
  return std::string(w.size() > n ? w.substr(w.size() - n) : w);
}

std::string context_word(std::span<const std::string> tokens, long i) {
  if (i < 0) return "-START-";
  if (i >= static_cast<long>(tokens.size())) return "-END-";
  return shape(tokens[static_cast<std::size_t>(i)]);
}

}  // namespace

std::vector<std::string> AveragedPerceptronTagger::features(std::span<const std::string> tokens, std::size_t i,
                                                            Tag prev, Tag prev2) {
  const long li = static_cast<long>(i);
  const std::string w = context_word(tokens, li);
  const std::string p(to_string(prev));
  const std::string p2(to_string(prev2));
  const std::string& raw = tokens[i];
  std::vector<std::string> f;
  f.reserve(16);
  f.emplace_back("bias");
  f.push_back("i suffix " + suffix(w, 3));
  f.push_back("i pref1 " + w.substr(0, 1));
  f.push_back("i-1 tag " + p);
  f.push_back("i-2 tag " + p2);
  f.push_back("i tag+i-2 tag " + p + " " + p2);
  f.push_back("i word " + w);
  f.push_back("i-1 tag+i word " + p + " " + w);
  f.push_back("i-1 word " + context_word(tokens, li - 1));
  f.push_back("i-1 suffix " + suffix(context_word(tokens, li - 1), 3));
  f.push_back("i-2 word " + context_word(tokens, li - 2));
  f.push_back("i+1 word " + context_word(tokens, li + 1));
  f.push_back("i+1 suffix " + suffix(context_word(tokens, li + 1), 3));
  f.push_back("i+2 word " + context_word(tokens, li + 2));
  if (!raw.empty() && std::isupper(static_cast<unsigned char>(raw[0])))
    f.emplace_back(i == 0 ? "i cap initial" : "i cap");
  return f;
}

Tag AveragedPerceptronTagger::predict(const std::vector<std::string>& feats) const {
  std::array<double, kTags> scores{};
  for (const auto& f : feats) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t c = 0; c < kTags; ++c) scores[c] += it->second[c];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kTags; ++c)
    if (scores[c] > scores[best]) best = c;
  return static_cast<Tag>(best);
}

std::vector<Tag> AveragedPerceptronTagger::tag(std::span<const std::string> tokens) const {
  std::vector<Tag> out;
  out.reserve(tokens.size());
  Tag prev = Tag::Other, prev2 = Tag::Other;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Tag t;
    if (auto it = tagdict_.find(shape(tokens[i])); it != tagdict_.end())
      t = it->second;
    else
      t = predict(features(tokens, i, prev, prev2));
    out.push_back(t);
    prev2 = prev;
    prev = t;
  }
  return out;
}

AveragedPerceptronTagger AveragedPerceptronTagger::train(std::span<const TaggedSentence> sentences,
                                                         std::size_t iterations, std::uint64_t seed) {
  if (sentences.empty()) throw Error(ErrorCode::EmptyInput, "perceptron training needs at least one sentence");
  for (const auto& s : sentences) {
    if (s.tokens.size() != s.tags.size())
      throw Error(ErrorCode::InvalidArgument, "tagged sentence with mismatched token/tag counts");
  }

  AveragedPerceptronTagger model;

  std::map<std::string, std::array<std::size_t, kTags>> seen;
  for (const auto& s : sentences)
    for (std::size_t i = 0; i < s.tokens.size(); ++i) ++seen[shape(s.tokens[i])][static_cast<std::size_t>(s.tags[i])];
  for (const auto& [word, counts] : seen) {
    std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    auto top = std::max_element(counts.begin(), counts.end());
    if (total >= kTagdictMinCount && static_cast<double>(*top) / static_cast<double>(total) >= kTagdictMinShare)
      model.tagdict_[word] = static_cast<Tag>(top - counts.begin());
  }

  struct Stat {
    Weights totals{};
    std::array<std::size_t, kTags> stamps{};
  };
  std::unordered_map<std::string, Stat> stats;
  std::size_t instances = 0;

  auto update = [&](const std::vector<std::string>& feats, Tag truth, Tag guess) {
    auto bump = [&](const std::string& f, std::size_t c, double delta) {
      auto& w = model.weights_[f];
      auto& st = stats[f];
      st.totals[c] += static_cast<double>(instances - st.stamps[c]) * w[c];
      st.stamps[c] = instances;
      w[c] += delta;
    };
    for (const auto& f : feats) {
      bump(f, static_cast<std::size_t>(truth), 1.0);
      bump(f, static_cast<std::size_t>(guess), -1.0);
    }
  };

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t iter = 0; iter < iterations; ++iter) {
    for (std::size_t idx : order) {
      const auto& s = sentences[idx];
      Tag prev = Tag::Other, prev2 = Tag::Other;
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        Tag guess;
        if (auto it = model.tagdict_.find(shape(s.tokens[i])); it != model.tagdict_.end()) {
          guess = it->second;
        } else {
          auto feats = features(s.tokens, i, prev, prev2);
          guess = model.predict(feats);
          ++instances;
          if (guess != s.tags[i]) update(feats, s.tags[i], guess);
        }
        prev2 = prev;
        prev = guess;
      }
    }
    rng.shuffle(std::span(order));
  }

  for (auto& [f, w] : model.weights_) {
    auto& st = stats[f];
    for (std::size_t c = 0; c < kTags; ++c) {
      double total = st.totals[c] + static_cast<double>(instances - st.stamps[c]) * w[c];
      w[c] = instances ? total / static_cast<double>(instances) : w[c];
    }
  }
  return model;
}

}  // namespace mwpx
