#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <string_view>

#include "mwpx/tagger.hpp"

namespace mwpx {

namespace {

// Irregular inflections mapped straight to their base. Every value must be
// a fixed point of the suffix rules below. Forms of "be" and the modals are
// left alone so they are counted as their own words.
const std::map<std::string, std::string, std::less<>>& irregular_forms() {
  static const std::map<std::string, std::string, std::less<>> forms = {
      {"children", "child"}, {"men", "man"},       {"women", "woman"},   {"feet", "foot"},
      {"teeth", "tooth"},    {"mice", "mouse"},    {"geese", "goose"},   {"people", "person"},
      {"leaves", "leaf"},    {"knives", "knife"},  {"loaves", "loaf"},   {"shelves", "shelf"},
      {"halves", "half"},    {"wolves", "wolf"},   {"lives", "life"},    {"wives", "wife"},
      {"has", "have"},       {"had", "have"},      {"having", "have"},   {"does", "do"},
      {"did", "do"},         {"done", "do"},       {"doing", "do"},      {"gave", "give"},
      {"given", "give"},     {"bought", "buy"},    {"took", "take"},     {"taken", "take"},
      {"ate", "eat"},        {"eaten", "eat"},     {"ran", "run"},       {"sold", "sell"},
      {"spent", "spend"},    {"found", "find"},    {"made", "make"},     {"got", "get"},
      {"gotten", "get"},     {"went", "go"},       {"gone", "go"},       {"goes", "go"},
      {"came", "come"},      {"saw", "see"},       {"seen", "see"},      {"grew", "grow"},
      {"grown", "grow"},     {"kept", "keep"},     {"lost", "lose"},     {"won", "win"},
      {"paid", "pay"},       {"held", "hold"},     {"brought", "bring"}, {"caught", "catch"},
      {"threw", "throw"},    {"drew", "draw"},     {"drank", "drink"},   {"slept", "sleep"},
      {"wrote", "write"},    {"rode", "ride"},     {"flew", "fly"},      {"built", "build"},
      {"lent", "lend"},      {"sat", "sit"},       {"stood", "stand"},   {"fed", "feed"},
      {"told", "tell"},      {"thought", "think"}, {"left", "leave"},    {"sang", "sing"},
      {"drove", "drive"},    {"swam", "swim"},     {"began", "begin"},
      {"cookies", "cookie"}, {"pies", "pie"},      {"ties", "tie"},      {"dies", "die"},
      {"lies", "lie"},       {"movies", "movie"},
  };
  return forms;
}

bool is_vowel_at(std::string_view w, std::size_t i) {
  char c = w[i];
  if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return true;
  // 'y' acts as a vowel after a consonant
  return c == 'y' && i > 0 && !is_vowel_at(w, i - 1);
}

bool contains_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (is_vowel_at(w, i)) return true;
  return false;
}

// Porter's measure: number of vowel-consonant sequences.
int measure(std::string_view w) {
  int m = 0;
  std::size_t i = 0;
  while (i < w.size() && !is_vowel_at(w, i)) ++i;
  while (i < w.size()) {
    while (i < w.size() && is_vowel_at(w, i)) ++i;
    if (i >= w.size()) break;
    while (i < w.size() && !is_vowel_at(w, i)) ++i;
    ++m;
  }
  return m;
}

bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  std::size_t n = w.size();
  char last = w[n - 1];
  return !is_vowel_at(w, n - 3) && is_vowel_at(w, n - 2) && !is_vowel_at(w, n - 1) && last != 'w' &&
         last != 'x' && last != 'y';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string strip_plural(std::string w) {
  if (w.size() > 4 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  for (std::string_view s : {"xes", "zes", "ches", "shes"}) {
    if (w.size() > s.size() + 1 && ends_with(w, s)) return w.substr(0, w.size() - 2);
  }
  if (w.size() >= 4 && w.back() == 's') {
    char prev = w[w.size() - 2];
    if (prev != 's' && prev != 'u' && prev != 'i' && prev != '\'') return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string strip_verb_suffix(std::string w) {
  if (ends_with(w, "eed")) {
    if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
    return w;
  }
  std::string stem;
  if (ends_with(w, "ing") && contains_vowel(std::string_view(w).substr(0, w.size() - 3))) {
    stem = w.substr(0, w.size() - 3);
  } else if (ends_with(w, "ed") && contains_vowel(std::string_view(w).substr(0, w.size() - 2))) {
    stem = w.substr(0, w.size() - 2);
  } else {
    return w;
  }
  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel_at(stem, n - 1)) {
    char c = stem[n - 1];
    if (c != 'l' && c != 's' && c != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string normalize_once(const std::string& w) {
  if (auto it = irregular_forms().find(w); it != irregular_forms().end()) return it->second;
  if (!std::all_of(w.begin(), w.end(), [](unsigned char c) { return c >= 'a' && c <= 'z'; })) return w;
  return strip_verb_suffix(strip_plural(w));
}

}  // namespace

std::string normalize_word(std::string_view word) {
  std::string w(word);
  std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
  // Irregular bases are fixed points and every suffix rewrite shortens the
  // word, so the loop terminates; iterating to the fixed point is what makes
  // normalization idempotent.
  for (;;) {
    std::string next = normalize_once(w);
    if (next == w) return w;
    w = std::move(next);
  }
}

}  // namespace mwpx
