#include "mwpx/synth.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <string_view>

#include "mwpx/rng.hpp"

namespace mwpx {

namespace {

struct Template {
  Category category;
  // Placeholders: {N} {M} names, {I} plural item, {S} singular item,
  // {A} {B} numerals (A always appears first in the text).
  std::string_view text;
  std::string_view equation;
};

// Numeral constraints per template.
enum class Shape { Any, AGreater, BGreater, ADivisible };

struct Entry {
  Template tmpl;
  Shape shape;
};

const std::array<Entry, 20> kTemplates = {{
    {{Category::Add, "{N} has {A} {I} . {M} gives {N} {B} more {I} . How many {I} does {N} have now ?", "+ number0 number1"}, Shape::Any},
    {{Category::Add, "{N} picked {A} {I} on Monday and {B} {I} on Tuesday . How many {I} did {N} pick in total ?", "+ number0 number1"}, Shape::Any},
    {{Category::Add, "There are {A} {I} in the box . {N} puts {B} more {I} in the box . How many {I} are in the box now ?", "+ number0 number1"}, Shape::Any},
    {{Category::Add, "{N} scored {A} points and {M} scored {B} points . How many points did they score altogether ?", "+ number0 number1"}, Shape::Any},
    {{Category::Add, "{N} found {A} {I} at the park . Then {N} bought {B} {I} at the store . How many {I} does {N} have together ?", "+ number0 number1"}, Shape::Any},
    {{Category::Sub, "{N} had {A} {I} . {N} gave {B} {I} to {M} . How many {I} does {N} have left ?", "- number0 number1"}, Shape::AGreater},
    {{Category::Sub, "{N} bought {A} {I} and lost {B} of them . How many {I} are left ?", "- number0 number1"}, Shape::AGreater},
    {{Category::Sub, "{N} has {A} {I} and {M} has {B} {I} . How many more {I} does {N} have than {M} ?", "- number0 number1"}, Shape::AGreater},
    {{Category::Sub, "{N} had some {I} . {M} gave {N} {A} {I} . Now {N} has {B} {I} . How many {I} did {N} have at first ?", "- number1 number0"}, Shape::BGreater},
    {{Category::Sub, "There were {A} {I} on the shelf . {N} took away {B} {I} . How many {I} remain on the shelf ?", "- number0 number1"}, Shape::AGreater},
    {{Category::Mul, "Each box holds {A} {I} . {N} has {B} boxes . How many {I} does {N} have in all ?", "* number0 number1"}, Shape::Any},
    {{Category::Mul, "{N} buys {A} packs of {I} . Each pack has {B} {I} . How many {I} did {N} buy ?", "* number0 number1"}, Shape::Any},
    {{Category::Mul, "One {S} costs {A} dollars . How many dollars do {B} {I} cost ?", "* number0 number1"}, Shape::Any},
    {{Category::Mul, "{N} reads {A} pages every day for {B} days . How many pages did {N} read ?", "* number0 number1"}, Shape::Any},
    {{Category::Mul, "There are {A} rows of {I} with {B} {I} in each row . How many {I} are there ?", "* number0 number1"}, Shape::Any},
    {{Category::Div, "{N} has {A} {I} and wants to share them equally among {B} friends . How many {I} does each friend get ?", "/ number0 number1"}, Shape::ADivisible},
    {{Category::Div, "{A} {I} are packed into bags of {B} each . How many bags are needed ?", "/ number0 number1"}, Shape::ADivisible},
    {{Category::Div, "{N} paid {A} dollars for {B} {I} . How much did each {S} cost ?", "/ number0 number1"}, Shape::ADivisible},
    {{Category::Div, "{N} read {A} pages in {B} days , reading the same number each day . How many pages did {N} read per day ?", "/ number0 number1"}, Shape::ADivisible},
    {{Category::Div, "{M} splits {A} {I} evenly into {B} groups . How many {I} are in each group ?", "/ number0 number1"}, Shape::ADivisible},
}};

const std::array<std::string_view, 16> kNames = {"Tom",  "Emily", "Jake",  "Sara",  "Bruce", "Amy",
                                                 "Mike", "Lisa",  "Sam",   "Grace", "Ben",   "Kate",
                                                 "Dan",  "Molly", "Tommy", "Julia"};

const std::array<std::pair<std::string_view, std::string_view>, 10> kItems = {{
    {"apple", "apples"},   {"marble", "marbles"},   {"card", "cards"},     {"book", "books"},
    {"cookie", "cookies"}, {"pencil", "pencils"},   {"balloon", "balloons"}, {"sticker", "stickers"},
    {"orange", "oranges"}, {"egg", "eggs"},
}};

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

Dataset make_synthetic_corpus(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  Dataset out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Cycle categories so the four classes stay balanced.
    const std::size_t category = i % 4;
    const Entry& e = kTemplates[category * 5 + rng.below(5)];

    std::size_t n = rng.below(kNames.size());
    std::size_t m = (n + 1 + rng.below(kNames.size() - 1)) % kNames.size();
    const auto& item = kItems[rng.below(kItems.size())];
    long a = 2 + static_cast<long>(rng.below(49));
    long b = 2 + static_cast<long>(rng.below(49));
    switch (e.shape) {
      case Shape::AGreater:
        if (a == b) ++a;
        if (a < b) std::swap(a, b);
        break;
      case Shape::BGreater:
        if (a == b) ++b;
        if (b < a) std::swap(a, b);
        break;
      case Shape::ADivisible:
        b = 2 + static_cast<long>(rng.below(11));
        a = b * (2 + static_cast<long>(rng.below(12)));
        break;
      case Shape::Any: break;
    }

    std::string text(e.tmpl.text);
    replace_all(text, "{N}", kNames[n]);
    replace_all(text, "{M}", kNames[m]);
    replace_all(text, "{I}", item.second);
    replace_all(text, "{S}", item.first);
    replace_all(text, "{A}", std::to_string(a));
    replace_all(text, "{B}", std::to_string(b));

    auto masked = mask_numbers(text);
    MathWordProblem p;
    char id[32];
    std::snprintf(id, sizeof id, "synth-%04zu", i);
    p.id = id;
    p.tokens = std::move(masked.tokens);
    p.numbers = std::move(masked.numbers);
    p.equation = PrefixEquation::from_string(e.tmpl.equation);
    p.answer = evaluate(p.equation, p.numbers);
    p.category = classify_operation(p.equation);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mwpx
