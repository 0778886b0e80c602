#include "mwpx/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lexicon_data.hpp"
#include "mwpx/equation.hpp"
#include "mwpx/error.hpp"

namespace mwpx {

namespace {

constexpr std::array<std::string_view, 9> kTagNames = {"NOUN", "PROPN", "VERB",  "ADJ",  "WH",
                                                       "PREP", "NUMTOK", "PUNCT", "OTHER"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool has_upper(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isupper(c); });
}

bool is_capitalized(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool sentence_initial(std::span<const std::string> tokens, std::size_t i) {
  if (i == 0) return true;
  const auto& prev = tokens[i - 1];
  return prev == "." || prev == "?" || prev == "!";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool is_month_or_weekday(std::string_view lowered) {
  static const std::set<std::string, std::less<>> kCalendar = {
      "january", "february", "march",  "april",   "may",      "june",     "july",   "august",  "september",
      "october", "november", "december", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday",
      "sunday"};
  return kCalendar.count(lowered) > 0;
}

}  // namespace

std::string_view to_string(Tag tag) noexcept { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<Tag> tag_from_string(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kTagNames.size(); ++i)
    if (kTagNames[i] == s) return static_cast<Tag>(i);
  return std::nullopt;
}

bool is_punctuation(std::string_view token) noexcept {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](unsigned char c) { return c < 0x80 && std::ispunct(c); });
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::MalformedRecord, "lexicon line " + std::to_string(line_no) + " has no tab");
    auto tag = tag_from_string(line.substr(tab + 1));
    if (!tag)
      throw Error(ErrorCode::MalformedRecord,
                  "lexicon line " + std::to_string(line_no) + ": unknown tag '" + line.substr(tab + 1) + "'");
    lex.set(line.substr(0, tab), *tag);
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const Lexicon& Lexicon::bundled() {
  static const Lexicon lex = parse(data::kBundledLexicon);
  return lex;
}

void Lexicon::set(std::string word, Tag tag) {
  if (has_upper(word))
    exact_[std::move(word)] = tag;
  else
    lower_[std::move(word)] = tag;
}

std::optional<Tag> Lexicon::exact(std::string_view surface) const {
  if (auto it = exact_.find(surface); it != exact_.end()) return it->second;
  return std::nullopt;
}

std::optional<Tag> Lexicon::lookup_lower(std::string_view lowered) const {
  if (auto it = lower_.find(lowered); it != lower_.end()) return it->second;
  return std::nullopt;
}

NameLexicon NameLexicon::parse(std::string_view text) {
  NameLexicon names;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    names.add(line);
  }
  return names;
}

NameLexicon NameLexicon::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const NameLexicon& NameLexicon::bundled() {
  static const NameLexicon names = parse(data::kBundledNames);
  return names;
}

void NameLexicon::add(std::string_view name) { names_.insert(lower(name)); }

bool NameLexicon::contains(std::string_view word) const { return names_.count(lower(word)) > 0; }

LexiconTagger::LexiconTagger() : LexiconTagger(Lexicon::bundled(), NameLexicon::bundled()) {}

LexiconTagger::LexiconTagger(Lexicon lexicon, NameLexicon names)
    : lexicon_(std::move(lexicon)), names_(std::move(names)) {}

std::vector<Tag> LexiconTagger::tag(std::span<const std::string> tokens) const {
  std::vector<Tag> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back(tag_one(tokens, i));
  return out;
}

Tag LexiconTagger::tag_one(std::span<const std::string> tokens, std::size_t i) const {
  const std::string& surface = tokens[i];
  if (is_number_token(surface)) return Tag::NumTok;
  if (is_punctuation(surface)) return Tag::Punct;
  if (auto t = lexicon_.exact(surface)) return *t;

  const std::string low = lower(surface);
  const bool initial = sentence_initial(tokens, i);
  const bool cap = is_capitalized(surface);
  const auto known = lexicon_.lookup_lower(low);

  if (cap && names_.contains(low)) {
    // "Will" opening a question is a modal; "Will" elsewhere is a person.
    if (initial && known) return *known;
    return Tag::Propn;
  }
  if (known) return *known;
  if (cap && !initial) return Tag::Propn;

  if (ends_with(low, "ly")) return Tag::Other;
  if (ends_with(low, "ing") || ends_with(low, "ed")) return Tag::Verb;
  for (std::string_view suffix : {"est", "ful", "ous", "ive", "able", "ible", "less", "ic"}) {
    if (low.size() > suffix.size() + 2 && ends_with(low, suffix)) return Tag::Adj;
  }
  return Tag::Noun;
}

const TaggerBackend& default_backend() {
  static const LexiconTagger backend;
  return backend;
}

std::vector<TaggedToken> tag_tokens(std::span<const std::string> tokens, const TaggerBackend& backend) {
  auto tags = backend.tag(tokens);
  if (tags.size() != tokens.size()) {
    throw Error(ErrorCode::InvalidArgument, "backend '" + backend.name() + "' returned " +
                                                std::to_string(tags.size()) + " tags for " +
                                                std::to_string(tokens.size()) + " tokens");
  }
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Tag tag = tags[i];
    if (is_number_token(tokens[i]))
      tag = Tag::NumTok;
    else if (tag == Tag::NumTok)
      tag = Tag::Other;
    out.push_back(TaggedToken{tokens[i], tag, normalize_word(tokens[i])});
  }
  return out;
}

std::vector<bool> detect_named_entities(std::span<const TaggedToken> tagged, const NameLexicon& names) {
  std::vector<bool> mask(tagged.size(), false);
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    const auto& tok = tagged[i];
    if (tok.tag != Tag::Propn) continue;
    const std::string low = lower(tok.surface);
    if (is_month_or_weekday(low)) continue;
    bool initial = i == 0 || tagged[i - 1].surface == "." || tagged[i - 1].surface == "?" ||
                   tagged[i - 1].surface == "!";
    mask[i] = names.contains(low) || (is_capitalized(tok.surface) && !initial);
  }
  return mask;
}

}  // namespace mwpx
