#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mwpx {

enum class Tag : std::uint8_t { Noun, Propn, Verb, Adj, Wh, Prep, NumTok, Punct, Other };

inline constexpr std::array<Tag, 9> kAllTags = {Tag::Noun, Tag::Propn, Tag::Verb,  Tag::Adj,  Tag::Wh,
                                                Tag::Prep, Tag::NumTok, Tag::Punct, Tag::Other};

std::string_view to_string(Tag tag) noexcept;
std::optional<Tag> tag_from_string(std::string_view s) noexcept;

struct TaggedToken {
  std::string surface;
  Tag tag = Tag::Other;
  std::string normalized;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

/// Maps a whole sentence to one tag per token. Implementations must be
/// deterministic and safe to call concurrently once constructed.
class TaggerBackend {
 public:
  virtual ~TaggerBackend() = default;
  virtual std::string name() const = 0;
  virtual std::vector<Tag> tag(std::span<const std::string> tokens) const = 0;
};

/// Adapter for external taggers (or test stubs) given as a callable.
class FunctionBackend final : public TaggerBackend {
 public:
  using Fn = std::function<std::vector<Tag>(std::span<const std::string>)>;
  FunctionBackend(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name() const override { return name_; }
  std::vector<Tag> tag(std::span<const std::string> tokens) const override { return fn_(tokens); }

 private:
  std::string name_;
  Fn fn_;
};

/// word -> tag. Entries whose key contains an uppercase letter match that
/// exact surface form; all other entries match case-insensitively.
class Lexicon {
 public:
  Lexicon() = default;

  /// "word<TAB>TAG" per line; blank lines and lines starting with '#' are skipped.
  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);
  static const Lexicon& bundled();

  void set(std::string word, Tag tag);
  std::optional<Tag> exact(std::string_view surface) const;
  std::optional<Tag> lookup_lower(std::string_view lowered) const;
  std::size_t size() const noexcept { return exact_.size() + lower_.size(); }

 private:
  std::map<std::string, Tag, std::less<>> exact_;
  std::map<std::string, Tag, std::less<>> lower_;
};

/// Lowercased person first names; one name per line in files.
class NameLexicon {
 public:
  NameLexicon() = default;
  static NameLexicon parse(std::string_view text);
  static NameLexicon load(const std::filesystem::path& path);
  static const NameLexicon& bundled();

  void add(std::string_view name);
  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::set<std::string, std::less<>> names_;
};

/// Default backend: closed-class lexicon, first-name list, capitalization,
/// then suffix rules for out-of-lexicon words.
class LexiconTagger final : public TaggerBackend {
 public:
  LexiconTagger();
  LexiconTagger(Lexicon lexicon, NameLexicon names);

  std::string name() const override { return "lexicon"; }
  std::vector<Tag> tag(std::span<const std::string> tokens) const override;

  const Lexicon& lexicon() const noexcept { return lexicon_; }
  const NameLexicon& names() const noexcept { return names_; }

 private:
  Tag tag_one(std::span<const std::string> tokens, std::size_t i) const;

  Lexicon lexicon_;
  NameLexicon names_;
};

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
};

/// Greedy left-to-right averaged perceptron over word-shape and tag-history
/// features. Construct with train(); the trained object is immutable.
class AveragedPerceptronTagger final : public TaggerBackend {
 public:
  static AveragedPerceptronTagger train(std::span<const TaggedSentence> sentences, std::size_t iterations,
                                        std::uint64_t seed);

  std::string name() const override { return "perceptron"; }
  std::vector<Tag> tag(std::span<const std::string> tokens) const override;

  std::size_t feature_count() const noexcept { return weights_.size(); }

 private:
  using Weights = std::array<double, kAllTags.size()>;

  static std::vector<std::string> features(std::span<const std::string> tokens, std::size_t i, Tag prev,
                                           Tag prev2);
  Tag predict(const std::vector<std::string>& feats) const;

  std::unordered_map<std::string, Weights> weights_;
  // Words seen with a single tag often enough to skip scoring.
  std::unordered_map<std::string, Tag> tagdict_;
};

/// The shared default backend instance.
const TaggerBackend& default_backend();

/// Tags the full sentence once. Number tokens always receive NumTok and no
/// other token does, whatever the backend says.
std::vector<TaggedToken> tag_tokens(std::span<const std::string> tokens, const TaggerBackend& backend);

/// Lowercase, lemmatize (irregular forms, plural and verb inflection), then
/// strip remaining inflectional suffixes. Idempotent.
std::string normalize_word(std::string_view word);

/// Marks person-name tokens: PROPN tokens that are in the first-name list,
/// or capitalized away from sentence start, excluding month and weekday names.
std::vector<bool> detect_named_entities(std::span<const TaggedToken> tagged,
                                        const NameLexicon& names = NameLexicon::bundled());

bool is_punctuation(std::string_view token) noexcept;

}  // namespace mwpx
