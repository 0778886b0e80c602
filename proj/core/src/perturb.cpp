#include "mwpx/perturb.hpp"

#include <vector>

#include "mwpx/error.hpp"

namespace mwpx {

namespace {

bool tag_selected(Tag tag, const std::set<Selector>& classes) {
  switch (tag) {
    case Tag::Noun: return classes.count(Selector::Noun) > 0;
    case Tag::Propn: return classes.count(Selector::Propn) > 0;
    case Tag::Verb: return classes.count(Selector::Verb) > 0;
    case Tag::Adj: return classes.count(Selector::Adj) > 0;
    case Tag::Wh: return classes.count(Selector::Wh) > 0;
    case Tag::Prep: return classes.count(Selector::Prep) > 0;
    case Tag::Punct: return classes.count(Selector::Punct) > 0;
    case Tag::Other: return classes.count(Selector::Other) > 0;
    case Tag::NumTok: return false;
  }
  return false;
}

PerturbationSpec make(std::string name, std::string label, PerturbMode mode, std::set<Selector> classes) {
  return PerturbationSpec{std::move(name), std::move(label), mode, std::move(classes)};
}

MathWordProblem with_tokens(const MathWordProblem& problem, std::vector<std::string> tokens) {
  MathWordProblem out = problem;
  out.tokens = std::move(tokens);
  out.flags.empty = out.tokens.empty();
  return out;
}

}  // namespace

std::string_view to_string(Selector s) noexcept {
  switch (s) {
    case Selector::Noun: return "NOUN";
    case Selector::Propn: return "PROPN";
    case Selector::Verb: return "VERB";
    case Selector::Adj: return "COMMON_ADJ";
    case Selector::Wh: return "WH_ADJ";
    case Selector::Prep: return "PREP";
    case Selector::Punct: return "PUNCT";
    case Selector::Other: return "OTHER";
    case Selector::NamedEntity: return "NAMED_ENTITY";
  }
  return "?";
}

const std::vector<PerturbationSpec>& standard_variants() {
  using enum Selector;
  static const std::vector<PerturbationSpec> variants = {
      make("common_adjectives_removed", "common adjectives removed", PerturbMode::Remove, {Adj}),
      make("wh_adjectives_removed", "wh-adjectives removed", PerturbMode::Remove, {Wh}),
      make("all_adjectives_removed", "all adjectives removed", PerturbMode::Remove, {Adj, Wh}),
      make("named_entities_removed", "named entities removed", PerturbMode::Remove, {NamedEntity}),
      make("nouns_removed", "nouns removed", PerturbMode::Remove, {Noun, Propn}),
      make("prepositions_removed", "prepositions removed", PerturbMode::Remove, {Prep}),
      make("verbs_removed", "verbs removed", PerturbMode::Remove, {Verb}),
      make("nouns_and_verbs_removed", "nouns and verbs removed", PerturbMode::Remove, {Noun, Propn, Verb}),
      make("prepositions_and_verbs_removed", "prepositions and verbs removed", PerturbMode::Remove, {Prep, Verb}),
      make("only_nouns_and_number_tokens", "only nouns and number tokens remaining", PerturbMode::KeepOnly,
           {Noun, Propn}),
      make("only_prepositions_and_number_tokens", "only prepositions and number tokens remaining",
           PerturbMode::KeepOnly, {Prep}),
      make("only_verbs_and_number_tokens", "only verbs and number tokens remaining", PerturbMode::KeepOnly, {Verb}),
      make("all_words_except_number_tokens_removed", "all words except number tokens removed",
           PerturbMode::KeepOnly, {}),
  };
  return variants;
}

const PerturbationSpec& variant_by_name(std::string_view name) {
  for (const auto& v : standard_variants())
    if (v.name == name) return v;
  throw Error(ErrorCode::InvalidArgument, "unknown variant '" + std::string(name) + "'");
}

std::vector<std::string> filter_tokens(std::span<const TaggedToken> tagged, const std::vector<bool>& entities,
                                       const PerturbationSpec& spec) {
  if (!entities.empty() && entities.size() != tagged.size())
    throw Error(ErrorCode::InvalidArgument, "named-entity mask length differs from token count");
  const bool use_entities = spec.classes.count(Selector::NamedEntity) > 0;
  std::vector<std::string> out;
  out.reserve(tagged.size());
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    const auto& tok = tagged[i];
    if (tok.tag == Tag::NumTok) {
      out.push_back(tok.surface);
      continue;
    }
    bool matched = tag_selected(tok.tag, spec.classes) || (use_entities && !entities.empty() && entities[i]);
    bool keep = spec.mode == PerturbMode::Remove ? !matched : matched;
    if (keep) out.push_back(tok.surface);
  }
  return out;
}

MathWordProblem apply_perturbation(const MathWordProblem& problem, const PerturbationSpec& spec,
                                   const TaggerBackend& backend) {
  auto tagged = tag_tokens(problem.tokens, backend);
  std::vector<bool> entities;
  if (spec.classes.count(Selector::NamedEntity)) entities = detect_named_entities(tagged);
  return with_tokens(problem, filter_tokens(tagged, entities, spec));
}

Dataset apply_perturbation(std::span<const MathWordProblem> dataset, const PerturbationSpec& spec,
                           const TaggerBackend& backend) {
  Dataset out;
  out.reserve(dataset.size());
  for (const auto& p : dataset) out.push_back(apply_perturbation(p, spec, backend));
  return out;
}

std::map<std::string, Dataset> generate_suite(std::span<const MathWordProblem> dataset,
                                              const TaggerBackend& backend) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyInput, "cannot perturb an empty dataset");
  std::map<std::string, Dataset> out;
  for (const auto& spec : standard_variants()) out[spec.name].reserve(dataset.size());
  for (const auto& problem : dataset) {
    auto tagged = tag_tokens(problem.tokens, backend);
    auto entities = detect_named_entities(tagged);
    for (const auto& spec : standard_variants())
      out[spec.name].push_back(with_tokens(problem, filter_tokens(tagged, entities, spec)));
  }
  return out;
}

}  // namespace mwpx
