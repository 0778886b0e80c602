#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwpx/corpus.hpp"
#include "mwpx/tagger.hpp"

namespace mwpx {

/// What a perturbation matches: one coarse tag or the named-entity mask.
/// "Common adjectives" is Tag::Adj and "wh-adjectives" is Tag::Wh.
enum class Selector { Noun, Propn, Verb, Adj, Wh, Prep, Punct, Other, NamedEntity };

std::string_view to_string(Selector s) noexcept;

enum class PerturbMode { Remove, KeepOnly };

struct PerturbationSpec {
  std::string name;   // stable slug, e.g. "nouns_removed"
  std::string label;  // report label, e.g. "nouns removed"
  PerturbMode mode = PerturbMode::Remove;
  std::set<Selector> classes;
};

/// The thirteen ablation variants, in report order.
const std::vector<PerturbationSpec>& standard_variants();

/// Throws InvalidArgument for an unknown slug.
const PerturbationSpec& variant_by_name(std::string_view name);

/// Core filter over precomputed tags: REMOVE drops tokens matched by any
/// class; KEEP_ONLY keeps matched tokens. Number tokens always survive.
/// `entities` must be empty or the same length as `tagged`.
std::vector<std::string> filter_tokens(std::span<const TaggedToken> tagged, const std::vector<bool>& entities,
                                       const PerturbationSpec& spec);

/// Tags the original tokens once and filters them. Everything except the
/// token sequence is carried over; an empty result is flagged.
MathWordProblem apply_perturbation(const MathWordProblem& problem, const PerturbationSpec& spec,
                                   const TaggerBackend& backend = default_backend());

Dataset apply_perturbation(std::span<const MathWordProblem> dataset, const PerturbationSpec& spec,
                           const TaggerBackend& backend = default_backend());

/// Every standard variant applied to the dataset, keyed by slug.
std::map<std::string, Dataset> generate_suite(std::span<const MathWordProblem> dataset,
                                              const TaggerBackend& backend = default_backend());

}  // namespace mwpx
