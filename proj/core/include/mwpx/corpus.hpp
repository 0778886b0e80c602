#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwpx/equation.hpp"

namespace mwpx {

enum class Category { Add, Sub, Mul, Div, Multi };

inline constexpr std::array<Category, 5> kAllCategories = {Category::Add, Category::Sub, Category::Mul,
                                                           Category::Div, Category::Multi};

std::string_view to_string(Category c) noexcept;
std::optional<Category> category_from_string(std::string_view s) noexcept;

struct ProblemFlags {
  // Gold equation evaluates to something other than the stored answer.
  bool answer_mismatch = false;
  // A perturbation removed every token.
  bool empty = false;

  friend bool operator==(const ProblemFlags&, const ProblemFlags&) = default;
};

struct MathWordProblem {
  std::string id;
  std::vector<std::string> tokens;  // numerals already masked as "numberk"
  std::vector<double> numbers;      // numbers[k] binds "numberk"
  PrefixEquation equation;
  double answer = 0.0;
  Category category = Category::Add;
  ProblemFlags flags;

  std::string question() const;

  friend bool operator==(const MathWordProblem&, const MathWordProblem&) = default;
};

using Dataset = std::vector<MathWordProblem>;

struct MaskedText {
  std::vector<std::string> tokens;
  std::vector<double> numbers;
};

/// Splits on whitespace and separates punctuation into single-character
/// tokens. Existing "numberk" tokens and "'s"-style clitics stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// Replaces each maximal numeral (digits with at most one interior decimal
/// point) with "numberk", k counting occurrences left to right. A leading
/// '-' is never part of the numeral.
MaskedText mask_numbers(std::string_view raw_text);

/// Classifies an arity-valid equation: one operator maps to its category,
/// two or more to Multi. Throws DegenerateEquation for zero operators.
Category classify_operation(const PrefixEquation& equation);

enum class DataFormat { Jsonl, Csv };

/// Infers the format from the extension (.csv, otherwise JSONL).
DataFormat format_for_path(const std::filesystem::path& path);

struct LoadOptions {
  // Receives one line per record whose answer disagrees with its equation.
  std::ostream* warnings = nullptr;
};

Dataset load_dataset(const std::filesystem::path& path, DataFormat format, const LoadOptions& options = {});
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_jsonl(std::istream& in, const LoadOptions& options = {});
Dataset parse_csv(std::istream& in, const LoadOptions& options = {});

/// Writes the pre-masked JSONL form (question holds number tokens, numbers
/// field present). load_dataset() reads it back verbatim.
void write_jsonl(std::ostream& out, std::span<const MathWordProblem> dataset);
void save_dataset(const std::filesystem::path& path, std::span<const MathWordProblem> dataset);

/// Fraction per category over all five categories; throws EmptyInput.
std::array<double, 5> operation_distribution(std::span<const MathWordProblem> dataset);
std::array<std::size_t, 5> operation_counts(std::span<const MathWordProblem> dataset);

struct CVSplit {
  std::size_t fold_index = 0;
  std::vector<std::size_t> train;  // indices into the dataset, ascending
  std::vector<std::size_t> test;
};

/// Seeded shuffle followed by round-robin assignment, so test-set sizes
/// differ by at most one and the k test sets partition the dataset.
std::vector<CVSplit> split_cv_folds(std::span<const MathWordProblem> dataset, std::size_t k, std::uint64_t seed);

/// Subset of `dataset` at `indices`, in index order.
Dataset select(std::span<const MathWordProblem> dataset, std::span<const std::size_t> indices);

/// Stable FNV-1a hash over the canonical content of every record, as hex.
std::string dataset_hash(std::span<const MathWordProblem> dataset);

}  // namespace mwpx
