#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwpx/corpus.hpp"
#include "mwpx/solver.hpp"
#include "mwpx/tagger.hpp"

namespace mwpx {

struct CategoryTally {
  std::size_t count = 0;
  std::size_t correct = 0;

  double accuracy() const noexcept {
    return count ? static_cast<double>(correct) / static_cast<double>(count) : 0.0;
  }
  friend bool operator==(const CategoryTally&, const CategoryTally&) = default;
};

/// Fraction of problems whose predicted equation evaluates to the gold
/// answer. Unparseable or failing predictions count as wrong.
double evaluate_accuracy(const Predictor& model, std::span<const MathWordProblem> dataset);

/// Accuracy per category present in the dataset.
std::map<Category, double> per_operation_accuracy(const Predictor& model, std::span<const MathWordProblem> dataset);

std::map<Category, CategoryTally> per_operation_tally(const Predictor& model,
                                                      std::span<const MathWordProblem> dataset);

inline constexpr std::string_view kOriginalVariant = "original";

struct VariantResult {
  std::string name;   // slug; "original" for the unperturbed test splits
  std::string label;  // e.g. "original dataset", "nouns removed"
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  double decrease = 0.0;  // original mean minus this mean
  std::map<Category, CategoryTally> per_operation;  // summed over folds

  friend bool operator==(const VariantResult&, const VariantResult&) = default;
};

struct ReportMetadata {
  SolverConfig solver;
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  std::string dataset_hash;
  std::size_t dataset_size = 0;
  std::array<std::size_t, 5> operation_counts{};
  std::string tagger;
  std::vector<std::string> model_checksums;  // one per fold

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct ExperimentReport {
  ReportMetadata metadata;
  std::vector<VariantResult> variants;  // "original" first, then suite order

  const VariantResult& variant(std::string_view name) const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct SuiteConfig {
  std::filesystem::path dataset;
  SolverConfig solver;
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  std::vector<std::string> variants;  // empty means all thirteen
  std::filesystem::path output_dir;
  std::size_t jobs = 1;
};

/// Keys: dataset, solver, folds, seed, variants, output_dir, jobs. Missing
/// keys keep their defaults.
SuiteConfig suite_config_from_json(std::string_view json_text);
std::string suite_config_to_json(const SuiteConfig& config);

struct SuiteHooks {
  std::function<void(std::size_t fold, const std::string& message)> log;
};

/// For each fold: train on the unperturbed training split, then score the
/// same model on the original test split and on every requested variant of
/// it. Folds run on up to `jobs` threads; results do not depend on `jobs`.
ExperimentReport run_suite(std::span<const MathWordProblem> dataset, const SuiteConfig& config,
                           const TaggerBackend& backend = default_backend(), const SuiteHooks& hooks = {});

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(std::string_view json_text);
std::string report_markdown(const ExperimentReport& report);
std::string variant_accuracy_csv(const ExperimentReport& report);
std::string per_operation_csv(const ExperimentReport& report);
std::string operation_distribution_csv(const std::array<std::size_t, 5>& counts);

enum class ReportFormat { Json, Markdown, Csv };

/// Writes report.json, report.md and the CSV files for the requested
/// formats into `dir` and returns the written paths.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats = {ReportFormat::Json,
                                                                                        ReportFormat::Markdown,
                                                                                        ReportFormat::Csv});

}  // namespace mwpx
