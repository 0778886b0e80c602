#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mwpx/corpus.hpp"
#include "mwpx/solver.hpp"

namespace mwpx {

struct ReductionStep {
  std::size_t step_index = 0;  // 1-based; step 0 is the unreduced input
  std::string removed_word;    // lowercase type; every occurrence is removed
  std::size_t occurrences = 0;
  double confidence_after = 0.0;
  bool correct_after = false;
  std::vector<std::string> remaining_tokens;

  friend bool operator==(const ReductionStep&, const ReductionStep&) = default;
};

struct ReductionTrace {
  std::string problem_id;
  bool initially_correct = false;
  double initial_confidence = 0.0;
  std::vector<std::string> original_tokens;
  std::vector<ReductionStep> steps;
  double removed_fraction = 0.0;

  friend bool operator==(const ReductionTrace&, const ReductionTrace&) = default;
};

/// Distinct lowercase non-number-token word types in first-occurrence order.
std::vector<std::string> candidate_types(std::span<const std::string> tokens);

/// `tokens` without any token whose lowercase form equals `type`.
std::vector<std::string> remove_type(std::span<const std::string> tokens, const std::string& type);

/// Greedy input reduction. At each step every candidate type is tentatively
/// removed; the removal leaving the highest confidence is committed (ties go
/// to the leftmost first occurrence). Stops after the first step whose
/// prediction is incorrect, or when only number tokens remain.
ReductionTrace reduce_input(const Predictor& model, const MathWordProblem& problem);

struct ReductionStatistics {
  std::size_t eligible = 0;  // initially-correct traces
  double mean_fraction = 0.0;
  double median_fraction = 0.0;
  std::array<std::size_t, 10> histogram{};  // bins [0,0.1), ..., [0.9,1.0]
};

/// Throws EmptyInput when no trace was initially correct.
ReductionStatistics reduction_statistics(std::span<const ReductionTrace> traces);

/// Histogram bin for a fraction in [0,1]; 1.0 lands in the last bin.
std::size_t histogram_bin(double fraction) noexcept;

std::string trace_to_json(const ReductionTrace& trace);
ReductionTrace trace_from_json(std::string_view json_line);

/// bin_low,bin_high,count rows with a header line.
std::string histogram_csv(const ReductionStatistics& stats);

}  // namespace mwpx
