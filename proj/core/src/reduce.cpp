#include "mwpx/reduce.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "mwpx/error.hpp"

namespace mwpx {

using nlohmann::json;

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::vector<std::string> candidate_types(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : tokens) {
    if (is_number_token(t)) continue;
    auto low = lowercase(t);
    if (seen.insert(low).second) out.push_back(std::move(low));
  }
  return out;
}

std::vector<std::string> remove_type(std::span<const std::string> tokens, const std::string& type) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (is_number_token(t) || lowercase(t) != type) out.push_back(t);
  return out;
}

ReductionTrace reduce_input(const Predictor& model, const MathWordProblem& problem) {
  ReductionTrace trace;
  trace.problem_id = problem.id;
  trace.original_tokens = problem.tokens;

  const Prediction initial = model.predict(problem.tokens);
  trace.initial_confidence = initial.confidence;
  trace.initially_correct = prediction_correct(initial, problem);
  if (!trace.initially_correct) return trace;

  std::vector<std::string> current = problem.tokens;
  std::size_t removed_while_correct = 0;
  for (;;) {
    const auto candidates = candidate_types(current);
    if (candidates.empty()) break;

    std::size_t best = 0;
    std::vector<std::string> best_tokens;
    Prediction best_prediction;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      auto reduced = remove_type(current, candidates[c]);
      auto prediction = model.predict(reduced);
      // Strict comparison keeps the leftmost candidate on ties.
      if (c == 0 || prediction.confidence > best_prediction.confidence) {
        best = c;
        best_tokens = std::move(reduced);
        best_prediction = std::move(prediction);
      }
    }

    ReductionStep step;
    step.step_index = trace.steps.size() + 1;
    step.removed_word = candidates[best];
    step.occurrences = current.size() - best_tokens.size();
    step.confidence_after = best_prediction.confidence;
    step.correct_after = prediction_correct(best_prediction, problem);
    step.remaining_tokens = best_tokens;
    trace.steps.push_back(step);
    if (!step.correct_after) break;
    removed_while_correct += step.occurrences;
    current = std::move(best_tokens);
  }
  trace.removed_fraction =
      problem.tokens.empty() ? 0.0
                             : static_cast<double>(removed_while_correct) / static_cast<double>(problem.tokens.size());
  return trace;
}

std::size_t histogram_bin(double fraction) noexcept {
  // The epsilon keeps exact decimal edges such as 0.3 out of the bin below.
  double scaled = std::floor(fraction * 10.0 + 1e-9);
  if (!(scaled > 0.0)) return 0;
  return std::min<std::size_t>(9, static_cast<std::size_t>(scaled));
}

ReductionStatistics reduction_statistics(std::span<const ReductionTrace> traces) {
  std::vector<double> fractions;
  for (const auto& t : traces)
    if (t.initially_correct) fractions.push_back(t.removed_fraction);
  if (fractions.empty()) throw Error(ErrorCode::EmptyInput, "no initially-correct traces");

  ReductionStatistics stats;
  stats.eligible = fractions.size();
  double sum = 0.0;
  for (double f : fractions) {
    sum += f;
    ++stats.histogram[histogram_bin(f)];
  }
  stats.mean_fraction = sum / static_cast<double>(fractions.size());
  std::sort(fractions.begin(), fractions.end());
  const std::size_t n = fractions.size();
  stats.median_fraction = n % 2 ? fractions[n / 2] : (fractions[n / 2 - 1] + fractions[n / 2]) / 2.0;
  return stats;
}

std::string trace_to_json(const ReductionTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"step", s.step_index},
                     {"score", s.correct_after ? "Correct" : "Incorrect"},
                     {"model_confidence", s.confidence_after},
                     {"removed_word", s.removed_word},
                     {"occurrences", s.occurrences},
                     {"question", s.remaining_tokens}});
  }
  json j{{"problem_id", trace.problem_id},
         {"initially_correct", trace.initially_correct},
         {"initial_confidence", trace.initial_confidence},
         {"question", trace.original_tokens},
         {"steps", steps},
         {"removed_fraction", trace.removed_fraction}};
  return j.dump();
}

ReductionTrace trace_from_json(std::string_view json_line) {
  try {
    auto j = json::parse(json_line);
    ReductionTrace t;
    t.problem_id = j.at("problem_id").get<std::string>();
    t.initially_correct = j.at("initially_correct").get<bool>();
    t.initial_confidence = j.at("initial_confidence").get<double>();
    t.original_tokens = j.at("question").get<std::vector<std::string>>();
    t.removed_fraction = j.at("removed_fraction").get<double>();
    for (const auto& s : j.at("steps")) {
      ReductionStep step;
      step.step_index = s.at("step").get<std::size_t>();
      step.correct_after = s.at("score").get<std::string>() == "Correct";
      step.confidence_after = s.at("model_confidence").get<double>();
      step.removed_word = s.at("removed_word").get<std::string>();
      step.occurrences = s.at("occurrences").get<std::size_t>();
      step.remaining_tokens = s.at("question").get<std::vector<std::string>>();
      t.steps.push_back(std::move(step));
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("trace: ") + e.what());
  }
}

std::string histogram_csv(const ReductionStatistics& stats) {
  std::string out = "bin_low,bin_high,count\n";
  char buf[64];
  for (std::size_t i = 0; i < stats.histogram.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.1f,%.1f,%zu\n", static_cast<double>(i) / 10.0,
                  static_cast<double>(i + 1) / 10.0, stats.histogram[i]);
    out += buf;
  }
  return out;
}

}  // namespace mwpx
