#include <doctest.h>

#include <json.hpp>

#include "checks.hpp"
#include "mwpx/error.hpp"
#include "mwpx/reduce.hpp"

using namespace mwpx;
using Tokens = std::vector<std::string>;

namespace {

ReductionTrace fixture(bool correct, double fraction) {
  ReductionTrace t;
  t.initially_correct = correct;
  t.removed_fraction = fraction;
  return t;
}

}  // namespace

TEST_CASE("candidate types skip number tokens and fold case") {
  Tokens t{"Emily", "has", "number0", "cards", ".", "emily", "has", "number1", "."};
  CHECK(candidate_types(t) == Tokens{"emily", "has", "cards", "."});
  CHECK(remove_type(t, "emily") == Tokens{"has", "number0", "cards", ".", "has", "number1", "."});
  CHECK(remove_type(t, "number0") == t);
  CHECK(candidate_types(Tokens{"number0", "number1"}).empty());
}

TEST_CASE("worked example removes every Emily in one step") {
  auto problem = checks::emily_problem();
  REQUIRE(problem.tokens.size() == 25);
  auto model = checks::emily_stub();
  auto trace = reduce_input(model, problem);

  REQUIRE(trace.initially_correct);
  REQUIRE(trace.steps.size() == 14);
  for (std::size_t i = 0; i < 14; ++i) {
    CHECK(trace.steps[i].step_index == i + 1);
    CHECK(trace.steps[i].removed_word == checks::kEmilyOrder[i]);
    CHECK(trace.steps[i].correct_after == (i < 13));
  }
  const auto& emily = trace.steps[5];
  CHECK(emily.removed_word == "emily");
  CHECK(emily.occurrences == 4);
  for (const auto& t : emily.remaining_tokens) CHECK(t != "Emily");
  CHECK(trace.steps[12].removed_word == "cards");
  CHECK(trace.steps[12].occurrences == 2);
  // 17 of 25 tokens were removed before the prediction broke.
  CHECK(trace.removed_fraction == 17.0 / 25.0);
  CHECK(trace.steps.back().remaining_tokens == Tokens{"number0", ".", "number1", ".", "number2", "apples", "."});

  CHECK(checks::traces_agree(trace, oracle::reduce(model, problem)));
}

TEST_CASE("greedy reduction matches the exhaustive oracle") {
  Rng rng(17);
  std::size_t scenarios = 0, with_ties = 0;
  for (int i = 0; i < 300; ++i) {
    auto s = checks::random_scenario(rng, 8);
    auto trace = reduce_input(*s.model, s.problem);
    auto expected = oracle::reduce(*s.model, s.problem);
    CHECK(checks::traces_agree(trace, expected));
    ++scenarios;
    for (const auto& step : trace.steps) {
      // Count scenarios where some other candidate scored the same.
      auto before = step.step_index == 1 ? s.problem.tokens : trace.steps[step.step_index - 2].remaining_tokens;
      for (const auto& c : candidate_types(before)) {
        if (c != step.removed_word && s.model->predict(remove_type(before, c)).confidence == step.confidence_after) {
          ++with_ties;
          goto next;
        }
      }
    }
  next:;
  }
  CHECK(scenarios >= 20);
  CHECK(with_ties > 0);
}

TEST_CASE("initially incorrect problems produce an empty trace") {
  auto problem = checks::emily_problem();
  oracle::StubPredictor wrong(checks::kWrong, checks::kWrong, [](const Tokens&) { return 0.9; },
                              [](const Tokens&) { return false; });
  auto trace = reduce_input(wrong, problem);
  CHECK_FALSE(trace.initially_correct);
  CHECK(trace.steps.empty());
  CHECK(trace.removed_fraction == 0.0);
}

TEST_CASE("reduction runs until only number tokens remain") {
  auto problem = checks::problem_from("a b number0 a number1", {5, 1});
  oracle::StubPredictor always(checks::kGold, checks::kWrong, [](const Tokens& t) { return 1.0 / (1 + t.size()); },
                               [](const Tokens&) { return true; });
  auto trace = reduce_input(always, problem);
  REQUIRE(trace.steps.size() == 2);
  CHECK(trace.steps[0].removed_word == "a");
  CHECK(trace.steps[0].occurrences == 2);
  CHECK(trace.steps[1].remaining_tokens == Tokens{"number0", "number1"});
  CHECK(trace.removed_fraction == 3.0 / 5.0);
}

TEST_CASE("histogram bins") {
  CHECK(histogram_bin(0.0) == 0);
  CHECK(histogram_bin(0.05) == 0);
  CHECK(histogram_bin(0.1) == 1);
  CHECK(histogram_bin(0.3) == 3);
  CHECK(histogram_bin(0.7) == 7);
  CHECK(histogram_bin(0.99) == 9);
  CHECK(histogram_bin(1.0) == 9);
  CHECK(histogram_bin(17.0 / 25.0) == 6);
}

TEST_CASE("reduction statistics over hand-built traces") {
  std::vector<ReductionTrace> traces{fixture(true, 0.5),  fixture(true, 0.25), fixture(false, 0.9),
                                     fixture(true, 1.0),  fixture(true, 0.0),  fixture(false, 0.0),
                                     fixture(true, 0.75)};
  auto s = reduction_statistics(traces);
  CHECK(s.eligible == 5);
  CHECK(s.mean_fraction == 0.5);    // (0.5 + 0.25 + 1 + 0 + 0.75) / 5
  CHECK(s.median_fraction == 0.5);  // sorted 0, .25, .5, .75, 1
  CHECK(s.histogram == std::array<std::size_t, 10>{1, 0, 1, 0, 0, 1, 0, 1, 0, 1});

  traces.pop_back();
  s = reduction_statistics(traces);
  CHECK(s.eligible == 4);
  CHECK(s.mean_fraction == 0.4375);
  CHECK(s.median_fraction == 0.375);  // (0.25 + 0.5) / 2

  std::vector<ReductionTrace> none{fixture(false, 0.3)};
  CHECK_THROWS_AS(reduction_statistics(none), Error);

  auto csv = histogram_csv(reduction_statistics(std::vector<ReductionTrace>{fixture(true, 0.62)}));
  CHECK(csv.rfind("bin_low,bin_high,count\n", 0) == 0);
  CHECK(csv.find("0.6,0.7,1") != std::string::npos);
}

TEST_CASE("trace json uses the step table columns and round trips") {
  auto problem = checks::emily_problem();
  auto trace = reduce_input(checks::emily_stub(), problem);
  trace.problem_id = "emily";
  auto line = trace_to_json(trace);
  CHECK(line.find('\n') == std::string::npos);
  auto j = nlohmann::json::parse(line);
  const auto& step = j.at("steps").at(0);
  for (const char* key : {"step", "score", "model_confidence", "removed_word", "question"})
    CHECK(step.contains(key));
  CHECK(step.at("score") == "Correct");
  CHECK(j.at("steps").at(13).at("score") == "Incorrect");
  CHECK(trace_from_json(line) == trace);
}
