#include <benchmark/benchmark.h>

#include "checks.hpp"
#include "mwpx/corpus.hpp"
#include "mwpx/equation.hpp"
#include "mwpx/perturb.hpp"
#include "mwpx/reduce.hpp"
#include "mwpx/solver.hpp"
#include "mwpx/synth.hpp"
#include "mwpx/tagger.hpp"

namespace {

void BM_EvaluatePrefix(benchmark::State& state) {
  std::vector<std::string> eq{"+", "*", "number0", "number1", "/", "number2", "-", "number3", "number1"};
  std::vector<double> numbers{3, 4, 10, 7};
  for (auto _ : state) benchmark::DoNotOptimize(mwpx::evaluate(eq, numbers));
}
BENCHMARK(BM_EvaluatePrefix);

void BM_NormalizeWord(benchmark::State& state) {
  const char* words[] = {"balloons", "collected", "happiness", "running", "generously"};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mwpx::normalize_word(words[i++ % 5]));
}
BENCHMARK(BM_NormalizeWord);

void BM_TagQuestion(benchmark::State& state) {
  auto tokens = checks::emily_problem().tokens;
  const auto& backend = mwpx::default_backend();
  for (auto _ : state) benchmark::DoNotOptimize(mwpx::tag_tokens(tokens, backend));
}
BENCHMARK(BM_TagQuestion);

void BM_PerturbAllVariants(benchmark::State& state) {
  auto problem = checks::emily_problem();
  for (auto _ : state)
    for (const auto& spec : mwpx::standard_variants())
      benchmark::DoNotOptimize(mwpx::apply_perturbation(problem, spec));
}
BENCHMARK(BM_PerturbAllVariants);

void BM_PredictSmallModel(benchmark::State& state) {
  auto ds = mwpx::make_synthetic_corpus(40, 1);
  mwpx::SolverConfig config;
  config.embedding_dim = static_cast<std::size_t>(state.range(0));
  config.hidden_dim = 2 * config.embedding_dim;
  config.epochs = 1;
  auto model = mwpx::train(ds, config);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(ds[0].tokens));
}
BENCHMARK(BM_PredictSmallModel)->Arg(32)->Arg(128);

void BM_ReduceWithStub(benchmark::State& state) {
  auto problem = checks::emily_problem();
  auto model = checks::emily_stub();
  for (auto _ : state) benchmark::DoNotOptimize(mwpx::reduce_input(model, problem));
}
BENCHMARK(BM_ReduceWithStub);

}  // namespace

BENCHMARK_MAIN();
