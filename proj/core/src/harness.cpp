#include "mwpx/harness.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "json_io.hpp"
#include "mwpx/error.hpp"
#include "mwpx/perturb.hpp"

namespace mwpx {

using nlohmann::json;

std::map<Category, CategoryTally> per_operation_tally(const Predictor& model,
                                                      std::span<const MathWordProblem> dataset) {
  std::map<Category, CategoryTally> out;
  for (const auto& p : dataset) {
    auto& tally = out[p.category];
    ++tally.count;
    if (prediction_correct(model.predict(p.tokens), p)) ++tally.correct;
  }
  return out;
}

double evaluate_accuracy(const Predictor& model, std::span<const MathWordProblem> dataset) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyInput, "cannot score an empty dataset");
  std::size_t correct = 0;
  for (const auto& p : dataset)
    if (prediction_correct(model.predict(p.tokens), p)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

std::map<Category, double> per_operation_accuracy(const Predictor& model, std::span<const MathWordProblem> dataset) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyInput, "cannot score an empty dataset");
  std::map<Category, double> out;
  for (const auto& [c, tally] : per_operation_tally(model, dataset)) out[c] = tally.accuracy();
  return out;
}

const VariantResult& ExperimentReport::variant(std::string_view name) const {
  for (const auto& v : variants)
    if (v.name == name) return v;
  throw Error(ErrorCode::InvalidArgument, "report has no variant '" + std::string(name) + "'");
}

SuiteConfig suite_config_from_json(std::string_view json_text) {
  SuiteConfig c;
  try {
    auto j = json::parse(json_text);
    if (j.contains("dataset")) c.dataset = j.at("dataset").get<std::string>();
    if (j.contains("solver")) c.solver = config_from_json(j.at("solver"));
    c.folds = j.value("folds", c.folds);
    c.seed = j.value("seed", c.seed);
    if (j.contains("variants")) c.variants = j.at("variants").get<std::vector<std::string>>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.jobs = j.value("jobs", c.jobs);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("suite config: ") + e.what());
  }
  for (const auto& v : c.variants) variant_by_name(v);
  return c;
}

std::string suite_config_to_json(const SuiteConfig& c) {
  json j{{"dataset", c.dataset.string()},
         {"solver", config_to_json(c.solver)},
         {"folds", c.folds},
         {"seed", c.seed},
         {"variants", c.variants},
         {"output_dir", c.output_dir.string()},
         {"jobs", c.jobs}};
  return j.dump(2);
}

namespace {

struct FoldResult {
  std::string checksum;
  // Parallel to the variant list: accuracy and per-category tallies.
  std::vector<double> accuracy;
  std::vector<std::map<Category, CategoryTally>> tallies;
};

}  // namespace

ExperimentReport run_suite(std::span<const MathWordProblem> dataset, const SuiteConfig& config,
                           const TaggerBackend& backend, const SuiteHooks& hooks) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyInput, "suite needs a nonempty dataset");
  config.solver.validate();

  std::vector<const PerturbationSpec*> specs;
  if (config.variants.empty()) {
    for (const auto& s : standard_variants()) specs.push_back(&s);
  } else {
    for (const auto& name : config.variants) specs.push_back(&variant_by_name(name));
  }

  const auto splits = split_cv_folds(dataset, config.folds, config.seed);
  const std::string hash = dataset_hash(dataset);

  // Perturbed copies of the whole dataset, index-aligned with the original;
  // each fold scores the rows of its own test split.
  std::vector<Dataset> perturbed;
  {
    auto suite = generate_suite(dataset, backend);
    for (const auto* s : specs) perturbed.push_back(std::move(suite.at(s->name)));
  }

  std::vector<FoldResult> results(splits.size());
  std::mutex log_mutex;
  auto log = [&](std::size_t fold, const std::string& msg) {
    if (!hooks.log) return;
    std::lock_guard lock(log_mutex);
    hooks.log(fold, msg);
  };

  auto run_fold = [&](std::size_t f) {
    const auto& split = splits[f];
    auto train_set = select(dataset, split.train);
    SolverConfig solver = config.solver;
    solver.seed = config.solver.seed + f;
    TrainOptions options;
    options.fold = f;
    options.dataset_hash = hash;
    log(f, "training on " + std::to_string(train_set.size()) + " problems");
    auto model = train(train_set, solver, options);

    FoldResult& r = results[f];
    r.checksum = model.parameter_checksum();
    auto score = [&](std::span<const MathWordProblem> source) {
      auto test_set = select(source, split.test);
      auto tally = per_operation_tally(model, test_set);
      std::size_t correct = 0;
      for (const auto& [c, t] : tally) correct += t.correct;
      r.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test_set.size()));
      r.tallies.push_back(std::move(tally));
    };
    score(dataset);
    for (const auto& variant : perturbed) score(variant);
    log(f, "original accuracy " + std::to_string(r.accuracy.front()));
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, splits.size()));
  if (jobs == 1) {
    for (std::size_t f = 0; f < splits.size(); ++f) run_fold(f);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t f; (f = next.fetch_add(1)) < splits.size();) {
          try {
            run_fold(f);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  ExperimentReport report;
  auto& meta = report.metadata;
  meta.solver = config.solver;
  meta.folds = config.folds;
  meta.seed = config.seed;
  meta.dataset_hash = hash;
  meta.dataset_size = dataset.size();
  meta.operation_counts = operation_counts(dataset);
  meta.tagger = backend.name();
  for (const auto& r : results) meta.model_checksums.push_back(r.checksum);

  auto make_variant = [&](std::size_t slot, std::string name, std::string label) {
    VariantResult v;
    v.name = std::move(name);
    v.label = std::move(label);
    double sum = 0.0;
    for (const auto& r : results) {
      v.fold_accuracy.push_back(r.accuracy[slot]);
      sum += r.accuracy[slot];
      for (const auto& [c, t] : r.tallies[slot]) {
        v.per_operation[c].count += t.count;
        v.per_operation[c].correct += t.correct;
      }
    }
    v.mean_accuracy = sum / static_cast<double>(results.size());
    return v;
  };
  report.variants.push_back(make_variant(0, std::string(kOriginalVariant), "original dataset"));
  for (std::size_t i = 0; i < specs.size(); ++i)
    report.variants.push_back(make_variant(i + 1, specs[i]->name, specs[i]->label));
  const double baseline = report.variants.front().mean_accuracy;
  for (auto& v : report.variants) v.decrease = baseline - v.mean_accuracy;
  return report;
}

}  // namespace mwpx
