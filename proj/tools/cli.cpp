#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mwpx/corpus.hpp"
#include "mwpx/equation.hpp"
#include "mwpx/error.hpp"
#include "mwpx/freq.hpp"
#include "mwpx/harness.hpp"
#include "mwpx/perturb.hpp"
#include "mwpx/reduce.hpp"
#include "mwpx/solver.hpp"
#include "mwpx/synth.hpp"
#include "mwpx/tagger.hpp"

namespace mwpx::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kBuiltinSeed = 42;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MWPX_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MWPX_SEED is not an unsigned integer: ") + env);
  }
  return kBuiltinSeed;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string one_line(const std::string& pretty_json) { return json::parse(pretty_json).dump(); }

struct Context {
  std::ostream& out;
  std::ostream& err;

  void log(const std::string& msg) const { err << "[mwpx] " << msg << '\n'; }

  Dataset load(const std::string& path) const {
    LoadOptions options;
    options.warnings = &err;
    auto ds = load_dataset(path, format_for_path(path), options);
    log("dataset " + path + " problems=" + std::to_string(ds.size()) + " hash=" + dataset_hash(ds));
    return ds;
  }
};

/// Tagger flags shared by perturb and suite.
struct TaggerFlags {
  std::string lexicon;
  std::string names;

  void attach(CLI::App* app) {
    app->add_option("--lexicon", lexicon, "Tag lexicon file (word<TAB>TAG per line)")->check(CLI::ExistingFile);
    app->add_option("--names", names, "First-name list, one per line")->check(CLI::ExistingFile);
  }

  std::unique_ptr<TaggerBackend> make() const {
    if (lexicon.empty() && names.empty()) return nullptr;
    auto lex = lexicon.empty() ? Lexicon::bundled() : Lexicon::load(lexicon);
    auto nm = names.empty() ? NameLexicon::bundled() : NameLexicon::load(names);
    return std::make_unique<LexiconTagger>(std::move(lex), std::move(nm));
  }
};

std::vector<std::string> variant_slugs() {
  std::vector<std::string> out;
  for (const auto& v : standard_variants()) out.push_back(v.name);
  return out;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data, model, config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::size_t folds = 0;
  std::size_t fold = 0;
};

int run_train(const Context& ctx, const TrainArgs& a) {
  SolverConfig config = a.config.empty() ? SolverConfig{} : solver_config_from_json(read_text(a.config));
  if (a.seed)
    config.seed = *a.seed;
  else if (a.config.empty())
    config.seed = default_seed();
  if (a.epochs) config.epochs = *a.epochs;
  config.validate();
  ctx.log("train config=" + one_line(solver_config_to_json(config)));

  auto ds = ctx.load(a.data);
  Dataset train_set = ds;
  TrainOptions options;
  options.dataset_hash = dataset_hash(ds);
  if (a.folds > 0) {
    if (a.fold >= a.folds) throw UsageError("--fold must be below --folds");
    auto splits = split_cv_folds(ds, a.folds, config.seed);
    train_set = select(ds, splits[a.fold].train);
    options.fold = a.fold;
    ctx.log("fold " + std::to_string(a.fold) + "/" + std::to_string(a.folds) +
            " train problems=" + std::to_string(train_set.size()));
  }
  options.on_epoch = [&](std::size_t epoch, double loss) {
    std::ostringstream s;
    s << "epoch " << epoch + 1 << " loss " << std::setprecision(6) << loss;
    ctx.log(s.str());
  };
  auto model = train(train_set, config, options);
  save_model(model, a.model);
  ctx.out << "model written to " << a.model << " (" << model.parameter_count() << " parameters, checksum "
          << model.parameter_checksum() << ")\n";
  return 0;
}

// ---------------------------------------------------------------- predict

struct PredictArgs {
  std::string model, question, data, format = "text", out;
};

json prediction_json(const Prediction& p, std::span<const double> numbers) {
  json j{{"equation", join(p.tokens)}, {"confidence", p.confidence}, {"step_probabilities", p.step_probabilities}};
  if (auto v = try_evaluate(p.tokens, numbers))
    j["answer"] = *v;
  else
    j["answer"] = nullptr;
  return j;
}

int run_predict(const Context& ctx, const PredictArgs& a) {
  if (a.question.empty() == a.data.empty()) throw UsageError("predict needs exactly one of --question or --data");
  auto model = load_model(a.model);
  ctx.log("predict model=" + a.model + " config=" + one_line(solver_config_to_json(model.config())) +
          " training_hash=" + model.metadata().dataset_hash);

  std::ofstream file;
  std::ostream* sink = &ctx.out;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::Io, "cannot write " + a.out);
    sink = &file;
  }

  if (!a.question.empty()) {
    auto masked = mask_numbers(a.question);
    auto pred = model.predict(masked.tokens);
    auto j = prediction_json(pred, masked.numbers);
    if (a.format == "json") {
      j["question"] = join(masked.tokens);
      j["numbers"] = masked.numbers;
      *sink << j.dump() << '\n';
    } else {
      *sink << "question:   " << join(masked.tokens) << '\n';
      *sink << "equation:   " << j["equation"].get<std::string>() << '\n';
      *sink << "answer:     " << (j["answer"].is_null() ? std::string("(invalid)") : j["answer"].dump()) << '\n';
      *sink << "confidence: " << pred.confidence << '\n';
    }
    return 0;
  }

  auto ds = ctx.load(a.data);
  std::size_t correct = 0;
  for (const auto& p : ds) {
    auto pred = model.predict(p.tokens);
    bool ok = prediction_correct(pred, p);
    correct += ok;
    auto j = prediction_json(pred, p.numbers);
    j["id"] = p.id;
    j["gold_equation"] = p.equation.str();
    j["gold_answer"] = p.answer;
    j["correct"] = ok;
    if (a.format == "json") {
      *sink << j.dump() << '\n';
    } else {
      *sink << p.id << '\t' << (ok ? "correct" : "incorrect") << '\t' << j["equation"].get<std::string>() << '\t'
            << pred.confidence << '\n';
    }
  }
  std::ostringstream s;
  s << "accuracy " << correct << "/" << ds.size() << " = " << std::setprecision(4)
    << (ds.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(ds.size()));
  ctx.log(s.str());
  return 0;
}

// ---------------------------------------------------------------- perturb

struct PerturbArgs {
  std::string data, out;
  std::vector<std::string> variants;
  TaggerFlags tagger;
};

int run_perturb(const Context& ctx, const PerturbArgs& a) {
  std::vector<std::string> names = a.variants;
  if (names.empty() || std::find(names.begin(), names.end(), "all") != names.end()) names = variant_slugs();
  if (a.out.empty() && names.size() > 1) throw UsageError("--out is required when writing more than one variant");

  auto custom = a.tagger.make();
  const TaggerBackend& backend = custom ? *custom : default_backend();
  ctx.log("perturb tagger=" + backend.name() + " variants=" + json(names).dump());
  auto ds = ctx.load(a.data);

  auto suite = generate_suite(ds, backend);
  const auto stem = fs::path(a.data).stem().string();
  for (const auto& name : names) {
    const auto& variant = suite.at(name);
    std::size_t empty = 0;
    for (const auto& p : variant) empty += p.flags.empty;
    if (empty) ctx.log(name + ": " + std::to_string(empty) + " problem(s) lost every token");
    if (a.out.empty()) {
      write_jsonl(ctx.out, variant);
    } else {
      auto path = fs::path(a.out) / (stem + "__" + name + ".jsonl");
      fs::create_directories(a.out);
      save_dataset(path, variant);
      ctx.out << path.string() << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------- suite

struct SuiteArgs {
  std::string data, config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> folds, jobs, epochs;
  std::vector<std::string> variants, formats;
  TaggerFlags tagger;
};

int run_suite_cmd(const Context& ctx, const SuiteArgs& a) {
  SuiteConfig config;
  if (!a.config.empty()) {
    config = suite_config_from_json(read_text(a.config));
  } else {
    config.seed = default_seed();
    config.solver.seed = config.seed;
  }
  if (!a.data.empty()) config.dataset = a.data;
  if (!a.out.empty()) config.output_dir = a.out;
  if (a.seed) config.seed = config.solver.seed = *a.seed;
  if (a.folds) config.folds = *a.folds;
  if (a.jobs) config.jobs = *a.jobs;
  if (a.epochs) config.solver.epochs = *a.epochs;
  if (!a.variants.empty()) config.variants = a.variants;
  if (std::find(config.variants.begin(), config.variants.end(), "all") != config.variants.end())
    config.variants.clear();
  if (config.dataset.empty()) throw UsageError("suite needs --data or a config with \"dataset\"");
  if (config.output_dir.empty()) throw UsageError("suite needs --out or a config with \"output_dir\"");
  if (config.folds < 2) throw UsageError("--folds must be at least 2");

  std::set<ReportFormat> formats;
  for (const auto& f : a.formats) {
    if (f == "json") formats.insert(ReportFormat::Json);
    if (f == "md" || f == "markdown") formats.insert(ReportFormat::Markdown);
    if (f == "csv") formats.insert(ReportFormat::Csv);
  }
  if (formats.empty()) formats = {ReportFormat::Json, ReportFormat::Markdown, ReportFormat::Csv};

  auto custom = a.tagger.make();
  const TaggerBackend& backend = custom ? *custom : default_backend();
  const std::string resolved = suite_config_to_json(config);
  ctx.log("suite config=" + one_line(resolved));
  auto ds = ctx.load(config.dataset.string());

  fs::create_directories(config.output_dir);
  std::ofstream run_log(config.output_dir / "run.log", std::ios::binary);
  std::mutex log_mutex;
  auto sidecar = [&](const std::string& msg) {
    std::lock_guard lock(log_mutex);
    run_log << timestamp() << ' ' << msg << '\n';
    run_log.flush();
  };
  sidecar("start suite dataset=" + config.dataset.string() + " hash=" + dataset_hash(ds));
  sidecar("config " + one_line(resolved));

  SuiteHooks hooks;
  hooks.log = [&](std::size_t fold, const std::string& msg) {
    std::string line = "fold " + std::to_string(fold) + ": " + msg;
    sidecar(line);
    ctx.log(line);
  };
  ExperimentReport report;
  try {
    report = run_suite(ds, config, backend, hooks);
  } catch (const std::exception& e) {
    sidecar(std::string("failed: ") + e.what());
    throw;
  }
  write_text(config.output_dir / "config.json", resolved + "\n");
  for (const auto& path : emit_report(report, config.output_dir, formats)) ctx.log("wrote " + path.string());
  sidecar("finished");
  ctx.out << report_markdown(report);
  return 0;
}

// ---------------------------------------------------------------- reduce

struct ReduceArgs {
  std::string model, data, out;
  std::size_t jobs = 1;
  std::size_t limit = 0;
};

int run_reduce(const Context& ctx, const ReduceArgs& a) {
  auto model = load_model(a.model);
  ctx.log("reduce model=" + a.model + " config=" + one_line(solver_config_to_json(model.config())));
  auto ds = ctx.load(a.data);
  if (a.limit > 0 && a.limit < ds.size()) ds.resize(a.limit);

  std::vector<ReductionTrace> traces(ds.size());
  const std::size_t jobs = std::max<std::size_t>(1, std::min(a.jobs, ds.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < ds.size();) traces[i] = reduce_input(model, ds[i]);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream lines;
  for (const auto& t : traces) lines << trace_to_json(t) << '\n';

  ReductionStatistics stats;
  try {
    stats = reduction_statistics(traces);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyInput) throw;
    ctx.log("no problem was solved correctly before reduction; statistics are empty");
  }
  json summary{{"problems", traces.size()},
               {"eligible", stats.eligible},
               {"mean_removed_fraction", stats.mean_fraction},
               {"median_removed_fraction", stats.median_fraction},
               {"histogram", stats.histogram}};

  if (a.out.empty()) {
    ctx.out << lines.str();
    ctx.log("summary " + summary.dump());
    return 0;
  }
  fs::create_directories(a.out);
  write_text(fs::path(a.out) / "traces.jsonl", lines.str());
  write_text(fs::path(a.out) / "histogram.csv", histogram_csv(stats));
  write_text(fs::path(a.out) / "summary.json", summary.dump(2) + "\n");
  ctx.out << summary.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- freq

struct FreqArgs {
  std::string data, out;
  std::size_t top = 50;
};

int run_freq(const Context& ctx, const FreqArgs& a) {
  ctx.log("freq top=" + std::to_string(a.top));
  auto ds = ctx.load(a.data);
  auto report = top_words_report(ds, a.top);
  if (a.out.empty()) {
    ctx.out << frequency_report_json(report);
    return 0;
  }
  fs::create_directories(a.out);
  for (const auto& cat : report.categories) {
    auto path = fs::path(a.out) / ("freq_" + std::string(to_string(cat.category)) + ".csv");
    write_text(path, frequency_csv(cat));
    ctx.out << path.string() << '\n';
  }
  write_text(fs::path(a.out) / "freq.json", frequency_report_json(report));
  return 0;
}

// ---------------------------------------------------------------- distribution / synth

int run_distribution(const Context& ctx, const std::string& data, const std::string& out) {
  auto ds = ctx.load(data);
  auto csv = operation_distribution_csv(operation_counts(ds));
  if (out.empty())
    ctx.out << csv;
  else
    write_text(out, csv);
  return 0;
}

int run_synth(const Context& ctx, const std::string& out, std::size_t count, std::optional<std::uint64_t> seed) {
  const auto s = seed ? *seed : default_seed();
  ctx.log("synth count=" + std::to_string(count) + " seed=" + std::to_string(s));
  auto ds = make_synthetic_corpus(count, s);
  ctx.log("hash=" + dataset_hash(ds));
  if (out.empty())
    write_jsonl(ctx.out, ds);
  else
    save_dataset(out, ds);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"mwpx: explainability workbench for math word problem solvers", "mwpx"};
  app.require_subcommand(1);
  Context ctx{out, err};
  std::function<int()> action;

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a solver and write a model directory");
  train_cmd->add_option("--data", train_args.data, "Training dataset (.jsonl or .csv)")->required();
  train_cmd->add_option("--model,--out", train_args.model, "Output model directory")->required();
  train_cmd->add_option("--config", train_args.config, "Solver config JSON")->check(CLI::ExistingFile);
  train_cmd->add_option("--seed", train_args.seed, "Training seed (default: MWPX_SEED or 42)");
  train_cmd->add_option("--epochs", train_args.epochs, "Override the configured epoch count");
  train_cmd->add_option("--folds", train_args.folds, "Train on one fold's training split of a k-fold split");
  train_cmd->add_option("--fold", train_args.fold, "Fold index used with --folds");
  train_cmd->callback([&] { action = [&] { return run_train(ctx, train_args); }; });

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "Predict equations with a trained model");
  predict_cmd->add_option("--model", predict_args.model, "Model directory")->required();
  predict_cmd->add_option("--question,-q", predict_args.question, "Raw question text; numerals are masked");
  predict_cmd->add_option("--data", predict_args.data, "Dataset to predict on");
  predict_cmd->add_option("--format", predict_args.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  predict_cmd->add_option("--out", predict_args.out, "Write predictions to a file");
  predict_cmd->callback([&] { action = [&] { return run_predict(ctx, predict_args); }; });

  PerturbArgs perturb_args;
  auto slugs = variant_slugs();
  slugs.push_back("all");
  auto* perturb_cmd = app.add_subcommand("perturb", "Write perturbed copies of a dataset");
  perturb_cmd->add_option("--data", perturb_args.data, "Dataset to perturb")->required();
  perturb_cmd->add_option("--variant", perturb_args.variants, "Variant slug(s), or 'all'")
      ->delimiter(',')
      ->check(CLI::IsMember(slugs));
  perturb_cmd->add_option("--out", perturb_args.out, "Output directory (<dataset>__<variant>.jsonl)");
  perturb_args.tagger.attach(perturb_cmd);
  perturb_cmd->callback([&] { action = [&] { return run_perturb(ctx, perturb_args); }; });

  SuiteArgs suite_args;
  auto* suite_cmd = app.add_subcommand("suite", "Cross-validated perturbation suite");
  suite_cmd->add_option("--data", suite_args.data, "Dataset");
  suite_cmd->add_option("--config", suite_args.config, "Suite config JSON")->check(CLI::ExistingFile);
  suite_cmd->add_option("--out", suite_args.out, "Report directory");
  suite_cmd->add_option("--seed", suite_args.seed, "Split and training seed");
  suite_cmd->add_option("--folds", suite_args.folds, "Number of CV folds");
  suite_cmd->add_option("--jobs", suite_args.jobs, "Folds trained in parallel")->check(CLI::PositiveNumber);
  suite_cmd->add_option("--epochs", suite_args.epochs, "Override the configured epoch count");
  suite_cmd->add_option("--variant", suite_args.variants, "Restrict to these variants")
      ->delimiter(',')
      ->check(CLI::IsMember(slugs));
  suite_cmd->add_option("--format", suite_args.formats, "Report formats: json,md,csv")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "md", "markdown", "csv"}));
  suite_args.tagger.attach(suite_cmd);
  suite_cmd->callback([&] { action = [&] { return run_suite_cmd(ctx, suite_args); }; });

  ReduceArgs reduce_args;
  auto* reduce_cmd = app.add_subcommand("reduce", "Greedy input reduction traces");
  reduce_cmd->add_option("--model", reduce_args.model, "Model directory")->required();
  reduce_cmd->add_option("--data", reduce_args.data, "Dataset")->required();
  reduce_cmd->add_option("--out", reduce_args.out, "Directory for traces.jsonl, histogram.csv, summary.json");
  reduce_cmd->add_option("--jobs", reduce_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  reduce_cmd->add_option("--limit", reduce_args.limit, "Only reduce the first N problems");
  reduce_cmd->callback([&] { action = [&] { return run_reduce(ctx, reduce_args); }; });

  FreqArgs freq_args;
  auto* freq_cmd = app.add_subcommand("freq", "Per-category word document frequencies");
  freq_cmd->add_option("--data", freq_args.data, "Dataset")->required();
  freq_cmd->add_option("--out", freq_args.out, "Directory for freq_<CATEGORY>.csv and freq.json");
  freq_cmd->add_option("--top", freq_args.top, "List length per category")->check(CLI::PositiveNumber);
  freq_cmd->callback([&] { action = [&] { return run_freq(ctx, freq_args); }; });

  std::string dist_data, dist_out;
  auto* dist_cmd = app.add_subcommand("distribution", "Operation category distribution CSV");
  dist_cmd->add_option("--data", dist_data, "Dataset")->required();
  dist_cmd->add_option("--out", dist_out, "Output CSV (default: stdout)");
  dist_cmd->callback([&] { action = [&] { return run_distribution(ctx, dist_data, dist_out); }; });

  std::string synth_out;
  std::size_t synth_count = 500;
  std::optional<std::uint64_t> synth_seed;
  auto* synth_cmd = app.add_subcommand("synth", "Generate the templated synthetic corpus");
  synth_cmd->add_option("--out", synth_out, "Output JSONL (default: stdout)");
  synth_cmd->add_option("--count", synth_count, "Number of problems")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_seed, "Generator seed");
  synth_cmd->callback([&] { action = [&] { return run_synth(ctx, synth_out, synth_count, synth_seed); }; });

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == name;
    if (!known) {
      err << "error: unknown subcommand '" << name << "'\n\n" << app.help();
      return 2;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n";
    const CLI::App* shown = &app;
    for (const auto* sub : app.get_subcommands()) shown = sub;
    err << shown->help();
    return 2;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mwpx::cli
