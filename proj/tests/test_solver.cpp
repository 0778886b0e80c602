#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "checks.hpp"
#include "mwpx/error.hpp"
#include "mwpx/harness.hpp"
#include "mwpx/rng.hpp"
#include "mwpx/solver.hpp"
#include "mwpx/synth.hpp"

using namespace mwpx;
namespace fs = std::filesystem;

namespace {

SolverConfig tiny_config() {
  SolverConfig c;
  c.embedding_dim = 16;
  c.hidden_dim = 24;
  c.epochs = 3;
  c.batch_size = 16;
  c.learning_rate = 5e-3;
  return c;
}

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mwpx_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ErrorCode load_error(const fs::path& dir) {
  try {
    load_model(dir);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("load_model should have failed");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("confidence is the arithmetic mean of step probabilities") {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> probs(1 + rng.below(20));
    for (auto& p : probs) p = rng.uniform();
    long double sum = 0;
    for (double p : probs) sum += p;
    double expected = static_cast<double>(sum / probs.size());
    CHECK(std::fabs(mean_confidence(probs) - expected) <= 1e-12);
    auto pred = make_prediction({"+", "number0", "number1"}, probs);
    CHECK(std::fabs(pred.confidence - expected) <= 1e-12);
  }
  CHECK(mean_confidence({}) == 0.0);
}

TEST_CASE("prediction correctness goes through evaluation") {
  MathWordProblem p;
  p.numbers = {7, 3};
  p.answer = 4;
  CHECK(prediction_correct(make_prediction({"-", "number0", "number1"}, {0.5, 0.5, 0.5}), p));
  CHECK_FALSE(prediction_correct(make_prediction({"+", "number0", "number1"}, {1, 1, 1}), p));
  CHECK_FALSE(prediction_correct(make_prediction({"-", "number0"}, {1, 1}), p));
  CHECK_FALSE(prediction_correct(make_prediction({"-", "number0", "number7"}, {1, 1, 1}), p));
  CHECK_FALSE(prediction_correct(make_prediction({}, {}), p));
  // A different equation with the same value still counts.
  CHECK(prediction_correct(make_prediction({"-", "*", "number0", "1", "number1"}, {1, 1, 1, 1, 1}), p));
}

TEST_CASE("solver config validation and json") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.hidden_dim = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig{};
  c.dropout = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = tiny_config();
  c.cell = CellType::Lstm;
  c.layers = 2;
  CHECK(solver_config_from_json(solver_config_to_json(c)) == c);
  auto partial = solver_config_from_json(R"({"hidden_dim": 32})");
  CHECK(partial.hidden_dim == 32);
  CHECK(partial.embedding_dim == SolverConfig{}.embedding_dim);
  CHECK_THROWS_AS(solver_config_from_json(R"({"cell": "rnn"})"), Error);
}

TEST_CASE("gradients match central differences") {
  CHECK(checks::max_gradient_error(CellType::Gru, 1, 1) < 1e-4);
  CHECK(checks::max_gradient_error(CellType::Gru, 2, 2) < 1e-4);
  CHECK(checks::max_gradient_error(CellType::Lstm, 1, 3) < 1e-4);
  CHECK(checks::max_gradient_error(CellType::Lstm, 2, 4) < 1e-4);
}

TEST_CASE("training is deterministic and loss falls") {
  auto ds = make_synthetic_corpus(120, 5);
  auto config = tiny_config();
  config.epochs = 5;
  auto a = train(ds, config);
  auto b = train(ds, config);
  CHECK(a.parameter_checksum() == b.parameter_checksum());
  CHECK(a.metadata().loss_history == b.metadata().loss_history);

  const auto& loss = a.metadata().loss_history;
  REQUIRE(loss.size() == 5);
  for (std::size_t i = 1; i < loss.size(); ++i) CHECK(loss[i] <= loss[i - 1]);

  config.seed = 43;
  CHECK(train(ds, config).parameter_checksum() != a.parameter_checksum());

  CHECK_THROWS_AS(train(Dataset{}, config), Error);
}

TEST_CASE("predictions are well formed") {
  auto ds = make_synthetic_corpus(60, 6);
  auto model = train(ds, tiny_config());
  for (const auto& p : ds) {
    auto pred = model.predict(p.tokens);
    CHECK(pred.tokens.size() == pred.step_probabilities.size());
    CHECK(pred.tokens.size() <= model.config().max_decode_len);
    CHECK(pred.confidence == doctest::Approx(mean_confidence(pred.step_probabilities)).epsilon(1e-12));
    for (double q : pred.step_probabilities) {
      CHECK(q > 0.0);
      CHECK(q <= 1.0);
    }
  }
  // Unknown words and empty input do not throw.
  CHECK_NOTHROW(model.predict(std::vector<std::string>{"zzzunknown", "number0"}));
  CHECK_NOTHROW(model.predict(std::vector<std::string>{}));
  CHECK(model.input_vocabulary().at(0) == "<pad>");
  CHECK(model.output_vocabulary().at(0) == "<eos>");
}

TEST_CASE("model save and load round trip") {
  auto ds = make_synthetic_corpus(60, 6);
  TrainOptions options;
  options.fold = 2;
  options.dataset_hash = dataset_hash(ds);
  auto model = train(ds, tiny_config(), options);
  auto dir = temp_dir("roundtrip");
  save_model(model, dir);
  for (const char* f : {"metadata.json", "input_vocab.txt", "output_vocab.txt", "params.bin"})
    CHECK(fs::exists(dir / f));

  auto back = load_model(dir);
  CHECK(back.parameter_checksum() == model.parameter_checksum());
  CHECK(back.config() == model.config());
  CHECK(back.metadata().fold == std::optional<std::size_t>(2));
  CHECK(back.metadata().dataset_hash == dataset_hash(ds));
  CHECK(back.metadata().loss_history == model.metadata().loss_history);
  for (const auto& p : ds) {
    auto x = model.predict(p.tokens), y = back.predict(p.tokens);
    CHECK(x.tokens == y.tokens);
    CHECK(x.step_probabilities == y.step_probabilities);
  }
  fs::remove_all(dir);
}

TEST_CASE("loading broken model directories fails cleanly") {
  auto empty = temp_dir("empty");
  fs::create_directories(empty);
  CHECK(load_error(empty) == ErrorCode::Io);
  CHECK(load_error(temp_dir("missing")) == ErrorCode::Io);

  auto model = train(make_synthetic_corpus(20, 1), tiny_config());
  auto dir = temp_dir("broken");
  save_model(model, dir);

  {
    auto meta = nlohmann::json::parse(std::ifstream(dir / "metadata.json"));
    meta["format_version"] = 99;
    std::ofstream(dir / "metadata.json") << meta.dump();
  }
  CHECK(load_error(dir) == ErrorCode::VersionMismatch);

  save_model(model, dir);
  {
    std::fstream f(dir / "params.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(200);
    f.put('\x7f');
  }
  CHECK(load_error(dir) == ErrorCode::CorruptFile);

  save_model(model, dir);
  fs::resize_file(dir / "params.bin", 100);
  CHECK(load_error(dir) == ErrorCode::CorruptFile);
  fs::remove_all(dir);
  fs::remove_all(empty);
}

TEST_CASE("lstm and stacked layers train") {
  auto ds = make_synthetic_corpus(60, 4);
  auto config = tiny_config();
  config.cell = CellType::Lstm;
  config.layers = 2;
  auto model = train(ds, config);
  CHECK(model.metadata().loss_history.back() < model.metadata().loss_history.front());
}
