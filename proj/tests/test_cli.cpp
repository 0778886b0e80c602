#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "cli.hpp"
#include "mwpx/corpus.hpp"
#include "mwpx/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mwpx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = mwpx::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string source(const std::string& rel) { return std::string(MWPX_SOURCE_DIR) + "/" + rel; }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mwpx_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path tiny_config(const fs::path& dir) {
  auto path = dir / "solver.json";
  std::ofstream(path) << R"({"embedding_dim": 16, "hidden_dim": 24, "epochs": 2, "batch_size": 16})";
  return path;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  auto r = run({});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);

  r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown subcommand 'frobnicate'") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);

  r = run({"distribution", "--data", source("data/freq25.jsonl"), "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--bogus") != std::string::npos);

  r = run({"perturb", "--data", source("data/perturb_examples.jsonl"), "--variant", "colors_removed"});
  CHECK(r.code == 2);

  CHECK(run({"train", "--data", source("data/freq25.jsonl")}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("data errors exit with 1 and name the record") {
  auto dir = scratch("bad");
  std::ofstream(dir / "bad.jsonl")
      << R"({"id":"good","question":"a 1 b 2","equation":"+ number0 number1","answer":3})" << "\n"
      << R"({"id":"broken-7","question":"Tom had 5 apples and ate 2 .","equation":"- number2 number0","answer":3})"
      << "\n";
  auto r = run({"distribution", "--data", (dir / "bad.jsonl").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("broken-7") != std::string::npos);
  CHECK(r.err.find("line 2") != std::string::npos);

  r = run({"distribution", "--data", (dir / "missing.jsonl").string()});
  CHECK(r.code == 1);
  fs::remove_all(dir);
}

TEST_CASE("distribution and freq") {
  auto r = run({"distribution", "--data", source("data/freq25.jsonl")});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("category,count,fraction\nADD,5,0.200000\n", 0) == 0);
  CHECK(r.err.find("hash=") != std::string::npos);

  auto dir = scratch("freq");
  r = run({"freq", "--data", source("data/freq25.jsonl"), "--out", dir.string(), "--top", "5"});
  REQUIRE(r.code == 0);
  for (const char* c : {"ADD", "SUB", "MUL", "DIV", "MULTI"})
    CHECK(fs::exists(dir / (std::string("freq_") + c + ".csv")));
  auto j = json::parse(slurp(dir / "freq.json"));
  CHECK(j.at("top_n") == 5);
  fs::remove_all(dir);
}

TEST_CASE("perturb writes golden output") {
  auto r = run({"perturb", "--data", source("data/perturb_examples.jsonl"), "--variant", "verbs_removed"});
  REQUIRE(r.code == 0);
  auto first = json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(first.at("question") ==
        "Tommy some balloons . His mom him number0 more balloons for his birthday . Then , Tommy number1 balloons . "
        "How many balloons Tommy to with ?");
  CHECK(first.at("equation") == "- number1 number0");

  auto dir = scratch("perturb");
  r = run({"perturb", "--data", source("data/perturb_examples.jsonl"), "--out", dir.string()});
  REQUIRE(r.code == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    CHECK(e.path().filename().string().rfind("perturb_examples__", 0) == 0);
    ++files;
  }
  CHECK(files == 13);
  auto back = mwpx::load_dataset(dir / "perturb_examples__nouns_and_verbs_removed.jsonl");
  CHECK(back[2].question() == "with number0 . number1 away . How many with ?");

  CHECK(run({"perturb", "--data", source("data/perturb_examples.jsonl"), "--variant", "verbs_removed,nouns_removed"}).code ==
        2);
  fs::remove_all(dir);
}

TEST_CASE("train, predict and reduce") {
  auto dir = scratch("model");
  auto data = dir / "synth.jsonl";
  REQUIRE(run({"synth", "--out", data.string(), "--count", "40", "--seed", "3"}).code == 0);

  auto r = run({"train", "--data", data.string(), "--model", (dir / "m").string(), "--config",
                tiny_config(dir).string(), "--seed", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("\"seed\":5") != std::string::npos);
  CHECK(r.err.find("hash=") != std::string::npos);
  CHECK(fs::exists(dir / "m" / "params.bin"));

  r = run({"predict", "--model", (dir / "m").string(), "-q", "Sam had 4 cards and got 3 more . How many now ?"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("equation:") != std::string::npos);
  CHECK(r.out.find("confidence:") != std::string::npos);

  r = run({"predict", "--model", (dir / "m").string(), "--data", data.string(), "--format", "json"});
  REQUIRE(r.code == 0);
  auto line = json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(line.contains("correct"));
  CHECK(line.at("id") == "synth-0000");

  r = run({"reduce", "--model", (dir / "m").string(), "--data", data.string(), "--out", (dir / "red").string(),
           "--limit", "5"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "red" / "histogram.csv"));
  CHECK(fs::exists(dir / "red" / "summary.json"));
  std::istringstream traces(slurp(dir / "red" / "traces.jsonl"));
  std::size_t n = 0;
  for (std::string l; std::getline(traces, l); ++n) {
    auto t = json::parse(l);
    for (const auto& step : t.at("steps"))
      for (const char* key : {"step", "score", "model_confidence", "removed_word", "question"})
        CHECK(step.contains(key));
  }
  CHECK(n == 5);

  r = run({"predict", "--model", (dir / "nothing").string(), "-q", "x"});
  CHECK(r.code == 1);
  fs::remove_all(dir);
}

TEST_CASE("suite writes reproducible reports") {
  auto dir = scratch("suite");
  auto data = dir / "synth.jsonl";
  REQUIRE(run({"synth", "--out", data.string(), "--count", "40"}).code == 0);
  auto cfg = dir / "suite.json";
  std::ofstream(cfg) << R"({"solver": {"embedding_dim": 16, "hidden_dim": 24, "epochs": 2, "batch_size": 16}})";

  auto a = run({"suite", "--data", data.string(), "--config", cfg.string(), "--folds", "2", "--seed", "42", "--out",
                (dir / "r1").string()});
  REQUIRE(a.code == 0);
  for (const char* f : {"report.json", "report.md", "per_op_accuracy.csv", "op_distribution.csv",
                        "variant_accuracy.csv", "run.log", "config.json"})
    CHECK(fs::exists(dir / "r1" / f));
  CHECK(a.out.find("| Perturbation | CV Accuracy | Decrease |") != std::string::npos);

  auto b = run({"suite", "--data", data.string(), "--config", cfg.string(), "--folds", "2", "--seed", "42", "--out",
                (dir / "r2").string(), "--jobs", "2"});
  REQUIRE(b.code == 0);
  CHECK(slurp(dir / "r1" / "report.json") == slurp(dir / "r2" / "report.json"));
  CHECK(slurp(dir / "r1" / "per_op_accuracy.csv") == slurp(dir / "r2" / "per_op_accuracy.csv"));

  auto c = run({"suite", "--data", data.string(), "--config", cfg.string(), "--folds", "2", "--out",
                (dir / "r3").string(), "--format", "json", "--variant", "nouns_removed"});
  REQUIRE(c.code == 0);
  CHECK(fs::exists(dir / "r3" / "report.json"));
  CHECK_FALSE(fs::exists(dir / "r3" / "report.md"));
  CHECK(json::parse(slurp(dir / "r3" / "report.json")).at("variants").size() == 2);

  CHECK(run({"suite", "--data", data.string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("MWPX_SEED overrides the default seed") {
  auto with_default = run({"synth", "--count", "10"});
  setenv("MWPX_SEED", "7", 1);
  auto with_env = run({"synth", "--count", "10"});
  auto explicit_seed = run({"synth", "--count", "10", "--seed", "42"});
  setenv("MWPX_SEED", "not-a-number", 1);
  auto broken = run({"synth", "--count", "10"});
  unsetenv("MWPX_SEED");
  CHECK(with_env.err.find("seed=7") != std::string::npos);
  CHECK(with_env.out != with_default.out);
  CHECK(explicit_seed.out == with_default.out);
  CHECK(broken.code == 2);
}

TEST_CASE("installed binary reports exit codes") {
  auto status = [](const std::string& args) {
    int raw = std::system((std::string(MWPX_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("frobnicate") == 2);
  CHECK(status("distribution --data " + source("data/freq25.jsonl")) == 0);
  CHECK(status("distribution --data /nonexistent.jsonl") == 1);
}
