#include "mwpx/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "mwpx/error.hpp"
#include "mwpx/rng.hpp"
#include "seq2seq.hpp"

namespace mwpx {

using nlohmann::json;

namespace detail {

struct ModelState {
  SolverConfig config;
  ModelMetadata metadata;
  std::vector<std::string> input_vocab;   // 0 = <pad>, 1 = <unk>
  std::vector<std::string> output_vocab;  // 0 = <eos>, then operators and number tokens
  std::map<std::string, int, std::less<>> input_index;
  std::map<std::string, int, std::less<>> output_index;
  nn::Seq2Seq network;

  ModelState(SolverConfig cfg, std::vector<std::string> in, std::vector<std::string> out)
      : config(cfg),
        input_vocab(std::move(in)),
        output_vocab(std::move(out)),
        network(cfg, nn::Shape{input_vocab.size(), output_vocab.size()}) {
    for (std::size_t i = 0; i < input_vocab.size(); ++i) input_index.emplace(input_vocab[i], static_cast<int>(i));
    for (std::size_t i = 0; i < output_vocab.size(); ++i) output_index.emplace(output_vocab[i], static_cast<int>(i));
    if (input_index.size() != input_vocab.size() || output_index.size() != output_vocab.size())
      throw Error(ErrorCode::CorruptFile, "vocabulary contains duplicate entries");
  }

  std::vector<int> encode_source(std::span<const std::string> tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      std::string low(t);
      std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
      auto it = input_index.find(low);
      ids.push_back(it == input_index.end() ? 1 : it->second);
    }
    return ids;
  }
};

}  // namespace detail

namespace {

constexpr const char* kPadToken = "<pad>";
constexpr const char* kUnkToken = "<unk>";
constexpr const char* kEosToken = "<eos>";
constexpr double kClipNorm = 5.0;

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string vocab_hash(const std::vector<std::string>& vocab) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& w : vocab) {
    for (unsigned char c : w) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x0a;
    h *= 1099511628211ULL;
  }
  return hex64(h);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  for (const auto& l : lines) out << l << '\n';
}

constexpr char kParamMagic[8] = {'M', 'W', 'P', 'X', 'P', 'A', 'R', 'M'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T take(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value))
    throw Error(ErrorCode::CorruptFile, "params.bin is truncated");
  return value;
}

}  // namespace

std::string_view to_string(CellType cell) noexcept { return cell == CellType::Gru ? "GRU" : "LSTM"; }

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, "solver config: " + what); };
  if (embedding_dim == 0 || hidden_dim == 0 || layers == 0 || batch_size == 0 || max_decode_len == 0)
    fail("dimensions, layers, batch size and decode length must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must be in [0,1)");
  if (!(teacher_forcing_ratio >= 0.0 && teacher_forcing_ratio <= 1.0)) fail("teacher_forcing_ratio must be in [0,1]");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
}

json config_to_json(const SolverConfig& c) {
  return json{{"embedding_dim", c.embedding_dim},
              {"hidden_dim", c.hidden_dim},
              {"cell", std::string(to_string(c.cell))},
              {"layers", c.layers},
              {"dropout", c.dropout},
              {"teacher_forcing_ratio", c.teacher_forcing_ratio},
              {"learning_rate", c.learning_rate},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"max_decode_len", c.max_decode_len},
              {"seed", c.seed}};
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  try {
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
    if (j.contains("cell")) {
      auto cell = lowercase(j.at("cell").get<std::string>());
      if (cell == "gru")
        c.cell = CellType::Gru;
      else if (cell == "lstm")
        c.cell = CellType::Lstm;
      else
        throw Error(ErrorCode::InvalidArgument, "unknown cell '" + cell + "'");
    }
    c.layers = j.value("layers", c.layers);
    c.dropout = j.value("dropout", c.dropout);
    c.teacher_forcing_ratio = j.value("teacher_forcing_ratio", c.teacher_forcing_ratio);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.max_decode_len = j.value("max_decode_len", c.max_decode_len);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("solver config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string solver_config_to_json(const SolverConfig& config) { return config_to_json(config).dump(2); }

SolverConfig solver_config_from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("solver config: ") + e.what());
  }
  return config_from_json(j);
}

double mean_confidence(std::span<const double> step_probabilities) noexcept {
  if (step_probabilities.empty()) return 0.0;
  double sum = 0.0;
  for (double p : step_probabilities) sum += p;
  return sum / static_cast<double>(step_probabilities.size());
}

Prediction make_prediction(std::vector<std::string> tokens, std::vector<double> step_probabilities) {
  Prediction p;
  p.confidence = mean_confidence(step_probabilities);
  p.tokens = std::move(tokens);
  p.step_probabilities = std::move(step_probabilities);
  return p;
}

bool prediction_correct(const Prediction& prediction, const MathWordProblem& problem) noexcept {
  auto value = try_evaluate(prediction.tokens, problem.numbers);
  return value && answers_match(*value, problem.answer);
}

Prediction TrainedModel::predict(std::span<const std::string> tokens) const {
  auto decoded = state_->network.greedy_decode(state_->encode_source(tokens), state_->config.max_decode_len);
  std::vector<std::string> out;
  out.reserve(decoded.ids.size());
  for (int id : decoded.ids) out.push_back(state_->output_vocab[static_cast<std::size_t>(id)]);
  return make_prediction(std::move(out), std::move(decoded.probabilities));
}

const SolverConfig& TrainedModel::config() const noexcept { return state_->config; }
const ModelMetadata& TrainedModel::metadata() const noexcept { return state_->metadata; }
const std::vector<std::string>& TrainedModel::input_vocabulary() const noexcept { return state_->input_vocab; }
const std::vector<std::string>& TrainedModel::output_vocabulary() const noexcept { return state_->output_vocab; }
std::string TrainedModel::parameter_checksum() const { return hex64(state_->network.checksum()); }

std::size_t TrainedModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : state_->network.params()) n += static_cast<std::size_t>(p.value.size());
  return n;
}

TrainedModel train(std::span<const MathWordProblem> train_set, const SolverConfig& config,
                   const TrainOptions& options) {
  config.validate();
  if (train_set.empty()) throw Error(ErrorCode::EmptyInput, "training set is empty");

  std::set<std::string> words;
  std::size_t max_numbers = 0;
  for (const auto& p : train_set) {
    for (const auto& t : p.tokens) words.insert(lowercase(t));
    max_numbers = std::max(max_numbers, p.numbers.size());
    if (auto k = p.equation.max_number_index()) max_numbers = std::max(max_numbers, *k + 1);
  }
  std::vector<std::string> in_vocab{kPadToken, kUnkToken};
  for (const auto& w : words)
    if (w != kPadToken && w != kUnkToken) in_vocab.push_back(w);
  std::vector<std::string> out_vocab{kEosToken, "+", "-", "*", "/"};
  for (std::size_t k = 0; k < max_numbers; ++k) out_vocab.push_back(number_token(k));

  auto state = std::make_shared<detail::ModelState>(config, std::move(in_vocab), std::move(out_vocab));
  state->metadata.seed = config.seed;
  state->metadata.fold = options.fold;
  state->metadata.dataset_hash = options.dataset_hash.empty() ? dataset_hash(train_set) : options.dataset_hash;

  // Source and target ids are fixed up front; training only reorders them.
  std::vector<std::vector<int>> sources, targets;
  for (const auto& p : train_set) {
    sources.push_back(state->encode_source(p.tokens));
    std::vector<int> tgt;
    for (const auto& t : p.equation.tokens()) {
      auto it = state->output_index.find(t);
      if (it == state->output_index.end())
        throw Error(ErrorCode::UnknownToken, "equation token '" + t + "' of '" + p.id + "' is outside the output vocabulary");
      tgt.push_back(it->second);
    }
    tgt.push_back(nn::Seq2Seq::kEos);
    targets.push_back(std::move(tgt));
  }

  Rng rng(config.seed);
  auto& net = state->network;
  net.initialize(rng);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  nn::PassOptions pass{true, config.dropout, config.teacher_forcing_ratio, &rng};
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double weighted = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      nn::Batch batch;
      std::size_t tokens = 0;
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        batch.source.push_back(sources[order[i]]);
        batch.target.push_back(targets[order[i]]);
        tokens += targets[order[i]].size();
      }
      net.zero_grad();
      double loss = net.loss(batch, pass, true);
      if (!std::isfinite(loss))
        throw Error(ErrorCode::NonFiniteLoss, "loss diverged in epoch " + std::to_string(epoch));
      net.adam_step(config.learning_rate, kClipNorm, ++step);
      weighted += loss * static_cast<double>(tokens);
      seen += tokens;
    }
    double epoch_loss = weighted / static_cast<double>(seen);
    state->metadata.loss_history.push_back(epoch_loss);
    if (options.on_epoch) options.on_epoch(epoch, epoch_loss);
  }
  return TrainedModel(std::move(state));
}

void save_model(const TrainedModel& model, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  const auto& s = *model.state_;

  json meta;
  meta["format_version"] = kModelFormatVersion;
  meta["config"] = config_to_json(s.config);
  meta["seed"] = s.metadata.seed;
  meta["fold"] = s.metadata.fold ? json(*s.metadata.fold) : json(nullptr);
  meta["dataset_hash"] = s.metadata.dataset_hash;
  meta["loss_history"] = s.metadata.loss_history;
  meta["input_vocab_hash"] = vocab_hash(s.input_vocab);
  meta["output_vocab_hash"] = vocab_hash(s.output_vocab);
  meta["parameter_checksum"] = model.parameter_checksum();
  {
    std::ofstream out(dir / "metadata.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write metadata.json");
    out << meta.dump(2) << '\n';
  }
  write_lines(dir / "input_vocab.txt", s.input_vocab);
  write_lines(dir / "output_vocab.txt", s.output_vocab);

  std::ofstream out(dir / "params.bin", std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write params.bin");
  out.write(kParamMagic, sizeof kParamMagic);
  put<std::uint32_t>(out, kModelFormatVersion);
  const auto& params = s.network.params();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p.value.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p.value.cols()));
    out.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(static_cast<std::size_t>(p.value.size()) * sizeof(double)));
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for params.bin");
}

TrainedModel load_model(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "'" + dir.string() + "' is not a directory");
  json meta;
  try {
    meta = json::parse(read_text(dir / "metadata.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("metadata.json: ") + e.what());
  }
  if (meta.value("format_version", -1) != kModelFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "model format " + meta.value("format_version", json(-1)).dump() +
                                                ", expected " + std::to_string(kModelFormatVersion));
  SolverConfig config;
  ModelMetadata metadata;
  try {
    config = config_from_json(meta.at("config"));
    metadata.seed = meta.at("seed").get<std::uint64_t>();
    if (!meta.at("fold").is_null()) metadata.fold = meta.at("fold").get<std::size_t>();
    metadata.dataset_hash = meta.at("dataset_hash").get<std::string>();
    metadata.loss_history = meta.at("loss_history").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("metadata.json: ") + e.what());
  }

  auto in_vocab = read_lines(dir / "input_vocab.txt");
  auto out_vocab = read_lines(dir / "output_vocab.txt");
  if (vocab_hash(in_vocab) != meta.value("input_vocab_hash", "") ||
      vocab_hash(out_vocab) != meta.value("output_vocab_hash", ""))
    throw Error(ErrorCode::CorruptFile, "vocabulary files do not match metadata hashes");

  auto state = std::make_shared<detail::ModelState>(config, std::move(in_vocab), std::move(out_vocab));
  state->metadata = std::move(metadata);

  std::istringstream in(read_text(dir / "params.bin"));
  char magic[sizeof kParamMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kParamMagic, sizeof magic) != 0)
    throw Error(ErrorCode::CorruptFile, "params.bin has a bad header");
  if (auto v = take<std::uint32_t>(in); v != kModelFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "params.bin format " + std::to_string(v));
  auto& params = state->network.params();
  if (take<std::uint32_t>(in) != params.size())
    throw Error(ErrorCode::CorruptFile, "params.bin parameter count does not match the architecture");
  for (auto& p : params) {
    std::string name(take<std::uint32_t>(in), '\0');
    if (!in.read(name.data(), static_cast<std::streamsize>(name.size())) || name != p.name)
      throw Error(ErrorCode::CorruptFile, "expected parameter '" + p.name + "'");
    auto rows = take<std::uint64_t>(in);
    auto cols = take<std::uint64_t>(in);
    if (rows != static_cast<std::uint64_t>(p.value.rows()) || cols != static_cast<std::uint64_t>(p.value.cols()))
      throw Error(ErrorCode::CorruptFile, "shape mismatch for '" + p.name + "'");
    if (!in.read(reinterpret_cast<char*>(p.value.data()),
                 static_cast<std::streamsize>(static_cast<std::size_t>(p.value.size()) * sizeof(double))))
      throw Error(ErrorCode::CorruptFile, "params.bin is truncated");
  }
  TrainedModel model(std::move(state));
  if (meta.contains("parameter_checksum") && meta.at("parameter_checksum") != model.parameter_checksum())
    throw Error(ErrorCode::CorruptFile, "parameter checksum mismatch");
  return model;
}

}  // namespace mwpx
