#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwpx/corpus.hpp"

namespace mwpx {

enum class CellType { Gru, Lstm };

std::string_view to_string(CellType cell) noexcept;

struct SolverConfig {
  std::size_t embedding_dim = 128;
  std::size_t hidden_dim = 256;
  CellType cell = CellType::Gru;
  std::size_t layers = 1;
  double dropout = 0.1;
  double teacher_forcing_ratio = 0.9;
  double learning_rate = 1e-3;
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  std::size_t max_decode_len = 15;
  std::uint64_t seed = 42;

  /// Throws InvalidArgument when a dimension is zero or a ratio is outside [0,1].
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

std::string solver_config_to_json(const SolverConfig& config);
/// Missing keys keep their defaults.
SolverConfig solver_config_from_json(std::string_view json_text);

struct Prediction {
  std::vector<std::string> tokens;
  std::vector<double> step_probabilities;  // one per emitted token
  double confidence = 0.0;
};

/// Arithmetic mean of the per-step probabilities; 0 for an empty sequence.
double mean_confidence(std::span<const double> step_probabilities) noexcept;

/// Builds a Prediction whose confidence is the mean of its step probabilities.
Prediction make_prediction(std::vector<std::string> tokens, std::vector<double> step_probabilities);

/// Anything that maps a (masked) token sequence to an equation prediction.
/// Implementations must be deterministic and safe for concurrent calls.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Prediction predict(std::span<const std::string> tokens) const = 0;
};

/// True when the predicted equation evaluates to the problem's answer.
bool prediction_correct(const Prediction& prediction, const MathWordProblem& problem) noexcept;

struct ModelMetadata {
  std::uint64_t seed = 0;
  std::optional<std::size_t> fold;
  std::string dataset_hash;
  std::vector<double> loss_history;  // mean token loss per epoch
};

namespace detail {
struct ModelState;
}

struct TrainOptions {
  std::optional<std::size_t> fold;
  std::string dataset_hash;  // computed from the training set when empty
  std::function<void(std::size_t epoch, double loss)> on_epoch;
};

/// Immutable trained encoder-decoder. Copies share the same parameters.
class TrainedModel final : public Predictor {
 public:
  /// Greedy decode; unknown words map to <unk>, case is folded.
  Prediction predict(std::span<const std::string> tokens) const override;

  const SolverConfig& config() const noexcept;
  const ModelMetadata& metadata() const noexcept;
  const std::vector<std::string>& input_vocabulary() const noexcept;
  const std::vector<std::string>& output_vocabulary() const noexcept;
  /// FNV-1a over every parameter's bytes, as hex.
  std::string parameter_checksum() const;
  std::size_t parameter_count() const;

 private:
  friend TrainedModel train(std::span<const MathWordProblem>, const SolverConfig&, const TrainOptions&);
  friend TrainedModel load_model(const std::filesystem::path&);
  friend void save_model(const TrainedModel&, const std::filesystem::path&);

  explicit TrainedModel(std::shared_ptr<const detail::ModelState> state) : state_(std::move(state)) {}
  std::shared_ptr<const detail::ModelState> state_;
};

/// Single-threaded and deterministic for a fixed config and training-set
/// order. Throws EmptyInput for an empty set and NonFiniteLoss (naming the
/// epoch) on divergence.
TrainedModel train(std::span<const MathWordProblem> train_set, const SolverConfig& config,
                   const TrainOptions& options = {});

inline constexpr int kModelFormatVersion = 1;

/// Writes metadata.json, input_vocab.txt, output_vocab.txt and params.bin.
void save_model(const TrainedModel& model, const std::filesystem::path& dir);
/// Throws Io for a missing directory or file, VersionMismatch and CorruptFile.
TrainedModel load_model(const std::filesystem::path& dir);

}  // namespace mwpx
