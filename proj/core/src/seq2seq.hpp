#pragma once

// Encoder-decoder network internals. Not installed; tests include it to
// reach the loss and gradients directly.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mwpx/rng.hpp"
#include "mwpx/solver.hpp"

namespace mwpx::nn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Param {
  std::string name;
  Mat value;
  Mat grad;
  Mat adam_m;
  Mat adam_v;
};

struct Shape {
  std::size_t input_vocab = 0;
  std::size_t output_vocab = 0;  // includes <eos>; decoder inputs add <sos>
};

struct Batch {
  std::vector<std::vector<int>> source;  // may be empty sequences
  std::vector<std::vector<int>> target;  // output ids ending in <eos>
};

struct PassOptions {
  bool training = false;
  double dropout = 0.0;
  double teacher_forcing = 1.0;
  Rng* rng = nullptr;  // required when dropout > 0 or teacher_forcing < 1
};

struct Decoded {
  std::vector<int> ids;  // without the terminating <eos>
  std::vector<double> probabilities;
};

class Seq2Seq {
 public:
  static constexpr int kPad = 0;
  static constexpr int kEos = 0;

  Seq2Seq(const SolverConfig& config, Shape shape);

  /// Uniform initialization from `rng`.
  void initialize(Rng& rng);

  const SolverConfig& config() const noexcept { return config_; }
  const Shape& shape() const noexcept { return shape_; }
  int sos() const noexcept { return static_cast<int>(shape_.output_vocab); }

  std::vector<Param>& params() noexcept { return params_; }
  const std::vector<Param>& params() const noexcept { return params_; }
  Param& param(const std::string& name);

  void zero_grad();

  /// Mean per-token cross-entropy over the batch. When `backward` is set the
  /// gradients are accumulated into Param::grad.
  double loss(const Batch& batch, const PassOptions& options, bool backward);

  Decoded greedy_decode(const std::vector<int>& source, std::size_t max_len) const;

  /// Global-norm clipping followed by one Adam update.
  void adam_step(double learning_rate, double clip_norm, std::size_t step);

  std::uint64_t checksum() const;

 private:
  struct Layer {
    std::size_t wx, wh, bx, bh;  // indices into params_
    std::size_t input_dim;
  };

  struct CellCache {
    Mat x, h_prev, c_prev;
    Mat g0, g1, g2, g3;  // GRU: r, z, n, gh_n. LSTM: i, f, g, o.
    Mat c, tanh_c;
    Eigen::RowVectorXd mask;
    Mat drop;  // inverted dropout multipliers applied to x, empty if none
  };

  struct State {
    std::vector<Mat> h;
    std::vector<Mat> c;
  };

  std::size_t add(const std::string& name, Eigen::Index rows, Eigen::Index cols);

  void cell_forward(const Layer& layer, const Mat& x, const Eigen::RowVectorXd& mask, Mat& h, Mat& c,
                    CellCache* cache) const;
  void cell_backward(const Layer& layer, const CellCache& cache, Mat& dh, Mat& dc, Mat& dx);

  void stack_step(const std::vector<Layer>& layers, Mat input, const Eigen::RowVectorXd& mask, State& state,
                  std::vector<CellCache>* caches, const PassOptions& options) const;
  Mat stack_step_backward(const std::vector<Layer>& layers, std::vector<CellCache>& caches, Mat d_top,
                          std::vector<Mat>& dh, std::vector<Mat>& dc);

  SolverConfig config_;
  Shape shape_;
  std::vector<Param> params_;
  std::size_t enc_embed_ = 0, dec_embed_ = 0, wc_ = 0, bc_ = 0, wo_ = 0, bo_ = 0;
  std::vector<Layer> encoder_;
  std::vector<Layer> decoder_;
};

}  // namespace mwpx::nn
