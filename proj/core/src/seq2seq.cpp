#include "seq2seq.hpp"

#include <cmath>
#include <cstring>

#include "mwpx/error.hpp"

namespace mwpx::nn {

namespace {

Mat sigmoid(const Mat& x) { return (1.0 / (1.0 + (-x.array()).exp())).matrix(); }

Mat tanh_of(const Mat& x) { return x.array().tanh().matrix(); }

// Columns with mask 0 keep their previous value (padding past a sequence end).
void blend(Mat& target, const Mat& fresh, const Eigen::RowVectorXd& mask) {
  for (Eigen::Index b = 0; b < fresh.cols(); ++b)
    if (mask(b) != 0.0) target.col(b) = fresh.col(b);
}

void split_by_mask(const Mat& d, const Eigen::RowVectorXd& mask, Mat& live, Mat& carried) {
  live = d;
  carried = Mat::Zero(d.rows(), d.cols());
  for (Eigen::Index b = 0; b < d.cols(); ++b) {
    if (mask(b) == 0.0) {
      carried.col(b) = d.col(b);
      live.col(b).setZero();
    }
  }
}

Mat gather(const Mat& table, const std::vector<int>& ids) {
  Mat out(table.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t b = 0; b < ids.size(); ++b) out.col(static_cast<Eigen::Index>(b)) = table.col(ids[b]);
  return out;
}

void scatter_add(Mat& table_grad, const std::vector<int>& ids, const Mat& d) {
  for (std::size_t b = 0; b < ids.size(); ++b) table_grad.col(ids[b]) += d.col(static_cast<Eigen::Index>(b));
}

void softmax_columns(Mat& logits) {
  for (Eigen::Index b = 0; b < logits.cols(); ++b) {
    auto col = logits.col(b);
    double m = col.maxCoeff();
    col = (col.array() - m).exp().matrix();
    col /= col.sum();
  }
}

}  // namespace

Seq2Seq::Seq2Seq(const SolverConfig& config, Shape shape) : config_(config), shape_(shape) {
  config_.validate();
  const auto H = static_cast<Eigen::Index>(config_.hidden_dim);
  const auto E = static_cast<Eigen::Index>(config_.embedding_dim);
  const Eigen::Index gates = config_.cell == CellType::Gru ? 3 : 4;

  auto make_layers = [&](const std::string& prefix, std::vector<Layer>& layers) {
    for (std::size_t l = 0; l < config_.layers; ++l) {
      const Eigen::Index in = l == 0 ? E : H;
      const std::string p = prefix + ".l" + std::to_string(l) + ".";
      Layer layer;
      layer.wx = add(p + "weight_ih", gates * H, in);
      layer.wh = add(p + "weight_hh", gates * H, H);
      layer.bx = add(p + "bias_ih", gates * H, 1);
      layer.bh = add(p + "bias_hh", gates * H, 1);
      layer.input_dim = static_cast<std::size_t>(in);
      layers.push_back(layer);
    }
  };

  enc_embed_ = add("encoder.embedding", E, static_cast<Eigen::Index>(shape_.input_vocab));
  make_layers("encoder.rnn", encoder_);
  dec_embed_ = add("decoder.embedding", E, static_cast<Eigen::Index>(shape_.output_vocab + 1));
  make_layers("decoder.rnn", decoder_);
  wc_ = add("attention.combine.weight", H, 2 * H);
  bc_ = add("attention.combine.bias", H, 1);
  wo_ = add("output.weight", static_cast<Eigen::Index>(shape_.output_vocab), H);
  bo_ = add("output.bias", static_cast<Eigen::Index>(shape_.output_vocab), 1);
}

std::size_t Seq2Seq::add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  Param p;
  p.name = name;
  p.value = Mat::Zero(rows, cols);
  p.grad = Mat::Zero(rows, cols);
  p.adam_m = Mat::Zero(rows, cols);
  p.adam_v = Mat::Zero(rows, cols);
  params_.push_back(std::move(p));
  return params_.size() - 1;
}

Param& Seq2Seq::param(const std::string& name) {
  for (auto& p : params_)
    if (p.name == name) return p;
  throw Error(ErrorCode::InvalidArgument, "no parameter named '" + name + "'");
}

void Seq2Seq::initialize(Rng& rng) {
  const double k = 1.0 / std::sqrt(static_cast<double>(config_.hidden_dim));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const double bound = (i == enc_embed_ || i == dec_embed_) ? 1.0 : k;
    auto& v = params_[i].value;
    for (Eigen::Index j = 0; j < v.size(); ++j) v.data()[j] = rng.uniform(-bound, bound);
  }
}

void Seq2Seq::zero_grad() {
  for (auto& p : params_) p.grad.setZero();
}

void Seq2Seq::cell_forward(const Layer& layer, const Mat& x, const Eigen::RowVectorXd& mask, Mat& h, Mat& c,
                           CellCache* cache) const {
  const auto H = static_cast<Eigen::Index>(config_.hidden_dim);
  const Mat& wx = params_[layer.wx].value;
  const Mat& wh = params_[layer.wh].value;
  const Mat& bx = params_[layer.bx].value;
  const Mat& bh = params_[layer.bh].value;

  if (config_.cell == CellType::Gru) {
    Mat gx = wx * x;
    gx.colwise() += bx.col(0);
    Mat gh = wh * h;
    gh.colwise() += bh.col(0);
    Mat r = sigmoid(gx.topRows(H) + gh.topRows(H));
    Mat z = sigmoid(gx.middleRows(H, H) + gh.middleRows(H, H));
    Mat ghn = gh.bottomRows(H);
    Mat n = tanh_of(gx.bottomRows(H) + r.cwiseProduct(ghn));
    Mat fresh = (1.0 - z.array()).matrix().cwiseProduct(n) + z.cwiseProduct(h);
    if (cache) {
      cache->x = x;
      cache->h_prev = h;
      cache->g0 = std::move(r);
      cache->g1 = std::move(z);
      cache->g2 = std::move(n);
      cache->g3 = std::move(ghn);
      cache->mask = mask;
    }
    blend(h, fresh, mask);
  } else {
    Mat g = wx * x + wh * h;
    g.colwise() += bx.col(0) + bh.col(0);
    Mat i = sigmoid(g.topRows(H));
    Mat f = sigmoid(g.middleRows(H, H));
    Mat gg = tanh_of(g.middleRows(2 * H, H));
    Mat o = sigmoid(g.bottomRows(H));
    Mat c_new = f.cwiseProduct(c) + i.cwiseProduct(gg);
    Mat tc = tanh_of(c_new);
    Mat fresh = o.cwiseProduct(tc);
    if (cache) {
      cache->x = x;
      cache->h_prev = h;
      cache->c_prev = c;
      cache->g0 = std::move(i);
      cache->g1 = std::move(f);
      cache->g2 = std::move(gg);
      cache->g3 = std::move(o);
      cache->c = c_new;
      cache->tanh_c = std::move(tc);
      cache->mask = mask;
    }
    blend(h, fresh, mask);
    blend(c, c_new, mask);
  }
}

void Seq2Seq::cell_backward(const Layer& layer, const CellCache& cache, Mat& dh, Mat& dc, Mat& dx) {
  Param& wx = params_[layer.wx];
  Param& wh = params_[layer.wh];
  Param& bx = params_[layer.bx];
  Param& bh = params_[layer.bh];

  Mat dh_live, dh_carry;
  split_by_mask(dh, cache.mask, dh_live, dh_carry);

  if (config_.cell == CellType::Gru) {
    const Mat& r = cache.g0;
    const Mat& z = cache.g1;
    const Mat& n = cache.g2;
    const Mat& ghn = cache.g3;
    Mat dn = dh_live.cwiseProduct((1.0 - z.array()).matrix());
    Mat dz = dh_live.cwiseProduct(cache.h_prev - n);
    Mat dh_prev = dh_live.cwiseProduct(z);
    Mat dan = dn.cwiseProduct((1.0 - n.array().square()).matrix());
    Mat dghn = dan.cwiseProduct(r);
    Mat dr = dan.cwiseProduct(ghn);
    Mat dar = dr.cwiseProduct((r.array() * (1.0 - r.array())).matrix());
    Mat daz = dz.cwiseProduct((z.array() * (1.0 - z.array())).matrix());

    const auto H = dh.rows();
    Mat dgx(3 * H, dh.cols());
    dgx << dar, daz, dan;
    Mat dgh(3 * H, dh.cols());
    dgh << dar, daz, dghn;

    wx.grad.noalias() += dgx * cache.x.transpose();
    bx.grad += dgx.rowwise().sum();
    wh.grad.noalias() += dgh * cache.h_prev.transpose();
    bh.grad += dgh.rowwise().sum();
    dx = wx.value.transpose() * dgx;
    dh = dh_carry + dh_prev + wh.value.transpose() * dgh;
  } else {
    Mat dc_live, dc_carry;
    split_by_mask(dc, cache.mask, dc_live, dc_carry);
    const Mat& i = cache.g0;
    const Mat& f = cache.g1;
    const Mat& gg = cache.g2;
    const Mat& o = cache.g3;
    const Mat& tc = cache.tanh_c;
    Mat d_o = dh_live.cwiseProduct(tc);
    Mat dct = dc_live + dh_live.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix());
    Mat di = dct.cwiseProduct(gg);
    Mat df = dct.cwiseProduct(cache.c_prev);
    Mat dgg = dct.cwiseProduct(i);
    Mat dc_prev = dct.cwiseProduct(f);

    const auto H = dh.rows();
    Mat da(4 * H, dh.cols());
    da << di.cwiseProduct((i.array() * (1.0 - i.array())).matrix()),
        df.cwiseProduct((f.array() * (1.0 - f.array())).matrix()),
        dgg.cwiseProduct((1.0 - gg.array().square()).matrix()),
        d_o.cwiseProduct((o.array() * (1.0 - o.array())).matrix());

    wx.grad.noalias() += da * cache.x.transpose();
    wh.grad.noalias() += da * cache.h_prev.transpose();
    Mat db = da.rowwise().sum();
    bx.grad += db;
    bh.grad += db;
    dx = wx.value.transpose() * da;
    dh = dh_carry + wh.value.transpose() * da;
    dc = dc_carry + dc_prev;
  }
}

void Seq2Seq::stack_step(const std::vector<Layer>& layers, Mat input, const Eigen::RowVectorXd& mask,
                         State& state, std::vector<CellCache>* caches, const PassOptions& options) const {
  if (caches) caches->assign(layers.size(), CellCache{});
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Mat x = l == 0 ? std::move(input) : state.h[l - 1];
    Mat drop;
    if (options.training && options.dropout > 0.0) {
      const double keep = 1.0 - options.dropout;
      drop.resize(x.rows(), x.cols());
      for (Eigen::Index j = 0; j < drop.size(); ++j)
        drop.data()[j] = options.rng->bernoulli(keep) ? 1.0 / keep : 0.0;
      x = x.cwiseProduct(drop);
    }
    CellCache* cache = caches ? &(*caches)[l] : nullptr;
    cell_forward(layers[l], x, mask, state.h[l], state.c[l], cache);
    if (cache) cache->drop = std::move(drop);
  }
}

Mat Seq2Seq::stack_step_backward(const std::vector<Layer>& layers, std::vector<CellCache>& caches, Mat d_top,
                                 std::vector<Mat>& dh, std::vector<Mat>& dc) {
  Mat d_above = std::move(d_top);
  for (std::size_t l = layers.size(); l-- > 0;) {
    Mat dhl = dh[l] + d_above;
    Mat dx;
    cell_backward(layers[l], caches[l], dhl, dc[l], dx);
    if (caches[l].drop.size() > 0) dx = dx.cwiseProduct(caches[l].drop);
    dh[l] = std::move(dhl);
    d_above = std::move(dx);
  }
  return d_above;
}

double Seq2Seq::loss(const Batch& batch, const PassOptions& options, bool backward) {
  const auto H = static_cast<Eigen::Index>(config_.hidden_dim);
  const std::size_t B = batch.source.size();
  const auto Bi = static_cast<Eigen::Index>(B);
  const std::size_t L = config_.layers;
  const bool lstm = config_.cell == CellType::Lstm;

  std::size_t src_len = 0, tgt_len = 0, tokens = 0;
  for (std::size_t b = 0; b < B; ++b) {
    src_len = std::max(src_len, batch.source[b].size());
    tgt_len = std::max(tgt_len, batch.target[b].size());
    tokens += batch.target[b].size();
  }
  if (tokens == 0) return 0.0;

  State state;
  for (std::size_t l = 0; l < L; ++l) {
    state.h.push_back(Mat::Zero(H, Bi));
    state.c.push_back(lstm ? Mat::Zero(H, Bi) : Mat());
  }

  // Encoder.
  std::vector<Mat> outs(src_len);
  std::vector<std::vector<CellCache>> enc_caches(backward ? src_len : 0);
  std::vector<std::vector<int>> enc_ids(src_len, std::vector<int>(B, kPad));
  for (std::size_t t = 0; t < src_len; ++t) {
    Eigen::RowVectorXd mask(Bi);
    for (std::size_t b = 0; b < B; ++b) {
      bool live = t < batch.source[b].size();
      mask(static_cast<Eigen::Index>(b)) = live ? 1.0 : 0.0;
      if (live) enc_ids[t][b] = batch.source[b][t];
    }
    stack_step(encoder_, gather(params_[enc_embed_].value, enc_ids[t]), mask, state,
               backward ? &enc_caches[t] : nullptr, options);
    outs[t] = state.h.back();
  }

  // Decoder.
  struct Step {
    std::vector<int> ids;
    std::vector<CellCache> caches;
    Mat alpha, s, concat, ht, p;
  };
  std::vector<Step> steps(tgt_len);
  const bool teacher = !options.training || options.teacher_forcing >= 1.0 ||
                       options.rng->bernoulli(options.teacher_forcing);
  const Eigen::RowVectorXd all_live = Eigen::RowVectorXd::Ones(Bi);
  const Mat& wc = params_[wc_].value;
  const Mat& wo = params_[wo_].value;
  std::vector<int> prev(B, sos());
  double total = 0.0;

  for (std::size_t j = 0; j < tgt_len; ++j) {
    Step& st = steps[j];
    st.ids = prev;
    stack_step(decoder_, gather(params_[dec_embed_].value, prev), all_live, state,
               backward ? &st.caches : nullptr, options);
    st.s = state.h.back();

    st.alpha = Mat::Zero(static_cast<Eigen::Index>(src_len), Bi);
    Mat ctx = Mat::Zero(H, Bi);
    for (std::size_t b = 0; b < B; ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      const std::size_t n = batch.source[b].size();
      if (n == 0) continue;
      Vec e(static_cast<Eigen::Index>(n));
      for (std::size_t t = 0; t < n; ++t) e(static_cast<Eigen::Index>(t)) = st.s.col(bi).dot(outs[t].col(bi));
      e = (e.array() - e.maxCoeff()).exp().matrix();
      e /= e.sum();
      for (std::size_t t = 0; t < n; ++t) {
        st.alpha(static_cast<Eigen::Index>(t), bi) = e(static_cast<Eigen::Index>(t));
        ctx.col(bi) += e(static_cast<Eigen::Index>(t)) * outs[t].col(bi);
      }
    }
    st.concat.resize(2 * H, Bi);
    st.concat << st.s, ctx;
    Mat pre = wc * st.concat;
    pre.colwise() += params_[bc_].value.col(0);
    st.ht = tanh_of(pre);
    st.p = wo * st.ht;
    st.p.colwise() += params_[bo_].value.col(0);
    softmax_columns(st.p);

    for (std::size_t b = 0; b < B; ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      if (j < batch.target[b].size()) total -= std::log(st.p(batch.target[b][j], bi));
      if (teacher) {
        prev[b] = j < batch.target[b].size() ? batch.target[b][j] : kEos;
      } else {
        Eigen::Index best = 0;
        st.p.col(bi).maxCoeff(&best);
        prev[b] = static_cast<int>(best);
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(tokens);
  const double mean_loss = total * scale;
  if (!backward) return mean_loss;

  // Backward through the decoder.
  std::vector<Mat> d_outs(src_len, Mat::Zero(H, Bi));
  std::vector<Mat> dh(L, Mat::Zero(H, Bi));
  std::vector<Mat> dc(L, lstm ? Mat::Zero(H, Bi) : Mat());
  Param& wc_p = params_[wc_];
  Param& wo_p = params_[wo_];

  for (std::size_t j = tgt_len; j-- > 0;) {
    Step& st = steps[j];
    Mat dlogits = st.p;
    for (std::size_t b = 0; b < B; ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      if (j < batch.target[b].size()) {
        dlogits(batch.target[b][j], bi) -= 1.0;
        dlogits.col(bi) *= scale;
      } else {
        dlogits.col(bi).setZero();
      }
    }
    wo_p.grad.noalias() += dlogits * st.ht.transpose();
    params_[bo_].grad += dlogits.rowwise().sum();
    Mat dpre = (wo_p.value.transpose() * dlogits).cwiseProduct((1.0 - st.ht.array().square()).matrix());
    wc_p.grad.noalias() += dpre * st.concat.transpose();
    params_[bc_].grad += dpre.rowwise().sum();
    Mat dconcat = wc_p.value.transpose() * dpre;
    Mat ds = dconcat.topRows(H);
    Mat dctx = dconcat.bottomRows(H);

    for (std::size_t b = 0; b < B; ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      const std::size_t n = batch.source[b].size();
      if (n == 0) continue;
      Vec dalpha(static_cast<Eigen::Index>(n));
      for (std::size_t t = 0; t < n; ++t) dalpha(static_cast<Eigen::Index>(t)) = dctx.col(bi).dot(outs[t].col(bi));
      double weighted = 0.0;
      for (std::size_t t = 0; t < n; ++t) weighted += st.alpha(static_cast<Eigen::Index>(t), bi) * dalpha(static_cast<Eigen::Index>(t));
      for (std::size_t t = 0; t < n; ++t) {
        const double a = st.alpha(static_cast<Eigen::Index>(t), bi);
        const double de = a * (dalpha(static_cast<Eigen::Index>(t)) - weighted);
        d_outs[t].col(bi) += a * dctx.col(bi) + de * st.s.col(bi);
        ds.col(bi) += de * outs[t].col(bi);
      }
    }
    Mat d_emb = stack_step_backward(decoder_, st.caches, std::move(ds), dh, dc);
    scatter_add(params_[dec_embed_].grad, st.ids, d_emb);
  }

  // Backward through the encoder; dh/dc now hold the gradient of its final state.
  for (std::size_t t = src_len; t-- > 0;) {
    Mat d_emb = stack_step_backward(encoder_, enc_caches[t], d_outs[t], dh, dc);
    scatter_add(params_[enc_embed_].grad, enc_ids[t], d_emb);
  }
  return mean_loss;
}

Decoded Seq2Seq::greedy_decode(const std::vector<int>& source, std::size_t max_len) const {
  const auto H = static_cast<Eigen::Index>(config_.hidden_dim);
  const bool lstm = config_.cell == CellType::Lstm;
  PassOptions eval;
  State state;
  for (std::size_t l = 0; l < config_.layers; ++l) {
    state.h.push_back(Mat::Zero(H, 1));
    state.c.push_back(lstm ? Mat::Zero(H, 1) : Mat());
  }
  const Eigen::RowVectorXd live = Eigen::RowVectorXd::Ones(1);
  std::vector<Mat> outs;
  outs.reserve(source.size());
  for (int id : source) {
    stack_step(encoder_, params_[enc_embed_].value.col(id), live, state, nullptr, eval);
    outs.push_back(state.h.back());
  }

  Decoded out;
  int prev = sos();
  Mat concat(2 * H, 1);
  for (std::size_t j = 0; j < max_len; ++j) {
    stack_step(decoder_, params_[dec_embed_].value.col(prev), live, state, nullptr, eval);
    const Mat& s = state.h.back();
    Mat ctx = Mat::Zero(H, 1);
    if (!outs.empty()) {
      Vec e(static_cast<Eigen::Index>(outs.size()));
      for (std::size_t t = 0; t < outs.size(); ++t) e(static_cast<Eigen::Index>(t)) = s.col(0).dot(outs[t].col(0));
      e = (e.array() - e.maxCoeff()).exp().matrix();
      e /= e.sum();
      for (std::size_t t = 0; t < outs.size(); ++t) ctx += e(static_cast<Eigen::Index>(t)) * outs[t];
    }
    concat << s, ctx;
    Mat pre = params_[wc_].value * concat + params_[bc_].value;
    Mat p = params_[wo_].value * tanh_of(pre) + params_[bo_].value;
    softmax_columns(p);
    Eigen::Index best = 0;
    p.col(0).maxCoeff(&best);
    if (best == kEos) break;
    out.ids.push_back(static_cast<int>(best));
    out.probabilities.push_back(p(best, 0));
    prev = static_cast<int>(best);
  }
  return out;
}

void Seq2Seq::adam_step(double learning_rate, double clip_norm, std::size_t step) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double sq = 0.0;
  for (const auto& p : params_) sq += p.grad.squaredNorm();
  const double norm = std::sqrt(sq);
  const double scale = (clip_norm > 0.0 && norm > clip_norm) ? clip_norm / norm : 1.0;
  const double t = static_cast<double>(step);
  const double c1 = 1.0 - std::pow(beta1, t);
  const double c2 = 1.0 - std::pow(beta2, t);
  for (auto& p : params_) {
    Mat g = p.grad * scale;
    p.adam_m = beta1 * p.adam_m + (1.0 - beta1) * g;
    p.adam_v = beta2 * p.adam_v + (1.0 - beta2) * g.cwiseProduct(g);
    p.value.array() -= learning_rate * (p.adam_m.array() / c1) / ((p.adam_v.array() / c2).sqrt() + eps);
  }
}

std::uint64_t Seq2Seq::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& p : params_) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(p.value.data());
    for (std::size_t i = 0; i < static_cast<std::size_t>(p.value.size()) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace mwpx::nn
