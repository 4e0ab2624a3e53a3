#include "gamerep/network.hpp"

#include <Eigen/Core>

#include <cmath>

#include "gamerep/error.hpp"
#include "gamerep/rng.hpp"

namespace gamerep {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<MatRM>;
using MapC = Eigen::Map<const MatRM>;

int conv_out_dim(int in, int kernel, int stride) {
  const int pad = kernel / 2;
  return (in + 2 * pad - kernel) / stride + 1;
}

std::size_t param_index(const Parameters& p, const std::string& name) {
  for (std::size_t i = 0; i < p.entries.size(); ++i)
    if (p.entries[i].name == name) return i;
  throw data_error("unknown-tensor", "no parameter tensor named '" + name + "'");
}

// Unrolls one sample's receptive fields into cols [IC*K*K x OH*OW].
void im2col(const double* in, int ic, int h, int w, int k, int stride,
            int oh, int ow, double* cols) {
  const int pad = k / 2;
  std::fill(cols, cols + static_cast<std::size_t>(ic) * k * k * oh * ow, 0.0);
  for (int c = 0; c < ic; ++c) {
    const double* plane = in + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        double* row = cols + (static_cast<std::size_t>(c) * k * k + ky * k + kx) *
                                 (static_cast<std::size_t>(oh) * ow);
        for (int oy = 0; oy < oh; ++oy) {
          const int y = oy * stride + ky - pad;
          if (y < 0 || y >= h) continue;
          const double* src = plane + static_cast<std::size_t>(y) * w;
          double* dst = row + static_cast<std::size_t>(oy) * ow;
          for (int ox = 0; ox < ow; ++ox) {
            const int x = ox * stride + kx - pad;
            if (x >= 0 && x < w) dst[ox] = src[x];
          }
        }
      }
    }
  }
}

// Scatter-add of cols back into one sample's input gradient.
void col2im_add(const double* cols, int ic, int h, int w, int k, int stride,
                int oh, int ow, double* din) {
  const int pad = k / 2;
  for (int c = 0; c < ic; ++c) {
    double* plane = din + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const double* row = cols + (static_cast<std::size_t>(c) * k * k + ky * k + kx) *
                                       (static_cast<std::size_t>(oh) * ow);
        for (int oy = 0; oy < oh; ++oy) {
          const int y = oy * stride + ky - pad;
          if (y < 0 || y >= h) continue;
          double* dst = plane + static_cast<std::size_t>(y) * w;
          const double* src = row + static_cast<std::size_t>(oy) * ow;
          for (int ox = 0; ox < ow; ++ox) {
            const int x = ox * stride + kx - pad;
            if (x >= 0 && x < w) dst[x] += src[ox];
          }
        }
      }
    }
  }
}

Tensor conv_forward(const Tensor& in, const Tensor& weight, const Tensor& bias,
                    int stride) {
  const int b = static_cast<int>(in.dim(0));
  const int ic = static_cast<int>(in.dim(1));
  const int h = static_cast<int>(in.dim(2));
  const int w = static_cast<int>(in.dim(3));
  const int oc = static_cast<int>(weight.dim(0));
  const int k = static_cast<int>(weight.dim(2));
  const int oh = conv_out_dim(h, k, stride);
  const int ow = conv_out_dim(w, k, stride);
  const std::size_t ick2 = static_cast<std::size_t>(ic) * k * k;
  const std::size_t ohw = static_cast<std::size_t>(oh) * ow;

  Tensor out({static_cast<std::size_t>(b), static_cast<std::size_t>(oc),
              static_cast<std::size_t>(oh), static_cast<std::size_t>(ow)});
  std::vector<double> cols(ick2 * ohw);
  MapC wm(weight.data(), oc, static_cast<Eigen::Index>(ick2));
  for (int s = 0; s < b; ++s) {
    const double* in_s = in.data() + static_cast<std::size_t>(s) * ic * h * w;
    double* out_s = out.data() + static_cast<std::size_t>(s) * oc * ohw;
    im2col(in_s, ic, h, w, k, stride, oh, ow, cols.data());
    MapC cm(cols.data(), static_cast<Eigen::Index>(ick2), static_cast<Eigen::Index>(ohw));
    MapM om(out_s, oc, static_cast<Eigen::Index>(ohw));
    om.noalias() = wm * cm;
    for (int c = 0; c < oc; ++c) om.row(c).array() += bias[static_cast<std::size_t>(c)];
  }
  return out;
}

// dW/db accumulate; returns gradient w.r.t. the layer input.
Tensor conv_backward(const Tensor& in, const Tensor& weight, const Tensor& d_out,
                     int stride, Tensor& d_weight, Tensor& d_bias) {
  const int b = static_cast<int>(in.dim(0));
  const int ic = static_cast<int>(in.dim(1));
  const int h = static_cast<int>(in.dim(2));
  const int w = static_cast<int>(in.dim(3));
  const int oc = static_cast<int>(weight.dim(0));
  const int k = static_cast<int>(weight.dim(2));
  const int oh = static_cast<int>(d_out.dim(2));
  const int ow = static_cast<int>(d_out.dim(3));
  const std::size_t ick2 = static_cast<std::size_t>(ic) * k * k;
  const std::size_t ohw = static_cast<std::size_t>(oh) * ow;

  Tensor d_in(in.shape());
  std::vector<double> cols(ick2 * ohw);
  std::vector<double> d_cols(ick2 * ohw);
  MapC wm(weight.data(), oc, static_cast<Eigen::Index>(ick2));
  MapM dwm(d_weight.data(), oc, static_cast<Eigen::Index>(ick2));
  for (int s = 0; s < b; ++s) {
    const double* in_s = in.data() + static_cast<std::size_t>(s) * ic * h * w;
    const double* dout_s = d_out.data() + static_cast<std::size_t>(s) * oc * ohw;
    double* din_s = d_in.data() + static_cast<std::size_t>(s) * ic * h * w;
    im2col(in_s, ic, h, w, k, stride, oh, ow, cols.data());
    MapC cm(cols.data(), static_cast<Eigen::Index>(ick2), static_cast<Eigen::Index>(ohw));
    MapC dom(dout_s, oc, static_cast<Eigen::Index>(ohw));
    dwm.noalias() += dom * cm.transpose();
    for (int c = 0; c < oc; ++c) d_bias[static_cast<std::size_t>(c)] += dom.row(c).sum();
    MapM dcm(d_cols.data(), static_cast<Eigen::Index>(ick2), static_cast<Eigen::Index>(ohw));
    dcm.noalias() = wm.transpose() * dom;
    col2im_add(d_cols.data(), ic, h, w, k, stride, oh, ow, din_s);
  }
  return d_in;
}

void relu_inplace(Tensor& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] < 0.0) t[i] = 0.0;
}

}  // namespace

Tensor batch_from_images(std::span<const Image> images, int h, int w) {
  Tensor batch({images.size(), 3, static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  for (std::size_t s = 0; s < images.size(); ++s) {
    const Image* img = &images[s];
    Image resized;
    if (img->height != h || img->width != w) {
      resized = resize_bilinear(*img, h, w);
      img = &resized;
    }
    double* dst = batch.data() + s * 3 * static_cast<std::size_t>(h) * w;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < 3; ++c)
          dst[(static_cast<std::size_t>(c) * h + y) * w + x] = img->at(y, x, c);
  }
  return batch;
}

Network::Network(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
}

Tensor Network::encode(const Parameters& p, const Tensor& images, bool /*train_mode*/,
                       EncoderCache* cache) const {
  if (images.rank() != 4 || images.dim(1) != 3 ||
      images.dim(2) != static_cast<std::size_t>(config_.input_h) ||
      images.dim(3) != static_cast<std::size_t>(config_.input_w))
    throw data_error("shape-mismatch", "encoder input does not match configured size");

  Tensor cur = images;
  for (std::size_t i = 0; i < config_.blocks.size(); ++i) {
    const auto& blk = config_.blocks[i];
    const std::string base = "encoder.conv" + std::to_string(i);
    Tensor out = conv_forward(cur, p.find(base + ".weight"), p.find(base + ".bias"),
                              blk.stride);
    if (cache) {
      cache->inputs.push_back(std::move(cur));
      cache->preacts.push_back(out);
    }
    relu_inplace(out);
    cur = std::move(out);
  }

  const std::size_t b = cur.dim(0);
  const std::size_t ch = cur.dim(1);
  const std::size_t hw = cur.dim(2) * cur.dim(3);
  Tensor reps({b, ch});
  for (std::size_t s = 0; s < b; ++s)
    for (std::size_t c = 0; c < ch; ++c) {
      const double* plane = cur.data() + (s * ch + c) * hw;
      double sum = 0.0;
      for (std::size_t i = 0; i < hw; ++i) sum += plane[i];
      reps.at(s, c) = sum / static_cast<double>(hw);
    }
  if (cache) cache->last_act = std::move(cur);
  return reps;
}

Tensor Network::encode_backward(const Parameters& p, const EncoderCache& cache,
                                const Tensor& d_reps, Gradients& grads) const {
  const std::size_t b = cache.last_act.dim(0);
  const std::size_t ch = cache.last_act.dim(1);
  const std::size_t hw = cache.last_act.dim(2) * cache.last_act.dim(3);

  Tensor d_cur(cache.last_act.shape());
  const double inv = 1.0 / static_cast<double>(hw);
  for (std::size_t s = 0; s < b; ++s)
    for (std::size_t c = 0; c < ch; ++c) {
      const double g = d_reps.at(s, c) * inv;
      double* plane = d_cur.data() + (s * ch + c) * hw;
      for (std::size_t i = 0; i < hw; ++i) plane[i] = g;
    }

  for (int i = static_cast<int>(config_.blocks.size()) - 1; i >= 0; --i) {
    const Tensor& pre = cache.preacts[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < d_cur.size(); ++k)
      if (pre[k] <= 0.0) d_cur[k] = 0.0;

    const std::string base = "encoder.conv" + std::to_string(i);
    const std::size_t wi = param_index(p, base + ".weight");
    const std::size_t bi = param_index(p, base + ".bias");
    d_cur = conv_backward(cache.inputs[static_cast<std::size_t>(i)],
                          p.entries[wi].value, d_cur, config_.blocks[static_cast<std::size_t>(i)].stride,
                          grads.tensors[wi], grads.tensors[bi]);
  }
  return d_cur;
}

Tensor Network::project(const Parameters& p, const Tensor& reps,
                        ProjectionCache* cache) const {
  const Tensor& weight = p.find("projection.weight");
  const Tensor& bias = p.find("projection.bias");
  const std::size_t b = reps.dim(0);
  const std::size_t d = reps.dim(1);
  const std::size_t e = weight.dim(0);

  Tensor pre({b, e});
  {
    MapC rm(reps.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(d));
    MapC wm(weight.data(), static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(d));
    MapM pm(pre.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e));
    pm.noalias() = rm * wm.transpose();
    for (std::size_t s = 0; s < b; ++s)
      for (std::size_t j = 0; j < e; ++j) pre.at(s, j) += bias[j];
  }

  Tensor z({b, e});
  for (std::size_t s = 0; s < b; ++s) {
    double sq = 0.0;
    for (std::size_t j = 0; j < e; ++j) sq += pre.at(s, j) * pre.at(s, j);
    const double inv = 1.0 / (std::sqrt(sq) + kNormEpsilon);
    for (std::size_t j = 0; j < e; ++j) z.at(s, j) = pre.at(s, j) * inv;
  }
  if (cache) {
    cache->reps = reps;
    cache->prenorm = std::move(pre);
  }
  return z;
}

Tensor Network::project_backward(const Parameters& p, const ProjectionCache& cache,
                                 const Tensor& d_embed, Gradients& grads) const {
  const Tensor& weight = p.find("projection.weight");
  const std::size_t b = cache.prenorm.dim(0);
  const std::size_t e = cache.prenorm.dim(1);
  const std::size_t d = cache.reps.dim(1);

  // Through z = v / (|v| + eps): dv = g/(|v|+eps) - v (g.v) / (|v| (|v|+eps)^2).
  Tensor d_pre({b, e});
  for (std::size_t s = 0; s < b; ++s) {
    double sq = 0.0, gv = 0.0;
    for (std::size_t j = 0; j < e; ++j) {
      sq += cache.prenorm.at(s, j) * cache.prenorm.at(s, j);
      gv += d_embed.at(s, j) * cache.prenorm.at(s, j);
    }
    const double norm = std::sqrt(sq);
    const double denom = norm + kNormEpsilon;
    const double scale = norm > 0.0 ? gv / (norm * denom * denom) : 0.0;
    for (std::size_t j = 0; j < e; ++j)
      d_pre.at(s, j) = d_embed.at(s, j) / denom - cache.prenorm.at(s, j) * scale;
  }

  const std::size_t wi = param_index(p, "projection.weight");
  const std::size_t bi = param_index(p, "projection.bias");
  Tensor d_reps({b, d});
  {
    MapC dpm(d_pre.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e));
    MapC rm(cache.reps.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(d));
    MapC wm(weight.data(), static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(d));
    MapM dwm(grads.tensors[wi].data(), static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(d));
    MapM drm(d_reps.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(d));
    dwm.noalias() += dpm.transpose() * rm;
    drm.noalias() = dpm * wm;
    for (std::size_t j = 0; j < e; ++j) {
      double sum = 0.0;
      for (std::size_t s = 0; s < b; ++s) sum += d_pre.at(s, j);
      grads.tensors[bi][j] += sum;
    }
  }
  return d_reps;
}

Tensor Network::classify(const Parameters& p, const Tensor& reps, bool train_mode,
                         std::uint64_t dropout_seed, ClassifierCache* cache) const {
  const Tensor& w0 = p.find("classifier.fc0.weight");
  const Tensor& b0 = p.find("classifier.fc0.bias");
  const Tensor& w1 = p.find("classifier.fc1.weight");
  const Tensor& b1 = p.find("classifier.fc1.bias");
  const std::size_t b = reps.dim(0);
  const std::size_t d = reps.dim(1);
  const std::size_t hid = w0.dim(0);
  const std::size_t n = w1.dim(0);

  Tensor hidden_pre({b, hid});
  {
    MapC rm(reps.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(d));
    MapC wm(w0.data(), static_cast<Eigen::Index>(hid), static_cast<Eigen::Index>(d));
    MapM hm(hidden_pre.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(hid));
    hm.noalias() = rm * wm.transpose();
  }
  for (std::size_t s = 0; s < b; ++s)
    for (std::size_t j = 0; j < hid; ++j) hidden_pre.at(s, j) += b0[j];

  Tensor dropped = hidden_pre;
  relu_inplace(dropped);

  Tensor mask;
  const bool use_dropout = train_mode && config_.dropout > 0.0;
  if (use_dropout) {
    mask = Tensor({b, hid});
    Rng rng(derive_seed(dropout_seed, {0xd409}));
    const double keep = 1.0 - config_.dropout;
    const double scale = 1.0 / keep;
    for (std::size_t i = 0; i < mask.size(); ++i)
      mask[i] = rng.bernoulli(keep) ? scale : 0.0;
    for (std::size_t i = 0; i < dropped.size(); ++i) dropped[i] *= mask[i];
  }

  Tensor logits({b, n});
  {
    MapC dm(dropped.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(hid));
    MapC wm(w1.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(hid));
    MapM lm(logits.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(n));
    lm.noalias() = dm * wm.transpose();
  }
  for (std::size_t s = 0; s < b; ++s)
    for (std::size_t j = 0; j < n; ++j) logits.at(s, j) += b1[j];

  Tensor probs({b, n});
  for (std::size_t s = 0; s < b; ++s) {
    double mx = logits.at(s, 0);
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, logits.at(s, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ev = std::exp(logits.at(s, j) - mx);
      probs.at(s, j) = ev;
      sum += ev;
    }
    for (std::size_t j = 0; j < n; ++j) probs.at(s, j) /= sum;
  }

  if (cache) {
    cache->reps = reps;
    cache->hidden_pre = std::move(hidden_pre);
    cache->dropped = std::move(dropped);
    cache->mask = std::move(mask);
    cache->probs = probs;
  }
  return probs;
}

Tensor Network::classify_backward(const Parameters& p, const ClassifierCache& cache,
                                  const Tensor& d_logits, Gradients& grads) const {
  const Tensor& w0 = p.find("classifier.fc0.weight");
  const Tensor& w1 = p.find("classifier.fc1.weight");
  const std::size_t b = d_logits.dim(0);
  const std::size_t n = d_logits.dim(1);
  const std::size_t hid = w1.dim(1);
  const std::size_t d = w0.dim(1);

  const std::size_t w0i = param_index(p, "classifier.fc0.weight");
  const std::size_t b0i = param_index(p, "classifier.fc0.bias");
  const std::size_t w1i = param_index(p, "classifier.fc1.weight");
  const std::size_t b1i = param_index(p, "classifier.fc1.bias");

  Tensor d_hidden({b, hid});
  {
    MapC dlm(d_logits.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(n));
    MapC dm(cache.dropped.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(hid));
    MapC w1m(w1.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(hid));
    MapM dw1m(grads.tensors[w1i].data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(hid));
    MapM dhm(d_hidden.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(hid));
    dw1m.noalias() += dlm.transpose() * dm;
    dhm.noalias() = dlm * w1m;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t s = 0; s < b; ++s) sum += d_logits.at(s, j);
    grads.tensors[b1i][j] += sum;
  }

  if (!cache.mask.empty())
    for (std::size_t i = 0; i < d_hidden.size(); ++i) d_hidden[i] *= cache.mask[i];
  for (std::size_t i = 0; i < d_hidden.size(); ++i)
    if (cache.hidden_pre[i] <= 0.0) d_hidden[i] = 0.0;

  Tensor d_reps({b, d});
  {
    MapC dhm(d_hidden.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(hid));
    MapC rm(cache.reps.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(d));
    MapC w0m(w0.data(), static_cast<Eigen::Index>(hid), static_cast<Eigen::Index>(d));
    MapM dw0m(grads.tensors[w0i].data(), static_cast<Eigen::Index>(hid), static_cast<Eigen::Index>(d));
    MapM drm(d_reps.data(), static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(d));
    dw0m.noalias() += dhm.transpose() * rm;
    drm.noalias() = dhm * w0m;
  }
  for (std::size_t j = 0; j < hid; ++j) {
    double sum = 0.0;
    for (std::size_t s = 0; s < b; ++s) sum += d_hidden.at(s, j);
    grads.tensors[b0i][j] += sum;
  }
  return d_reps;
}

}  // namespace gamerep
