#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gamerep/image.hpp"
#include "gamerep/model.hpp"
#include "gamerep/tensor.hpp"

namespace gamerep {

/// Converts float HWC images to a [B, 3, H, W] double batch, resizing to
/// (h, w) when a sample's size differs.
Tensor batch_from_images(std::span<const Image> images, int h, int w);

struct EncoderCache {
  std::vector<Tensor> inputs;   // per block: input feature map [B,IC,H,W]
  std::vector<Tensor> preacts;  // per block: pre-ReLU output [B,OC,OH,OW]
  Tensor last_act;              // post-ReLU input to global average pooling
};

struct ProjectionCache {
  Tensor reps;      // [B, d] input
  Tensor prenorm;   // [B, e] affine output before normalization
};

struct ClassifierCache {
  Tensor reps;        // [B, d] input
  Tensor hidden_pre;  // [B, hidden] before ReLU
  Tensor dropped;     // [B, hidden] after ReLU (+ dropout when training)
  Tensor mask;        // dropout keep/scale mask; empty in eval mode
  Tensor probs;       // [B, n]
};

/// Forward/backward evaluation of the composite network. Parameters are
/// never mutated here; all methods are const and safe for concurrent readers.
class Network {
 public:
  explicit Network(ModelConfig config);

  const ModelConfig& config() const { return config_; }

  /// Encoder r: images -> representations [B, d]. Deterministic in both
  /// modes (the encoder has no stochastic layers); train_mode is accepted
  /// for interface symmetry. Throws on input shape mismatch.
  Tensor encode(const Parameters& p, const Tensor& images, bool train_mode,
                EncoderCache* cache = nullptr) const;

  /// Projection p: representations -> unit-norm embeddings [B, e].
  /// Row-normalized as v / (|v| + 1e-12); an exactly zero row maps to zero.
  Tensor project(const Parameters& p, const Tensor& reps,
                 ProjectionCache* cache = nullptr) const;

  /// Classifier c: representations -> class probabilities [B, n]. Dropout
  /// fires between the two layers only in train mode, with a mask drawn from
  /// dropout_seed; softmax uses max-subtraction.
  Tensor classify(const Parameters& p, const Tensor& reps, bool train_mode,
                  std::uint64_t dropout_seed = 0,
                  ClassifierCache* cache = nullptr) const;

  // Backward passes. Parameter gradients are accumulated into `grads`
  // (aligned with Parameters::entries); each returns the gradient with
  // respect to its input.
  Tensor encode_backward(const Parameters& p, const EncoderCache& cache,
                         const Tensor& d_reps, Gradients& grads) const;
  Tensor project_backward(const Parameters& p, const ProjectionCache& cache,
                          const Tensor& d_embed, Gradients& grads) const;
  Tensor classify_backward(const Parameters& p, const ClassifierCache& cache,
                           const Tensor& d_logits, Gradients& grads) const;

  static constexpr double kNormEpsilon = 1e-12;

 private:
  ModelConfig config_;
  std::vector<std::size_t> entry_index_;  // param entry index per tensor
};

}  // namespace gamerep
