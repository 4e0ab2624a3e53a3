#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gamerep/tensor.hpp"

namespace gamerep {

struct ConvBlockSpec {
  int filters = 16;
  int kernel = 3;
  int stride = 2;
  std::string activation = "relu";
};

/// Architecture of the composite network: convolutional encoder ending in
/// global average pooling (representation size = last block's filter count),
/// a projection head onto the unit sphere, and a two-layer classifier with
/// dropout between the layers.
struct ModelConfig {
  int input_h = 32;
  int input_w = 32;
  std::vector<ConvBlockSpec> blocks = {{16, 3, 2, "relu"},
                                       {32, 3, 2, "relu"},
                                       {64, 3, 2, "relu"}};
  int embed_dim = 128;
  int classifier_hidden = 64;
  int class_count = 2;
  double dropout = 0.2;

  int rep_dim() const { return blocks.empty() ? 0 : blocks.back().filters; }
  void validate() const;
};

std::string model_config_to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const std::string& text);

enum class ParamGroup { encoder, projection, classifier };

const char* param_group_name(ParamGroup g);

struct ParamEntry {
  std::string name;
  ParamGroup group;
  Tensor value;
};

/// Named weight tensors plus a trainability flag per group. Entry order is
/// fixed (encoder blocks, projection, classifier) and is the contract for
/// Gradients and optimizer state alignment.
struct Parameters {
  std::vector<ParamEntry> entries;
  bool encoder_trainable = true;
  bool projection_trainable = true;
  bool classifier_trainable = true;

  bool trainable(ParamGroup g) const;
  void set_trainable(ParamGroup g, bool on);

  Tensor& find(const std::string& name);
  const Tensor& find(const std::string& name) const;

  bool all_finite() const;
};

/// Gradient tensors aligned index-wise with Parameters::entries.
struct Gradients {
  std::vector<Tensor> tensors;

  static Gradients zeros_like(const Parameters& p);
  void accumulate(const Gradients& other);
};

/// He-style initialization: weights uniform on [-sqrt(6/fan_in),
/// +sqrt(6/fan_in)] (variance 2/fan_in), biases exactly zero. Deterministic
/// given seed.
Parameters init_params(const ModelConfig& config, std::uint64_t seed);

/// FNV-1a over the raw parameter bytes of one group; used to assert the
/// frozen-encoder contract bitwise.
std::uint64_t checksum_group(const Parameters& p, ParamGroup g);

}  // namespace gamerep
