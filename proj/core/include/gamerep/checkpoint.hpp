#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gamerep/model.hpp"

namespace gamerep {

struct CheckpointMeta {
  std::optional<std::uint64_t> train_seed;
  std::string stage;  // "init" | "supervised" | "contrastive-pretrain" | "classifier-fit"
};

struct Checkpoint {
  ModelConfig config;
  Parameters params;
  CheckpointMeta meta;
};

/// Container layout: LE uint64 header length, JSON header (model config,
/// tensor names/shapes/byte offsets, trainability flags, meta), then the
/// tensor payloads as little-endian float32 in header order.
void write_checkpoint(const std::string& path, const ModelConfig& config,
                      const Parameters& params, const CheckpointMeta& meta = {});

Checkpoint read_checkpoint(const std::string& path);

}  // namespace gamerep
