#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gamerep/image.hpp"
#include "gamerep/manifest.hpp"
#include "gamerep/synthetic_config.hpp"

namespace gamerep {

/// Number of distinct content motifs available; genre_count may not exceed it.
int synthetic_motif_count();

/// Foreground mask of a genre's motif: 1 where a foreground primitive covers
/// the pixel. The mask is a pure function of (genre_id, h, w) — content is
/// identical across games of a genre, only styling differs.
std::vector<std::uint8_t> motif_mask(int genre_id, int h, int w);

/// Deterministic synthetic corpus. Images are rendered lazily; render(g, i)
/// depends only on (config, g, i), so any subset can be produced in any order
/// and two generators with equal configs emit bit-identical pixels.
class SyntheticDataset {
 public:
  explicit SyntheticDataset(SyntheticConfig config);

  const SyntheticConfig& config() const { return config_; }
  const Manifest& manifest() const { return manifest_; }

  int game_count() const;
  ImageSample render(int game_index, int image_index) const;

  /// All samples in (game, image) order.
  std::vector<ImageSample> render_all() const;

 private:
  SyntheticConfig config_;
  Manifest manifest_;
};

/// Builds the generator and its manifest (games reference the generator; no
/// files involved). Throws config errors for invalid counts.
SyntheticDataset generate_synthetic(const SyntheticConfig& config);

}  // namespace gamerep
