#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gamerep {

/// Configuration of the synthetic corpus generator. Genres carry the content
/// factor (a fixed geometric motif per genre); games carry the style factor
/// (palette, background texture, noise level), drawn deterministically from
/// the seed.
struct SyntheticConfig {
  int genre_count = 10;
  int games_per_genre = 6;
  int images_per_game = 100;
  int image_h = 32;
  int image_w = 32;

  // Style parameter space.
  int palette_count = 12;  // foreground hues available within each genre
  std::vector<std::string> background_textures = {"flat", "gradient", "checker"};
  double noise_min = 0.01;
  double noise_max = 0.05;

  std::uint64_t seed = 0;

  void validate() const;
};

std::string synthetic_config_to_json(const SyntheticConfig& c);
SyntheticConfig synthetic_config_from_json(const std::string& text);

}  // namespace gamerep
