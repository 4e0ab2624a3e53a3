#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gamerep/synthetic_config.hpp"

namespace gamerep {

struct GenreLabel {
  int id = 0;
  std::string name;
};

struct StyleCategory {
  int id = 0;
  std::string name;
};

struct GameEntry {
  std::string id;
  int genre_id = 0;
  int style_id = 0;
  std::vector<std::string> images;   // paths relative to the manifest file
  std::optional<int> generator_ref;  // game index into the synthetic block
};

/// Corpus inventory. Games are the style-bearing unit: each game belongs to
/// exactly one genre and one style category. Image content comes either from
/// PNG files on disk or from the deterministic generator referenced by the
/// optional `synthetic` block.
struct Manifest {
  int image_h = 0;
  int image_w = 0;
  std::vector<GenreLabel> genres;
  std::vector<StyleCategory> styles;
  std::vector<GameEntry> games;
  std::optional<SyntheticConfig> synthetic;

  std::string base_dir;  // directory of the manifest file; not serialized

  int genre_count() const { return static_cast<int>(genres.size()); }
  std::vector<int> games_in_genre(int genre_id) const;  // indices into games
  const GameEntry* find_game(const std::string& game_id) const;
  const std::string& genre_name(int genre_id) const;
  const std::string& style_name(int style_id) const;
};

/// Structural validation: dense unique genre ids, >= 2 genres, unique game
/// ids, >= 2 games per genre, known genre/style references, non-empty entry
/// list. Throws Error with a distinct code per violation.
void validate_manifest(const Manifest& m);

Manifest load_manifest(const std::string& path);
void save_manifest(const Manifest& m, const std::string& path);

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);

}  // namespace gamerep
