#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gamerep/manifest.hpp"

namespace gamerep {

/// Game-disjoint train/validation partition. Games (not images) are the unit
/// of assignment, so validation measures behavior on unseen games.
struct SplitSpec {
  std::vector<std::string> train_games;
  std::vector<std::string> val_games;
  double ratio = 0.75;
  std::uint64_t seed = 0;
};

/// Per genre, places round(ratio * games) games on the train side (clamped so
/// both sides stay non-empty), drawing proportionally from each style bucket;
/// remainders and within-bucket choices use seeded shuffles. Deterministic
/// given (manifest, ratio, seed).
SplitSpec stratified_game_split(const Manifest& m, double ratio, std::uint64_t seed);

/// Throws if the split is not a disjoint, total partition of the manifest's
/// games with both sides non-empty in every genre.
void validate_split(const Manifest& m, const SplitSpec& s);

SplitSpec load_split(const std::string& path);
void save_split(const SplitSpec& s, const std::string& path);
std::string split_to_json(const SplitSpec& s);
SplitSpec split_from_json(const std::string& text);

}  // namespace gamerep
