#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gamerep/image.hpp"
#include "gamerep/manifest.hpp"
#include "gamerep/split.hpp"

namespace gamerep {

/// In-memory corpus: every image materialized (as float pixels) with its
/// labels, plus the train/val index views once a split is applied.
struct LoadedDataset {
  Manifest manifest;
  std::vector<ImageSample> samples;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;

  int class_count() const { return manifest.genre_count(); }
};

/// Loads PNG-backed games from disk (paths resolved against
/// manifest.base_dir) and renders generator-backed games. Images that do not
/// match the manifest size are resized on load.
LoadedDataset load_dataset(const Manifest& manifest);

/// Fills train/val index views. Throws if the split does not match the
/// manifest.
void apply_split(LoadedDataset& ds, const SplitSpec& split);

}  // namespace gamerep
