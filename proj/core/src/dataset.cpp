#include "gamerep/dataset.hpp"

#include <filesystem>
#include <set>

#include "gamerep/error.hpp"
#include "gamerep/png_io.hpp"
#include "gamerep/synthetic.hpp"

namespace gamerep {

LoadedDataset load_dataset(const Manifest& manifest) {
  validate_manifest(manifest);
  LoadedDataset ds;
  ds.manifest = manifest;

  std::optional<SyntheticDataset> generator;
  if (manifest.synthetic.has_value()) generator.emplace(*manifest.synthetic);

  for (const auto& game : manifest.games) {
    if (game.generator_ref.has_value()) {
      for (int i = 0; i < manifest.synthetic->images_per_game; ++i)
        ds.samples.push_back(generator->render(*game.generator_ref, i));
      continue;
    }
    for (const auto& rel : game.images) {
      const std::filesystem::path p = std::filesystem::path(manifest.base_dir) / rel;
      ImageSample s;
      s.image = read_png(p.string());
      if (s.image.height != manifest.image_h || s.image.width != manifest.image_w)
        s.image = resize_bilinear(s.image, manifest.image_h, manifest.image_w);
      s.genre_id = game.genre_id;
      s.game_id = game.id;
      s.style_id = game.style_id;
      ds.samples.push_back(std::move(s));
    }
  }
  if (ds.samples.empty()) throw data_error("empty-manifest", "manifest yields no images");
  return ds;
}

void apply_split(LoadedDataset& ds, const SplitSpec& split) {
  validate_split(ds.manifest, split);
  const std::set<std::string> train(split.train_games.begin(), split.train_games.end());
  ds.train_indices.clear();
  ds.val_indices.clear();
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (train.count(ds.samples[i].game_id))
      ds.train_indices.push_back(i);
    else
      ds.val_indices.push_back(i);
  }
  if (ds.train_indices.empty() || ds.val_indices.empty())
    throw data_error("split-mismatch", "a split side has no images");
}

}  // namespace gamerep
