#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "gamerep/error.hpp"
#include "gamerep/synthetic.hpp"

using namespace gamerep;

namespace {

SyntheticConfig fixture_config() {
  SyntheticConfig cfg;
  cfg.genre_count = 4;
  cfg.games_per_genre = 6;
  cfg.images_per_game = 50;
  cfg.image_h = 32;
  cfg.image_w = 32;
  cfg.seed = 7;
  return cfg;
}

// Mean pixel value per channel over every image of one game.
std::array<double, 3> game_channel_means(const SyntheticDataset& gen, int game) {
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  const int images = gen.config().images_per_game;
  for (int i = 0; i < images; ++i) {
    const ImageSample s = gen.render(game, i);
    for (std::size_t px = 0; px < s.image.pixels.size(); px += 3)
      for (int c = 0; c < 3; ++c) mean[static_cast<std::size_t>(c)] += s.image.pixels[px + c];
  }
  const double denom = static_cast<double>(images) * 32 * 32;
  for (auto& m : mean) m /= denom;
  return mean;
}

double mask_iou(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

TEST_CASE("counts follow the config exactly") {
  const SyntheticDataset gen = generate_synthetic(fixture_config());
  CHECK(gen.game_count() == 24);
  CHECK(gen.manifest().games.size() == 24);
  CHECK(gen.manifest().genres.size() == 4);
  const std::vector<ImageSample> all = gen.render_all();
  CHECK(all.size() == 1200);
}

TEST_CASE("generation is bit-deterministic under a fixed seed") {
  const SyntheticDataset a = generate_synthetic(fixture_config());
  const SyntheticDataset b = generate_synthetic(fixture_config());
  for (int g : {0, 7, 23})
    for (int i : {0, 13, 49}) {
      const ImageSample sa = a.render(g, i);
      const ImageSample sb = b.render(g, i);
      CHECK(sa.image == sb.image);
      CHECK(sa.game_id == sb.game_id);
    }
  SyntheticConfig other = fixture_config();
  other.seed = 8;
  const SyntheticDataset c = generate_synthetic(other);
  CHECK(a.render(0, 0).image != c.render(0, 0).image);
}

TEST_CASE("render order does not matter") {
  const SyntheticDataset gen = generate_synthetic(fixture_config());
  const ImageSample late_first = gen.render(5, 30);
  gen.render(5, 0);
  gen.render(2, 10);
  CHECK(gen.render(5, 30).image == late_first.image);
}

TEST_CASE("same-genre games share geometry but differ in style") {
  const SyntheticDataset gen = generate_synthetic(fixture_config());
  const SyntheticConfig cfg = gen.config();
  for (int genre = 0; genre < cfg.genre_count; ++genre) {
    const auto mask = motif_mask(genre, cfg.image_h, cfg.image_w);
    // Motif occupies a sane share of the canvas.
    double cover = 0.0;
    for (auto v : mask) cover += v;
    cover /= static_cast<double>(mask.size());
    CHECK(cover > 0.03);
    CHECK(cover < 0.65);

    for (int a = 0; a < cfg.games_per_genre; ++a) {
      for (int b = a + 1; b < cfg.games_per_genre; ++b) {
        const int ga = genre * cfg.games_per_genre + a;
        const int gb = genre * cfg.games_per_genre + b;
        // Content is genre-determined: the foreground masks coincide.
        CHECK(mask_iou(mask, motif_mask(gen.manifest().games[ga].genre_id, cfg.image_h,
                                        cfg.image_w)) > 0.9);
        // Style differs: the per-channel means are well separated.
        const auto ma = game_channel_means(gen, ga);
        const auto mb = game_channel_means(gen, gb);
        const double diff = std::max({std::abs(ma[0] - mb[0]), std::abs(ma[1] - mb[1]),
                                      std::abs(ma[2] - mb[2])});
        CHECK(diff > 0.02);
      }
    }
  }
}

TEST_CASE("motifs differ across genres") {
  for (int a = 0; a < synthetic_motif_count(); ++a)
    for (int b = a + 1; b < synthetic_motif_count(); ++b)
      CHECK(mask_iou(motif_mask(a, 32, 32), motif_mask(b, 32, 32)) < 0.75);
}

TEST_CASE("pixel values respect the sample invariants") {
  const SyntheticDataset gen = generate_synthetic(fixture_config());
  for (int g : {0, 11, 23}) {
    const ImageSample s = gen.render(g, 3);
    CHECK(s.image.height == 32);
    CHECK(s.image.width == 32);
    for (float v : s.image.pixels) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
    CHECK(s.genre_id == gen.manifest().games[g].genre_id);
  }
}

TEST_CASE("every game maps to exactly one style and styles are balanced") {
  const SyntheticDataset gen = generate_synthetic(fixture_config());
  std::map<int, std::map<int, int>> per_genre_style;
  for (const auto& g : gen.manifest().games) per_genre_style[g.genre_id][g.style_id] += 1;
  for (const auto& [genre, styles] : per_genre_style) {
    int total = 0;
    for (const auto& [style, count] : styles) {
      CHECK(count == 2);  // 6 games over 3 textures
      total += count;
    }
    CHECK(total == 6);
  }
}

TEST_CASE("invalid configs are rejected as config errors") {
  SyntheticConfig cfg = fixture_config();
  cfg.games_per_genre = 0;
  CHECK_THROWS_AS(generate_synthetic(cfg), Error);
  cfg = fixture_config();
  cfg.genre_count = synthetic_motif_count() + 1;
  CHECK_THROWS_AS(generate_synthetic(cfg), Error);
  cfg = fixture_config();
  cfg.noise_min = 0.5;
  cfg.noise_max = 0.1;
  CHECK_THROWS_AS(generate_synthetic(cfg), Error);
  cfg = fixture_config();
  cfg.background_textures = {"plasma"};
  CHECK_THROWS_AS(generate_synthetic(cfg), Error);
  try {
    SyntheticConfig bad = fixture_config();
    bad.images_per_game = 0;
    generate_synthetic(bad);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}
