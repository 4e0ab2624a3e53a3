#include "gamerep/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gamerep/error.hpp"
#include "gamerep/rng.hpp"

namespace gamerep {

namespace {

// Stream tags for seed derivation; fixed constants so generated corpora are
// stable across versions.
constexpr std::uint64_t kTagGenre = 0x47454e52;
constexpr std::uint64_t kTagStyle = 0x5354594c;
constexpr std::uint64_t kTagImage = 0x494d4147;

struct Rgb {
  double r, g, b;
};

Rgb hsv_to_rgb(double h, double s, double v) {
  h = h - std::floor(h);
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1)      { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else             { r = c; b = x; }
  const double m = v - c;
  return {r + m, g + m, b + m};
}

constexpr int kMotifCount = 12;

const char* kMotifNames[kMotifCount] = {
    "discgrid", "pitch",  "track",  "ring",   "cross",  "bars",
    "checker",  "wedge",  "frames", "spokes", "ladder", "diamond",
};

// Motif predicates in normalized coordinates u, v in [0, 1).
bool motif_hit(int motif, double u, double v) {
  const double du = u - 0.5;
  const double dv = v - 0.5;
  switch (motif) {
    case 0: {  // 3x3 grid of discs
      for (int gy = 0; gy < 3; ++gy)
        for (int gx = 0; gx < 3; ++gx) {
          const double cx = (gx + 0.5) / 3.0;
          const double cy = (gy + 0.5) / 3.0;
          const double dx = u - cx, dy = v - cy;
          if (dx * dx + dy * dy < 0.08 * 0.08) return true;
        }
      return false;
    }
    case 1: {  // horizontal field lines plus two goal boxes
      if (std::abs(v - 0.25) < 0.025 || std::abs(v - 0.5) < 0.025 ||
          std::abs(v - 0.75) < 0.025)
        return true;
      const bool box_y = v > 0.34 && v < 0.66;
      if (box_y && u > 0.03 && u < 0.16) return true;
      if (box_y && u > 0.84 && u < 0.97) return true;
      return false;
    }
    case 2: {  // oval track
      const double a = du / 0.44, b = dv / 0.32;
      const double a2 = du / 0.28, b2 = dv / 0.18;
      return (a * a + b * b < 1.0) && (a2 * a2 + b2 * b2 > 1.0);
    }
    case 3: {  // centered ring
      const double r = std::sqrt(du * du + dv * dv);
      return r > 0.22 && r < 0.36;
    }
    case 4:  // diagonal cross
      return std::abs(u - v) < 0.055 || std::abs(u + v - 1.0) < 0.055;
    case 5:  // three vertical bars
      return (u > 0.12 && u < 0.24) || (u > 0.44 && u < 0.56) ||
             (u > 0.76 && u < 0.88);
    case 6: {  // coarse checkerboard
      const int cu = static_cast<int>(u * 4.0);
      const int cv = static_cast<int>(v * 4.0);
      return (cu + cv) % 2 == 0;
    }
    case 7:  // centered wedge
      return v > 0.25 && v < 0.85 && std::abs(du) < (v - 0.25) * 0.55;
    case 8: {  // two concentric square frames
      const double m = std::max(std::abs(du), std::abs(dv));
      return (m > 0.15 && m < 0.22) || (m > 0.33 && m < 0.40);
    }
    case 9: {  // six radial spokes
      const double r = std::sqrt(du * du + dv * dv);
      if (r < 0.07 || r > 0.43) return false;
      double ang = std::atan2(dv, du);
      const double sector = std::numbers::pi / 3.0;
      double frac = std::fmod(ang + 2.0 * std::numbers::pi, sector) / sector;
      return std::min(frac, 1.0 - frac) < 0.14;
    }
    case 10: {  // ladder: two rails and five rungs
      if ((std::abs(u - 0.32) < 0.025 || std::abs(u - 0.68) < 0.025) &&
          v > 0.1 && v < 0.9)
        return true;
      if (u > 0.32 && u < 0.68) {
        for (int k = 0; k < 5; ++k)
          if (std::abs(v - (0.15 + 0.175 * k)) < 0.028) return true;
      }
      return false;
    }
    case 11:  // filled diamond
      return std::abs(du) + std::abs(dv) < 0.32;
    default:
      return false;
  }
}

struct GameStyle {
  Rgb fg;
  int texture = 0;
  Rgb bg1, bg2;
  double noise_sigma = 0.0;
};

enum class TextureKind { flat, gradient, checker, stripes };

TextureKind texture_kind(const std::string& name) {
  if (name == "flat") return TextureKind::flat;
  if (name == "gradient") return TextureKind::gradient;
  if (name == "checker") return TextureKind::checker;
  if (name == "stripes") return TextureKind::stripes;
  throw config_error("unknown-texture", "unknown background texture '" + name + "'");
}

Rgb texture_color(TextureKind kind, const GameStyle& st, int y, int x, int h, int w,
                  int phase_y, int phase_x) {
  switch (kind) {
    case TextureKind::flat:
      return st.bg1;
    case TextureKind::gradient: {
      const double t = static_cast<double>((y + phase_y) % h) / std::max(1, h - 1);
      return {st.bg1.r + t * (st.bg2.r - st.bg1.r),
              st.bg1.g + t * (st.bg2.g - st.bg1.g),
              st.bg1.b + t * (st.bg2.b - st.bg1.b)};
    }
    case TextureKind::checker: {
      const int cell = std::max(2, h / 8);
      const int q = ((y + phase_y) / cell + (x + phase_x) / cell) % 2;
      return q == 0 ? st.bg1 : st.bg2;
    }
    case TextureKind::stripes: {
      const int band = std::max(2, h / 10);
      const int q = ((y + phase_y) / band) % 2;
      return q == 0 ? st.bg1 : st.bg2;
    }
  }
  return st.bg1;
}

GameStyle draw_game_style(const SyntheticConfig& cfg, int genre_id, int game_in_genre,
                          int game_index, int texture_id) {
  // Genre-level stream fixes the hue wheel offset and the palette slot
  // permutation, so games of one genre get well-separated hues.
  Rng genre_rng(derive_seed(cfg.seed, {kTagGenre, static_cast<std::uint64_t>(genre_id)}));
  const double hue_base = genre_rng.uniform();
  std::vector<int> slots(cfg.palette_count);
  std::iota(slots.begin(), slots.end(), 0);
  genre_rng.shuffle(slots);

  const int slot = slots[game_in_genre % cfg.palette_count];
  const int wrap = game_in_genre / cfg.palette_count;

  Rng rng(derive_seed(cfg.seed, {kTagStyle, static_cast<std::uint64_t>(game_index)}));
  GameStyle st;
  const double fg_hue =
      hue_base + (slot + 0.5) / cfg.palette_count + wrap * (0.5 / cfg.palette_count);
  st.fg = hsv_to_rgb(fg_hue, rng.uniform(0.55, 0.95), rng.uniform(0.7, 1.0));
  st.texture = texture_id;
  const double bg_hue = fg_hue + 0.5 + rng.uniform(-0.15, 0.15);
  const double bg_val = rng.uniform(0.12, 0.5);
  st.bg1 = hsv_to_rgb(bg_hue, rng.uniform(0.2, 0.7), bg_val);
  st.bg2 = hsv_to_rgb(bg_hue + rng.uniform(-0.06, 0.06), rng.uniform(0.2, 0.7),
                      std::clamp(bg_val + rng.uniform(0.1, 0.3), 0.0, 1.0));
  st.noise_sigma = rng.uniform(cfg.noise_min, cfg.noise_max);
  return st;
}

}  // namespace

void SyntheticConfig::validate() const {
  if (genre_count < 1 || games_per_genre < 1 || images_per_game < 1)
    throw config_error("synthetic-counts", "genre/game/image counts must all be >= 1");
  if (genre_count > synthetic_motif_count())
    throw config_error("synthetic-counts",
                       "at most " + std::to_string(synthetic_motif_count()) +
                           " genres are supported (one motif each)");
  if (image_h < 8 || image_w < 8)
    throw config_error("synthetic-size", "image size must be at least 8x8");
  if (palette_count < 1)
    throw config_error("synthetic-palette", "palette_count must be >= 1");
  if (background_textures.empty())
    throw config_error("synthetic-textures", "need at least one background texture");
  for (const auto& t : background_textures) texture_kind(t);  // throws on unknown
  if (noise_min < 0.0 || noise_max < noise_min)
    throw config_error("synthetic-noise", "noise range must satisfy 0 <= min <= max");
}

int synthetic_motif_count() { return kMotifCount; }

std::vector<std::uint8_t> motif_mask(int genre_id, int h, int w) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(h) * w, 0);
  for (int y = 0; y < h; ++y) {
    const double v = (y + 0.5) / h;
    for (int x = 0; x < w; ++x) {
      const double u = (x + 0.5) / w;
      mask[static_cast<std::size_t>(y) * w + x] = motif_hit(genre_id, u, v) ? 1 : 0;
    }
  }
  return mask;
}

SyntheticDataset::SyntheticDataset(SyntheticConfig config) : config_(std::move(config)) {
  config_.validate();

  manifest_.image_h = config_.image_h;
  manifest_.image_w = config_.image_w;
  for (int g = 0; g < config_.genre_count; ++g)
    manifest_.genres.push_back({g, kMotifNames[g]});
  for (int s = 0; s < static_cast<int>(config_.background_textures.size()); ++s)
    manifest_.styles.push_back({s, config_.background_textures[s]});

  const int styles = static_cast<int>(config_.background_textures.size());
  for (int g = 0; g < config_.genre_count; ++g) {
    // Balanced texture assignment within the genre, order shuffled by the
    // genre stream so style does not simply track the game index.
    std::vector<int> tex(config_.games_per_genre);
    for (int j = 0; j < config_.games_per_genre; ++j) tex[j] = j % styles;
    Rng rng(derive_seed(config_.seed, {kTagGenre, static_cast<std::uint64_t>(g), 0x7e}));
    rng.shuffle(tex);

    for (int j = 0; j < config_.games_per_genre; ++j) {
      GameEntry e;
      e.id = std::string(kMotifNames[g]) + "-g" + std::to_string(j);
      e.genre_id = g;
      e.style_id = tex[j];
      e.generator_ref = g * config_.games_per_genre + j;
      manifest_.games.push_back(std::move(e));
    }
  }
  manifest_.synthetic = config_;
}

int SyntheticDataset::game_count() const {
  return config_.genre_count * config_.games_per_genre;
}

ImageSample SyntheticDataset::render(int game_index, int image_index) const {
  if (game_index < 0 || game_index >= game_count())
    throw data_error("generator-ref", "game index out of range");
  if (image_index < 0 || image_index >= config_.images_per_game)
    throw data_error("generator-ref", "image index out of range");

  const GameEntry& entry = manifest_.games[game_index];
  const int genre = entry.genre_id;
  const int in_genre = game_index % config_.games_per_genre;
  const GameStyle st =
      draw_game_style(config_, genre, in_genre, game_index, entry.style_id);
  const TextureKind tex = texture_kind(config_.background_textures[entry.style_id]);

  const int h = config_.image_h, w = config_.image_w;
  Rng rng(derive_seed(config_.seed, {kTagImage, static_cast<std::uint64_t>(game_index),
                                     static_cast<std::uint64_t>(image_index)}));
  const int phase_y = static_cast<int>(rng.below(static_cast<std::uint64_t>(h)));
  const int phase_x = static_cast<int>(rng.below(static_cast<std::uint64_t>(w)));
  const double fg_gain = rng.uniform(0.9, 1.1);
  const double bg_gain = rng.uniform(0.9, 1.1);

  const std::vector<std::uint8_t> mask = motif_mask(genre, h, w);

  ImageSample sample;
  sample.genre_id = genre;
  sample.game_id = entry.id;
  sample.style_id = entry.style_id;
  sample.image = Image(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb c;
      if (mask[static_cast<std::size_t>(y) * w + x]) {
        c = {st.fg.r * fg_gain, st.fg.g * fg_gain, st.fg.b * fg_gain};
      } else {
        c = texture_color(tex, st, y, x, h, w, phase_y, phase_x);
        c = {c.r * bg_gain, c.g * bg_gain, c.b * bg_gain};
      }
      const double ch[3] = {c.r, c.g, c.b};
      for (int k = 0; k < 3; ++k) {
        const double noisy = ch[k] + rng.normal() * st.noise_sigma;
        sample.image.at(y, x, k) = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
      }
    }
  }
  return sample;
}

std::vector<ImageSample> SyntheticDataset::render_all() const {
  std::vector<ImageSample> out;
  out.reserve(static_cast<std::size_t>(game_count()) * config_.images_per_game);
  for (int g = 0; g < game_count(); ++g)
    for (int i = 0; i < config_.images_per_game; ++i) out.push_back(render(g, i));
  return out;
}

SyntheticDataset generate_synthetic(const SyntheticConfig& config) {
  return SyntheticDataset(config);
}

}  // namespace gamerep
