#include "gamerep/plot.hpp"

#include <algorithm>
#include <cmath>

#include "gamerep/error.hpp"
#include "gamerep/image.hpp"
#include "gamerep/png_io.hpp"

namespace gamerep {

namespace {

struct Color {
  float r, g, b;
};

// Twelve well-separated hues; genres beyond that wrap.
const Color kPalette[12] = {
    {0.84f, 0.16f, 0.16f}, {0.13f, 0.47f, 0.81f}, {0.17f, 0.63f, 0.17f},
    {0.87f, 0.52f, 0.11f}, {0.55f, 0.27f, 0.68f}, {0.55f, 0.34f, 0.29f},
    {0.89f, 0.37f, 0.66f}, {0.35f, 0.35f, 0.35f}, {0.74f, 0.74f, 0.13f},
    {0.09f, 0.75f, 0.81f}, {0.60f, 0.80f, 0.20f}, {0.20f, 0.20f, 0.60f},
};

void put(Image& img, int y, int x, const Color& c) {
  if (y < 0 || y >= img.height || x < 0 || x >= img.width) return;
  img.at(y, x, 0) = c.r;
  img.at(y, x, 1) = c.g;
  img.at(y, x, 2) = c.b;
}

void draw_marker(Image& img, int cy, int cx, int shape, const Color& c) {
  const int r = 4;
  switch (shape % 6) {
    case 0:  // disc
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          if (dy * dy + dx * dx <= r * r) put(img, cy + dy, cx + dx, c);
      break;
    case 1:  // square
      for (int dy = -r + 1; dy <= r - 1; ++dy)
        for (int dx = -r + 1; dx <= r - 1; ++dx) put(img, cy + dy, cx + dx, c);
      break;
    case 2:  // triangle
      for (int dy = -r; dy <= r; ++dy) {
        const int half = (dy + r) / 2;
        for (int dx = -half; dx <= half; ++dx) put(img, cy + dy, cx + dx, c);
      }
      break;
    case 3:  // diamond
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          if (std::abs(dy) + std::abs(dx) <= r) put(img, cy + dy, cx + dx, c);
      break;
    case 4:  // plus
      for (int d = -r; d <= r; ++d) {
        put(img, cy + d, cx, c);
        put(img, cy + d, cx + 1, c);
        put(img, cy, cx + d, c);
        put(img, cy + 1, cx + d, c);
      }
      break;
    default:  // cross
      for (int d = -r; d <= r; ++d) {
        put(img, cy + d, cx + d, c);
        put(img, cy + d, cx - d, c);
        put(img, cy + d + 1, cx + d, c);
        put(img, cy + d + 1, cx - d, c);
      }
      break;
  }
}

}  // namespace

void scatter_png(const std::string& path, const Tensor& coords,
                 const std::vector<int>& genre_ids, const std::vector<int>& game_ordinal,
                 int canvas) {
  const std::size_t n = coords.dim(0);
  if (coords.dim(1) != 2 || genre_ids.size() != n || game_ordinal.size() != n)
    throw data_error("label-count", "scatter inputs must align with n x 2 coordinates");
  if (canvas < 64) throw config_error("plot-size", "canvas too small");

  double lo0 = coords.at(0, 0), hi0 = lo0, lo1 = coords.at(0, 1), hi1 = lo1;
  for (std::size_t i = 1; i < n; ++i) {
    lo0 = std::min(lo0, coords.at(i, 0));
    hi0 = std::max(hi0, coords.at(i, 0));
    lo1 = std::min(lo1, coords.at(i, 1));
    hi1 = std::max(hi1, coords.at(i, 1));
  }
  const double span0 = std::max(hi0 - lo0, 1e-9);
  const double span1 = std::max(hi1 - lo1, 1e-9);

  Image img(canvas, canvas);
  std::fill(img.pixels.begin(), img.pixels.end(), 1.0f);  // white
  const int margin = 24;
  const int space = canvas - 2 * margin;

  for (std::size_t i = 0; i < n; ++i) {
    const int x = margin + static_cast<int>((coords.at(i, 0) - lo0) / span0 * space);
    const int y = margin + static_cast<int>((hi1 - coords.at(i, 1)) / span1 * space);
    const Color c = kPalette[static_cast<std::size_t>(genre_ids[i] % 12)];
    draw_marker(img, y, x, game_ordinal[i], c);
  }
  write_png(path, img);
}

}  // namespace gamerep
