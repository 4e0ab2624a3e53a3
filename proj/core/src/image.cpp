#include "gamerep/image.hpp"

#include <algorithm>
#include <cmath>

#include "gamerep/error.hpp"

namespace gamerep {

void validate_image(const Image& img) {
  if (img.height <= 0 || img.width <= 0)
    throw data_error("image-shape", "image has non-positive dimensions");
  if (img.pixels.size() != static_cast<std::size_t>(img.height) * img.width * 3)
    throw data_error("image-shape", "pixel buffer does not match h*w*3");
  for (float v : img.pixels) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
      throw data_error("image-range", "pixel value outside [0,1]");
  }
}

Image resize_bilinear(const Image& in, int out_h, int out_w) {
  if (in.height <= 0 || in.width <= 0)
    throw data_error("image-shape", "cannot resize an empty image");
  if (out_h < 1 || out_w < 1)
    throw config_error("resize-target", "target size must be at least 1x1");
  if (out_h == in.height && out_w == in.width) return in;

  Image out(out_h, out_w);
  // Corner-aligned source coordinates; a lone output row/column maps to the
  // source midline.
  const double sy = out_h > 1 ? static_cast<double>(in.height - 1) / (out_h - 1) : 0.0;
  const double sx = out_w > 1 ? static_cast<double>(in.width - 1) / (out_w - 1) : 0.0;
  const double oy = out_h > 1 ? 0.0 : (in.height - 1) * 0.5;
  const double ox = out_w > 1 ? 0.0 : (in.width - 1) * 0.5;

  for (int y = 0; y < out_h; ++y) {
    const double fy = oy + sy * y;
    const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, in.height - 1);
    const int y1 = std::min(y0 + 1, in.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = ox + sx * x;
      const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, in.width - 1);
      const int x1 = std::min(x0 + 1, in.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top = (1.0 - wx) * in.at(y0, x0, c) + wx * in.at(y0, x1, c);
        const double bot = (1.0 - wx) * in.at(y1, x0, c) + wx * in.at(y1, x1, c);
        const double v = (1.0 - wy) * top + wy * bot;
        out.at(y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return out;
}

}  // namespace gamerep
