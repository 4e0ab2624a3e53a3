#include "gamerep/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gamerep/error.hpp"

namespace gamerep {

namespace {

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw config_error("augment-prob", std::string(name) + " probability must be in [0,1]");
}

void check_range(const Range& r, const char* name) {
  if (!(r.lo <= r.hi))
    throw config_error("augment-range", std::string(name) + " range is empty");
}

float sample_clamped(const Image& in, double fy, double fx, int c) {
  // Edge replication: out-of-frame coordinates clamp to the border pixel.
  fy = std::clamp(fy, 0.0, static_cast<double>(in.height - 1));
  fx = std::clamp(fx, 0.0, static_cast<double>(in.width - 1));
  const int y0 = static_cast<int>(std::floor(fy));
  const int x0 = static_cast<int>(std::floor(fx));
  const int y1 = std::min(y0 + 1, in.height - 1);
  const int x1 = std::min(x0 + 1, in.width - 1);
  const double wy = fy - y0;
  const double wx = fx - x0;
  const double top = (1.0 - wx) * in.at(y0, x0, c) + wx * in.at(y0, x1, c);
  const double bot = (1.0 - wx) * in.at(y1, x0, c) + wx * in.at(y1, x1, c);
  return static_cast<float>(std::clamp((1.0 - wy) * top + wy * bot, 0.0, 1.0));
}

// Shared inverse-map resampler. map(y, x) -> source (fy, fx).
template <typename MapFn>
Image warp(const Image& in, MapFn map) {
  Image out(in.height, in.width);
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x) {
      const auto [fy, fx] = map(y, x);
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = sample_clamped(in, fy, fx, c);
    }
  return out;
}

}  // namespace

void AugmentationConfig::validate() const {
  check_prob(flip_prob, "flip");
  check_prob(zoom_prob, "zoom");
  check_prob(brightness_prob, "brightness");
  check_prob(rescale_prob, "rescale");
  check_prob(rotation_prob, "rotation");
  check_range(zoom, "zoom");
  check_range(brightness, "brightness");
  check_range(rescale, "rescale");
  check_range(rotation_deg, "rotation");
}

Image flip_horizontal(const Image& in) {
  Image out(in.height, in.width);
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = in.at(y, in.width - 1 - x, c);
  return out;
}

Image zoom_about_center(const Image& in, double factor) {
  if (factor == 1.0) return in;
  const double cy = (in.height - 1) * 0.5;
  const double cx = (in.width - 1) * 0.5;
  return warp(in, [&](int y, int x) {
    return std::pair{cy + (y - cy) / factor, cx + (x - cx) / factor};
  });
}

Image rescale_axes(const Image& in, double factor_y, double factor_x) {
  if (factor_y == 1.0 && factor_x == 1.0) return in;
  const double cy = (in.height - 1) * 0.5;
  const double cx = (in.width - 1) * 0.5;
  return warp(in, [&](int y, int x) {
    return std::pair{cy + (y - cy) / factor_y, cx + (x - cx) / factor_x};
  });
}

Image rotate_about_center(const Image& in, double degrees) {
  if (degrees == 0.0) return in;
  const double rad = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);
  const double cy = (in.height - 1) * 0.5;
  const double cx = (in.width - 1) * 0.5;
  return warp(in, [&](int y, int x) {
    const double dy = y - cy, dx = x - cx;
    // Inverse rotation of the output grid into the source image.
    return std::pair{cy + dy * cs - dx * sn, cx + dy * sn + dx * cs};
  });
}

Image adjust_brightness(const Image& in, double factor) {
  Image out(in.height, in.width);
  for (std::size_t i = 0; i < in.pixels.size(); ++i)
    out.pixels[i] = static_cast<float>(std::clamp(in.pixels[i] * factor, 0.0, 1.0));
  return out;
}

Image augment_image(const Image& in, const AugmentationConfig& cfg, Rng& rng) {
  cfg.validate();
  Image img = in;
  if (rng.bernoulli(cfg.flip_prob)) img = flip_horizontal(img);
  if (rng.bernoulli(cfg.zoom_prob))
    img = zoom_about_center(img, rng.uniform(cfg.zoom.lo, cfg.zoom.hi));
  if (rng.bernoulli(cfg.brightness_prob))
    img = adjust_brightness(img, rng.uniform(cfg.brightness.lo, cfg.brightness.hi));
  if (rng.bernoulli(cfg.rescale_prob)) {
    const double fy = rng.uniform(cfg.rescale.lo, cfg.rescale.hi);
    const double fx = rng.uniform(cfg.rescale.lo, cfg.rescale.hi);
    img = rescale_axes(img, fy, fx);
  }
  if (rng.bernoulli(cfg.rotation_prob))
    img = rotate_about_center(img, rng.uniform(cfg.rotation_deg.lo, cfg.rotation_deg.hi));
  return img;
}

ImageSample augment(const ImageSample& in, const AugmentationConfig& cfg, Rng& rng) {
  ImageSample out = in;
  out.image = augment_image(in.image, cfg, rng);
  return out;
}

}  // namespace gamerep
