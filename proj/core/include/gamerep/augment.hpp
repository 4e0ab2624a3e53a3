#pragma once

#include "gamerep/image.hpp"
#include "gamerep/rng.hpp"

namespace gamerep {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Stochastic training-time augmentation. Each transform fires independently
/// with its probability; parameters are drawn uniformly from the range.
/// Callers own the seed policy: pass an Rng derived per sample for
/// reproducible parallel-safe augmentation. Validation images are never
/// augmented (enforced by the trainer, not here).
struct AugmentationConfig {
  double flip_prob = 0.5;

  double zoom_prob = 0.3;
  Range zoom{0.85, 1.15};

  double brightness_prob = 0.3;
  Range brightness{0.7, 1.3};

  double rescale_prob = 0.2;
  Range rescale{0.9, 1.1};  // drawn per axis

  double rotation_prob = 0.2;
  Range rotation_deg{-10.0, 10.0};

  void validate() const;
};

/// Applies flip, zoom, brightness, rescale, rotation in that order. Output
/// shape equals input shape; geometric transforms sample with edge
/// replication so no off-frame border color is introduced; values are
/// clamped to [0,1]. With all probabilities zero this is the exact identity.
Image augment_image(const Image& in, const AugmentationConfig& cfg, Rng& rng);

/// Same, preserving the label fields untouched.
ImageSample augment(const ImageSample& in, const AugmentationConfig& cfg, Rng& rng);

// Individual transforms, exposed for tests.
Image flip_horizontal(const Image& in);
Image zoom_about_center(const Image& in, double factor);
Image adjust_brightness(const Image& in, double factor);
Image rescale_axes(const Image& in, double factor_y, double factor_x);
Image rotate_about_center(const Image& in, double degrees);

}  // namespace gamerep
