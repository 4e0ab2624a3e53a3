#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gamerep {

/// RGB image, HWC layout, float values in [0, 1].
struct Image {
  int height = 0;
  int width = 0;
  std::vector<float> pixels;  // height * width * 3

  Image() = default;
  Image(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * 3, 0.0f) {}

  float& at(int y, int x, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  float at(int y, int x, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }

  bool operator==(const Image&) const = default;
};

/// One labelled corpus element: pixels plus the content (genre) and style
/// (game, style category) factors.
struct ImageSample {
  Image image;
  int genre_id = -1;
  std::string game_id;
  int style_id = -1;
};

/// Bilinear resample to out_h x out_w. Corner-aligned mapping, so equal sizes
/// copy exactly and constant images stay constant. Throws on non-positive
/// target sizes or an empty input.
Image resize_bilinear(const Image& in, int out_h, int out_w);

/// Throws unless shape/value invariants hold (finite, within [0,1]).
void validate_image(const Image& img);

}  // namespace gamerep
