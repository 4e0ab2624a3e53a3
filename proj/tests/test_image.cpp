#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gamerep/augment.hpp"
#include "gamerep/error.hpp"
#include "gamerep/image.hpp"
#include "gamerep/rng.hpp"

using namespace gamerep;

namespace {

Image constant_image(int h, int w, float v) {
  Image img(h, w);
  std::fill(img.pixels.begin(), img.pixels.end(), v);
  return img;
}

Image random_image(int h, int w, std::uint64_t seed) {
  Image img(h, w);
  Rng rng(seed);
  for (auto& p : img.pixels) p = static_cast<float>(rng.uniform());
  return img;
}

double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(a.pixels[i]) - b.pixels[i]));
  return m;
}

}  // namespace

TEST_CASE("resize to the same size copies exactly") {
  const Image img = random_image(64, 64, 1);
  CHECK(resize_bilinear(img, 64, 64) == img);
}

TEST_CASE("resize preserves constant images") {
  const Image img = constant_image(100, 80, 0.37f);
  const Image out = resize_bilinear(img, 32, 32);
  CHECK(out.height == 32);
  CHECK(out.width == 32);
  for (float v : out.pixels) CHECK(v == doctest::Approx(0.37f).epsilon(1e-6));
}

TEST_CASE("2x2 checkerboard to 3x3 puts 0.5 in the center") {
  // Hand evaluation: corner-aligned mapping sends output (1,1) to source
  // (0.5, 0.5); the bilinear blend of {0,1,1,0} is 0.5. Corners map onto the
  // original corners exactly.
  Image img(2, 2);
  for (int c = 0; c < 3; ++c) {
    img.at(0, 0, c) = 0.0f;
    img.at(0, 1, c) = 1.0f;
    img.at(1, 0, c) = 1.0f;
    img.at(1, 1, c) = 0.0f;
  }
  const Image out = resize_bilinear(img, 3, 3);
  for (int c = 0; c < 3; ++c) {
    CHECK(out.at(1, 1, c) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.at(0, 0, c) == doctest::Approx(0.0));
    CHECK(out.at(0, 2, c) == doctest::Approx(1.0));
    CHECK(out.at(2, 0, c) == doctest::Approx(1.0));
    CHECK(out.at(2, 2, c) == doctest::Approx(0.0));
  }
}

TEST_CASE("resize keeps values in range") {
  const Image img = random_image(17, 23, 5);
  for (auto [h, w] : {std::pair{8, 8}, {40, 12}, {23, 17}}) {
    const Image out = resize_bilinear(img, h, w);
    for (float v : out.pixels) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
}

TEST_CASE("resize rejects bad targets") {
  const Image img = random_image(8, 8, 2);
  CHECK_THROWS_AS(resize_bilinear(img, 0, 8), Error);
  CHECK_THROWS_AS(resize_bilinear(Image{}, 8, 8), Error);
}

TEST_CASE("augment with zero probabilities is the identity") {
  AugmentationConfig cfg;
  cfg.flip_prob = cfg.zoom_prob = cfg.brightness_prob = cfg.rescale_prob =
      cfg.rotation_prob = 0.0;
  const Image img = random_image(32, 32, 9);
  Rng rng(1);
  CHECK(augment_image(img, cfg, rng) == img);
}

TEST_CASE("horizontal flip is an involution") {
  const Image img = random_image(16, 24, 3);
  CHECK(flip_horizontal(flip_horizontal(img)) == img);
}

TEST_CASE("neutral parameters are exact identities regardless of probability") {
  AugmentationConfig cfg;
  cfg.flip_prob = 0.0;
  cfg.zoom_prob = 1.0;
  cfg.zoom = {1.0, 1.0};
  cfg.brightness_prob = 1.0;
  cfg.brightness = {1.0, 1.0};
  cfg.rescale_prob = 1.0;
  cfg.rescale = {1.0, 1.0};
  cfg.rotation_prob = 1.0;
  cfg.rotation_deg = {0.0, 0.0};
  const Image img = random_image(32, 32, 12);
  Rng rng(4);
  CHECK(augment_image(img, cfg, rng) == img);
}

TEST_CASE("augment preserves shape, range and labels") {
  AugmentationConfig cfg;  // defaults: everything enabled
  ImageSample s;
  s.image = random_image(32, 32, 77);
  s.genre_id = 3;
  s.game_id = "x";
  s.style_id = 1;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const ImageSample out = augment(s, cfg, rng);
    CHECK(out.image.height == 32);
    CHECK(out.image.width == 32);
    CHECK(out.genre_id == 3);
    CHECK(out.game_id == "x");
    CHECK(out.style_id == 1);
    for (float v : out.image.pixels) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
}

TEST_CASE("augment is deterministic per rng seed") {
  AugmentationConfig cfg;
  const Image img = random_image(32, 32, 13);
  Rng a(99), b(99);
  CHECK(augment_image(img, cfg, a) == augment_image(img, cfg, b));
}

TEST_CASE("rotation by zero and zoom by one copy exactly") {
  const Image img = random_image(21, 21, 8);
  CHECK(rotate_about_center(img, 0.0) == img);
  CHECK(zoom_about_center(img, 1.0) == img);
  CHECK(rescale_axes(img, 1.0, 1.0) == img);
}

TEST_CASE("zoom out replicates edges rather than injecting black") {
  const Image img = constant_image(16, 16, 0.8f);
  const Image out = zoom_about_center(img, 0.5);
  CHECK(max_abs_diff(out, img) < 1e-6);
}

TEST_CASE("brightness clamps to [0,1]") {
  const Image img = constant_image(4, 4, 0.9f);
  const Image out = adjust_brightness(img, 1.3);
  for (float v : out.pixels) CHECK(v == 1.0f);
}

TEST_CASE("invalid augment config is rejected") {
  AugmentationConfig cfg;
  cfg.flip_prob = 1.5;
  Rng rng(1);
  const Image img = constant_image(8, 8, 0.5f);
  CHECK_THROWS_AS(augment_image(img, cfg, rng), Error);
  AugmentationConfig cfg2;
  cfg2.zoom = {1.2, 0.8};
  CHECK_THROWS_AS(augment_image(img, cfg2, rng), Error);
}
