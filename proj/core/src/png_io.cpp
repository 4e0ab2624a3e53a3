#include "gamerep/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "gamerep/error.hpp"

namespace gamerep {

Image read_png(const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    std::string msg = png.message;
    png_image_free(&png);
    throw data_error("missing-file", "cannot read PNG '" + path + "': " + msg);
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw data_error("png-decode", "cannot decode PNG '" + path + "': " + msg);
  }
  Image img(static_cast<int>(png.height), static_cast<int>(png.width));
  for (std::size_t i = 0; i < buf.size(); ++i)
    img.pixels[i] = static_cast<float>(buf[i]) / 255.0f;
  return img;
}

void write_png(const std::string& path, const Image& img) {
  if (img.height <= 0 || img.width <= 0)
    throw data_error("image-shape", "cannot write an empty image");
  std::vector<unsigned char> buf(img.pixels.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const float v = std::clamp(img.pixels[i], 0.0f, 1.0f);
    buf[i] = static_cast<unsigned char>(std::lround(v * 255.0f));
  }
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, buf.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw data_error("png-write", "cannot write PNG '" + path + "': " + msg);
  }
}

}  // namespace gamerep
