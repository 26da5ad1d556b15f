#include "sbm/image.hpp"

namespace sbm {

GrayImage crop(const GrayImage& image, std::size_t x0, std::size_t y0, std::size_t width,
               std::size_t height) {
  if (x0 + width > image.width() || y0 + height > image.height()) {
    throw std::out_of_range("crop: rectangle outside image");
  }
  GrayImage out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) out(x, y) = image(x0 + x, y0 + y);
  }
  return out;
}

}  // namespace sbm
