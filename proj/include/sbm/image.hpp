#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sbm {

/// Row-major 2-D grid.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }
  const T& operator()(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }

  T& at(std::size_t x, std::size_t y) {
    if (x >= width_ || y >= height_) throw std::out_of_range("Grid::at");
    return (*this)(x, y);
  }
  const T& at(std::size_t x, std::size_t y) const {
    if (x >= width_ || y >= height_) throw std::out_of_range("Grid::at");
    return (*this)(x, y);
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// 8-bit luminance image; the storage type bounds every pixel to [0, 255].
using GrayImage = Grid<std::uint8_t>;

/// Copies the rectangle [x0, x0 + width) x [y0, y0 + height).
GrayImage crop(const GrayImage& image, std::size_t x0, std::size_t y0, std::size_t width,
               std::size_t height);

}  // namespace sbm
