#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sbm/disparity_model.hpp"
#include "sbm/image.hpp"

namespace sbm {

enum class PixelState : std::uint8_t {
  kInvalid,  // x < d_max: no distribution is computed
  kMatched,
  kNoMatch,
  kTimeout,  // stochastic only: no counter overflowed within max_cycles
};

struct PixelOutcome {
  PixelState state = PixelState::kInvalid;
  std::uint32_t disparity = 0;  // MAP index, meaningful when matched
  std::uint64_t cycles = 0;     // stochastic only
};

/// Per-pixel results of either engine over a region of the feature maps.
/// Each non-invalid pixel carries d_max + 2 max-normalized values, the last
/// one being the no-match channel.
struct DisparityResult {
  Region region;
  std::uint32_t d_max = 0;
  std::uint32_t n_max = 0;  // 0 for the reference engine
  std::vector<PixelOutcome> pixels;
  std::vector<double> distributions;  // area * channels
  std::vector<std::uint32_t> counts;  // area * channels, stochastic only

  DisparityResult() = default;
  DisparityResult(Region region, std::uint32_t d_max, std::uint32_t n_max);

  std::size_t channels() const noexcept { return static_cast<std::size_t>(d_max) + 2; }
  std::size_t index(std::size_t x, std::size_t y) const noexcept {
    return (y - region.y0) * region.width + (x - region.x0);
  }
  std::span<const double> distribution(std::size_t i) const noexcept {
    return {distributions.data() + i * channels(), channels()};
  }
  std::span<double> distribution(std::size_t i) noexcept {
    return {distributions.data() + i * channels(), channels()};
  }
  std::span<const std::uint32_t> pixel_counts(std::size_t i) const noexcept {
    return {counts.data() + i * channels(), channels()};
  }
  bool is_stochastic() const noexcept { return n_max != 0; }
};

/// Disparity map encoding: no-match -> 0, disparity d -> round(255 d / d_max).
/// Invalid and timed-out pixels are 0 in `image` and 0 in `valid`; valid
/// pixels are 255 in `valid`.
struct DisparityImage {
  GrayImage image;
  GrayImage valid;
};

std::uint8_t disparity_luminance(std::uint32_t disparity, std::uint32_t d_max);

DisparityImage disparity_image(const DisparityResult& result);

/// Rescales nonnegative scores to sum to 1; throws on an all-zero vector.
std::vector<double> sum_normalized(std::span<const double> distribution);

/// Throws std::invalid_argument if the region leaves the feature map.
void check_region(const Region& region, std::size_t map_width, std::size_t map_height);

}  // namespace sbm
