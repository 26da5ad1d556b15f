#include "sbm/disparity_result.hpp"

#include <stdexcept>

namespace sbm {

std::uint8_t disparity_luminance(std::uint32_t disparity, std::uint32_t d_max) {
  if (d_max == 0 || disparity > d_max) throw std::out_of_range("disparity_luminance: bad disparity");
  return static_cast<std::uint8_t>(round_div(255 * static_cast<std::int64_t>(disparity), d_max));
}

DisparityResult::DisparityResult(Region region_, std::uint32_t d_max_, std::uint32_t n_max_)
    : region(region_),
      d_max(d_max_),
      n_max(n_max_),
      pixels(region_.area()),
      distributions(region_.area() * (static_cast<std::size_t>(d_max_) + 2), 0.0) {
  if (n_max_ != 0) counts.assign(distributions.size(), 0);
}

DisparityImage disparity_image(const DisparityResult& result) {
  DisparityImage out{GrayImage(result.region.width, result.region.height),
                     GrayImage(result.region.width, result.region.height)};
  for (std::size_t y = 0; y < result.region.height; ++y) {
    for (std::size_t x = 0; x < result.region.width; ++x) {
      const PixelOutcome& px = result.pixels[y * result.region.width + x];
      switch (px.state) {
        case PixelState::kMatched:
          out.image(x, y) = disparity_luminance(px.disparity, result.d_max);
          out.valid(x, y) = 255;
          break;
        case PixelState::kNoMatch:
          out.valid(x, y) = 255;
          break;
        case PixelState::kInvalid:
        case PixelState::kTimeout:
          break;
      }
    }
  }
  return out;
}

std::vector<double> sum_normalized(std::span<const double> distribution) {
  double total = 0.0;
  for (double v : distribution) total += v;
  if (!(total > 0.0)) throw std::invalid_argument("sum_normalized: all-zero distribution");
  std::vector<double> out(distribution.begin(), distribution.end());
  for (double& v : out) v /= total;
  return out;
}

void check_region(const Region& region, std::size_t map_width, std::size_t map_height) {
  if (region.width == 0 || region.height == 0 || region.x0 + region.width > map_width ||
      region.y0 + region.height > map_height) {
    throw std::invalid_argument("region outside the feature map");
  }
}

}  // namespace sbm
