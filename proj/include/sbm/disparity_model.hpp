#pragma once

// Probabilistic stereo model: 5x5 feature filters, squared-difference
// matching costs, Gaussian-plus-floor likelihoods, the no-match channel and
// the per-pixel fusion problem handed to the stochastic machine.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sbm/bayesian_machine.hpp"
#include "sbm/image.hpp"

namespace sbm {

enum class Feature : std::size_t { kMean = 0, kGradH = 1, kGradV = 2 };
inline constexpr std::size_t kFeatureCount = 3;
inline constexpr std::size_t kKernelSize = 5;
inline constexpr std::size_t kKernelMargin = kKernelSize - 1;

// Filter kernels, indexed [row][column]. The mean filter is a box filter
// divided by 25. Gradients smooth uniformly across and difference with
// (-2, -1, 0, 1, 2) along their direction; the raw response is scaled by
// 127 / 3825 so 8-bit input lands in [-127, 127]. All outputs round to
// nearest, ties away from zero.
inline constexpr std::array<std::array<int, 5>, 5> kMeanKernel{{
    {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}}};
inline constexpr std::array<std::array<int, 5>, 5> kGradHKernel{{
    {-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}, {-2, -1, 0, 1, 2}}};
inline constexpr std::array<std::array<int, 5>, 5> kGradVKernel{{
    {-2, -2, -2, -2, -2}, {-1, -1, -1, -1, -1}, {0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, {2, 2, 2, 2, 2}}};
inline constexpr int kMeanDivisor = 25;
inline constexpr int kGradNumerator = 127;
inline constexpr int kGradDenominator = 3825;

/// Integer division rounding to nearest, ties away from zero. den > 0.
constexpr std::int64_t round_div(std::int64_t num, std::int64_t den) noexcept {
  return num >= 0 ? (2 * num + den) / (2 * den) : -((-2 * num + den) / (2 * den));
}

/// Filter responses of one image. Map (x, y) corresponds to image pixel (x + 2, y + 2).
struct FeatureMaps {
  Grid<std::int16_t> mean;
  Grid<std::int16_t> grad_h;
  Grid<std::int16_t> grad_v;

  std::size_t width() const noexcept { return mean.width(); }
  std::size_t height() const noexcept { return mean.height(); }
  const Grid<std::int16_t>& get(Feature f) const noexcept;
};

/// Valid-region (unpadded) convolution with the three filters. Throws
/// std::invalid_argument for images smaller than 5 x 5.
FeatureMaps compute_features(const GrayImage& image);

struct ModelParams {
  std::uint32_t d_max = 80;
  double p0 = 0.02;
  double sigma_mean = 10.0;
  double sigma_grad_h = 10.0;
  double sigma_grad_v = 10.0;
  double p_nm0 = 0.01;
  double sigma_nm = 8.0;

  double sigma(Feature f) const noexcept;
  std::size_t channel_count() const noexcept { return static_cast<std::size_t>(d_max) + 2; }
  std::size_t nomatch_channel() const noexcept { return static_cast<std::size_t>(d_max) + 1; }

  /// Throws std::invalid_argument on out-of-range values, including p_nm0 <= p0^3.
  void validate() const;
};

/// (f_l(x, y) - f_r(x - d, y))^2. Requires d_max <= x < width and d <= d_max.
double matching_cost(const FeatureMaps& left, const FeatureMaps& right, std::size_t x,
                     std::size_t y, std::size_t d, Feature feature, std::uint32_t d_max);

/// p0 + (1 - p0) exp(-cost / (2 sigma^2)).
double likelihood(double cost, double sigma, double p0);

/// p_nm0 + (1 - p_nm0) exp(-g_v^2 / (2 sigma_nm^2)), g_v taken from the left image.
double nomatch_probability(double grad_v_left, double p_nm0, double sigma_nm);

/// Likelihood table of one pixel.
struct PixelLikelihoods {
  std::vector<std::array<double, kFeatureCount>> by_disparity;  // d = 0 .. d_max
  double nomatch = 1.0;

  std::size_t d_max() const noexcept { return by_disparity.size() - 1; }
};

/// Rectangle of feature-map pixels.
struct Region {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t area() const noexcept { return width * height; }
  friend bool operator==(const Region&, const Region&) = default;
};

/// Likelihoods for a rectified pair, evaluated on demand per pixel.
class LikelihoodVolume {
 public:
  LikelihoodVolume(const GrayImage& left, const GrayImage& right, ModelParams params);
  LikelihoodVolume(FeatureMaps left, FeatureMaps right, ModelParams params);

  const ModelParams& params() const noexcept { return params_; }
  const FeatureMaps& left() const noexcept { return left_; }
  const FeatureMaps& right() const noexcept { return right_; }
  std::size_t width() const noexcept { return left_.width(); }
  std::size_t height() const noexcept { return left_.height(); }

  /// All feature-map pixels with x >= d_max.
  Region valid_region() const noexcept;
  bool is_valid(std::size_t x, std::size_t y) const noexcept;

  /// Throws std::out_of_range for invalid pixels.
  PixelLikelihoods at(std::size_t x, std::size_t y) const;

 private:
  FeatureMaps left_;
  FeatureMaps right_;
  ModelParams params_;
};

/// Disparity machine for one pixel: M = d_max + 2 channels, N = 3 terms.
/// Rows 0..d_max carry the three feature likelihoods, the last row carries
/// (p_nomatch, 1, 1). The uniform prior is constant-1 with C_0 = d_max + 1.
FusionSpec build_pixel_spec(const PixelLikelihoods& pixel);
FusionSpec build_pixel_spec(const LikelihoodVolume& volume, std::size_t x, std::size_t y);

struct CameraGeometry {
  double focal_length = 0.0;  // same length unit as baseline and pixel pitch
  double baseline = 0.0;
};

/// Depth B f / (d * pixel_pitch). Empty for d = 0 (point at infinity).
std::optional<double> disparity_to_depth(std::uint32_t disparity, const CameraGeometry& geometry,
                                         double pixel_pitch);

}  // namespace sbm
