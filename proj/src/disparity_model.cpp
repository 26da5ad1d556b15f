#include "sbm/disparity_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sbm {

namespace {

// Separable evaluation of the three kernels: column sums and weighted
// column sums feed all filters in one pass.
void filter_row(const GrayImage& image, std::size_t y, FeatureMaps& maps) {
  const std::size_t out_w = image.width() - kKernelMargin;
  const std::size_t full_w = image.width();
  std::vector<std::int64_t> col_sum(full_w, 0);
  std::vector<std::int64_t> col_vdiff(full_w, 0);
  for (std::size_t x = 0; x < full_w; ++x) {
    std::int64_t sum = 0;
    std::int64_t vdiff = 0;
    for (std::size_t r = 0; r < kKernelSize; ++r) {
      const std::int64_t v = image(x, y + r);
      sum += v;
      vdiff += kGradVKernel[r][0] * v;
    }
    col_sum[x] = sum;
    col_vdiff[x] = vdiff;
  }
  for (std::size_t x = 0; x < out_w; ++x) {
    std::int64_t sum = 0;
    std::int64_t hdiff = 0;
    std::int64_t vdiff = 0;
    for (std::size_t c = 0; c < kKernelSize; ++c) {
      sum += col_sum[x + c];
      hdiff += kGradHKernel[0][c] * col_sum[x + c];
      vdiff += col_vdiff[x + c];
    }
    maps.mean(x, y) = static_cast<std::int16_t>(round_div(sum, kMeanDivisor));
    maps.grad_h(x, y) =
        static_cast<std::int16_t>(round_div(hdiff * kGradNumerator, kGradDenominator));
    maps.grad_v(x, y) =
        static_cast<std::int16_t>(round_div(vdiff * kGradNumerator, kGradDenominator));
  }
}

}  // namespace

const Grid<std::int16_t>& FeatureMaps::get(Feature f) const noexcept {
  switch (f) {
    case Feature::kMean:
      return mean;
    case Feature::kGradH:
      return grad_h;
    case Feature::kGradV:
      break;
  }
  return grad_v;
}

FeatureMaps compute_features(const GrayImage& image) {
  if (image.width() < kKernelSize || image.height() < kKernelSize) {
    throw std::invalid_argument("compute_features: image smaller than the 5x5 kernel");
  }
  const std::size_t w = image.width() - kKernelMargin;
  const std::size_t h = image.height() - kKernelMargin;
  FeatureMaps maps{Grid<std::int16_t>(w, h), Grid<std::int16_t>(w, h), Grid<std::int16_t>(w, h)};
  for (std::size_t y = 0; y < h; ++y) filter_row(image, y, maps);
  return maps;
}

double ModelParams::sigma(Feature f) const noexcept {
  switch (f) {
    case Feature::kMean:
      return sigma_mean;
    case Feature::kGradH:
      return sigma_grad_h;
    case Feature::kGradV:
      break;
  }
  return sigma_grad_v;
}

void ModelParams::validate() const {
  if (d_max == 0) throw std::invalid_argument("ModelParams: d_max must be positive");
  if (d_max > 65533) throw std::invalid_argument("ModelParams: d_max too large");
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::invalid_argument("ModelParams: p0 must lie in (0, 1)");
  if (!(p_nm0 > 0.0 && p_nm0 < 1.0)) {
    throw std::invalid_argument("ModelParams: p_nm0 must lie in (0, 1)");
  }
  if (!(p_nm0 > p0 * p0 * p0)) {
    throw std::invalid_argument("ModelParams: p_nm0 must exceed p0^3");
  }
  for (double s : {sigma_mean, sigma_grad_h, sigma_grad_v, sigma_nm}) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("ModelParams: sigmas must be positive and finite");
    }
  }
}

double matching_cost(const FeatureMaps& left, const FeatureMaps& right, std::size_t x,
                     std::size_t y, std::size_t d, Feature feature, std::uint32_t d_max) {
  if (x < d_max || x >= left.width() || y >= left.height()) {
    throw std::out_of_range("matching_cost: pixel (" + std::to_string(x) + ", " +
                            std::to_string(y) + ") outside the valid region");
  }
  if (d > d_max || d > x || right.width() != left.width() || right.height() != left.height()) {
    throw std::out_of_range("matching_cost: disparity " + std::to_string(d) + " out of range");
  }
  const double diff = static_cast<double>(left.get(feature)(x, y)) -
                      static_cast<double>(right.get(feature)(x - d, y));
  return diff * diff;
}

double likelihood(double cost, double sigma, double p0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("likelihood: sigma must be positive");
  if (!(cost >= 0.0)) throw std::invalid_argument("likelihood: cost must be nonnegative");
  return p0 + (1.0 - p0) * std::exp(-cost / (2.0 * sigma * sigma));
}

double nomatch_probability(double grad_v_left, double p_nm0, double sigma_nm) {
  if (!(sigma_nm > 0.0)) throw std::invalid_argument("nomatch_probability: sigma_nm must be positive");
  return p_nm0 + (1.0 - p_nm0) * std::exp(-(grad_v_left * grad_v_left) / (2.0 * sigma_nm * sigma_nm));
}

LikelihoodVolume::LikelihoodVolume(const GrayImage& left, const GrayImage& right, ModelParams params)
    : LikelihoodVolume(compute_features(left), compute_features(right), params) {
  if (left.width() != right.width() || left.height() != right.height()) {
    throw std::invalid_argument("LikelihoodVolume: left and right images differ in size");
  }
}

LikelihoodVolume::LikelihoodVolume(FeatureMaps left, FeatureMaps right, ModelParams params)
    : left_(std::move(left)), right_(std::move(right)), params_(params) {
  params_.validate();
  if (left_.width() != right_.width() || left_.height() != right_.height()) {
    throw std::invalid_argument("LikelihoodVolume: feature maps differ in size");
  }
}

Region LikelihoodVolume::valid_region() const noexcept {
  if (width() <= params_.d_max) return Region{params_.d_max, 0, 0, 0};
  return Region{params_.d_max, 0, width() - params_.d_max, height()};
}

bool LikelihoodVolume::is_valid(std::size_t x, std::size_t y) const noexcept {
  return x >= params_.d_max && x < width() && y < height();
}

PixelLikelihoods LikelihoodVolume::at(std::size_t x, std::size_t y) const {
  if (!is_valid(x, y)) {
    throw std::out_of_range("LikelihoodVolume::at: pixel (" + std::to_string(x) + ", " +
                            std::to_string(y) + ") is not valid");
  }
  PixelLikelihoods out;
  out.by_disparity.resize(static_cast<std::size_t>(params_.d_max) + 1);
  constexpr std::array kFeatures{Feature::kMean, Feature::kGradH, Feature::kGradV};
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto& lmap = left_.get(kFeatures[f]);
    const auto& rmap = right_.get(kFeatures[f]);
    const double sigma = params_.sigma(kFeatures[f]);
    const double lv = lmap(x, y);
    for (std::size_t d = 0; d <= params_.d_max; ++d) {
      const double diff = lv - static_cast<double>(rmap(x - d, y));
      out.by_disparity[d][f] = likelihood(diff * diff, sigma, params_.p0);
    }
  }
  out.nomatch = nomatch_probability(left_.grad_v(x, y), params_.p_nm0, params_.sigma_nm);
  return out;
}

FusionSpec build_pixel_spec(const PixelLikelihoods& pixel) {
  if (pixel.by_disparity.empty()) throw std::invalid_argument("build_pixel_spec: empty pixel");
  const std::size_t width = pixel.by_disparity.size() + 1;
  std::vector<std::vector<double>> terms(kFeatureCount, std::vector<double>(width, 1.0));
  for (std::size_t d = 0; d < pixel.by_disparity.size(); ++d) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) terms[f][d] = pixel.by_disparity[d][f];
  }
  terms[0][width - 1] = pixel.nomatch;

  FusionSpec spec;
  spec.prior.assign(width, 1.0);
  spec.terms = std::move(terms);
  spec.bus_constants.assign(kFeatureCount + 1, 1.0);
  spec.bus_constants[0] = static_cast<double>(pixel.by_disparity.size());
  spec.validate();
  return spec;
}

FusionSpec build_pixel_spec(const LikelihoodVolume& volume, std::size_t x, std::size_t y) {
  return build_pixel_spec(volume.at(x, y));
}

std::optional<double> disparity_to_depth(std::uint32_t disparity, const CameraGeometry& geometry,
                                         double pixel_pitch) {
  if (!(geometry.focal_length > 0.0) || !(geometry.baseline > 0.0) || !(pixel_pitch > 0.0)) {
    throw std::invalid_argument("disparity_to_depth: geometry must be positive");
  }
  if (disparity == 0) return std::nullopt;
  return geometry.baseline * geometry.focal_length / (static_cast<double>(disparity) * pixel_pitch);
}

}  // namespace sbm
