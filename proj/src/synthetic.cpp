#include "sbm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sbm/rng.hpp"

namespace sbm {

namespace {

/// Multi-octave value noise with amplitude halving per octave (1/f spectrum).
class FractalTexture {
 public:
  FractalTexture(std::uint64_t seed, double contrast, double base, double cell)
      : contrast_(contrast), base_(base), cell_(cell) {
    Xoshiro256 rng(seed);
    lattice_.resize(kOctaves);
    for (auto& oct : lattice_) {
      oct.resize(kLattice * kLattice);
      for (double& v : oct) v = rng.uniform() * 2.0 - 1.0;
    }
    offset_x_ = rng.uniform() * 1000.0;
    offset_y_ = rng.uniform() * 1000.0;
  }

  double operator()(double x, double y) const {
    double value = 0.0;
    double amplitude = 1.0;
    double cell = cell_;
    for (std::size_t o = 0; o < kOctaves; ++o) {
      value += amplitude * sample(lattice_[o], (x + offset_x_) / cell, (y + offset_y_) / cell);
      amplitude *= 0.6;
      cell /= 2.0;
    }
    return base_ + contrast_ * value;
  }

 private:
  static constexpr std::size_t kOctaves = 5;
  static constexpr std::size_t kLattice = 64;

  static double sample(const std::vector<double>& lat, double u, double v) {
    const double fu = std::floor(u), fv = std::floor(v);
    const double tu = u - fu, tv = v - fv;
    const auto wrap = [](double c) {
      auto i = static_cast<long long>(c) % static_cast<long long>(kLattice);
      return static_cast<std::size_t>(i < 0 ? i + static_cast<long long>(kLattice) : i);
    };
    const std::size_t x0 = wrap(fu), x1 = wrap(fu + 1), y0 = wrap(fv), y1 = wrap(fv + 1);
    const double a = lat[y0 * kLattice + x0] * (1 - tu) + lat[y0 * kLattice + x1] * tu;
    const double b = lat[y1 * kLattice + x0] * (1 - tu) + lat[y1 * kLattice + x1] * tu;
    return a * (1 - tv) + b * tv;
  }

  double contrast_;
  double base_;
  double cell_;
  double offset_x_ = 0.0;
  double offset_y_ = 0.0;
  std::vector<std::vector<double>> lattice_;
};

struct Blob {
  double cx, cy, rx, ry;
  double disparity;
  FractalTexture texture;

  bool covers(double x, double y) const {
    const double u = (x - cx) / rx, v = (y - cy) / ry;
    return u * u + v * v <= 1.0;
  }
};

std::uint8_t to_gray(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

double gaussian(Xoshiro256& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

GrayImage random_image(std::size_t width, std::size_t height, std::uint64_t seed) {
  GrayImage image(width, height);
  Xoshiro256 rng(seed);
  for (auto& px : image.data()) px = static_cast<std::uint8_t>(rng() >> 56);
  return image;
}

StereoPair planted_shift_pair(std::size_t width, std::size_t height, std::uint32_t shift,
                              std::uint64_t seed) {
  if (shift >= width) throw std::invalid_argument("planted_shift_pair: shift exceeds width");
  const GrayImage wide = random_image(width + shift, height, seed);
  StereoPair pair{GrayImage(width, height), GrayImage(width, height), Grid<float>(width, height)};
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      pair.left(x, y) = wide(x, y);
      pair.right(x, y) = wide(x + shift, y);
      pair.disparity(x, y) = x >= shift ? static_cast<float>(shift) : -1.0f;
    }
  }
  return pair;
}

StereoPair natural_scene_pair(const SceneOptions& opt) {
  if (opt.width < 8 || opt.height < 8) throw std::invalid_argument("natural_scene_pair: image too small");
  Xoshiro256 rng(derive_seed(opt.seed, 0));
  const FractalTexture background(derive_seed(opt.seed, 1), opt.texture_contrast, 128.0, opt.texture_cell);
  const auto bg_disparity = [&](double y) { return opt.min_disparity + opt.floor_slope * y; };

  std::vector<Blob> blobs;
  for (std::size_t k = 0; k < opt.objects; ++k) {
    const double rx = opt.width * (0.08 + 0.12 * rng.uniform());
    const double ry = opt.height * (0.15 + 0.2 * rng.uniform());
    const double cx = opt.width * (0.15 + 0.8 * rng.uniform());
    const double cy = opt.height * rng.uniform();
    const double lo = bg_disparity(cy) + 4.0;
    const double d = lo + (std::max(opt.max_disparity, lo) - lo) * rng.uniform();
    const bool flat = rng.uniform() < opt.flat_fraction;
    const double contrast = flat ? opt.texture_contrast * 0.03 : opt.texture_contrast * (0.6 + 0.6 * rng.uniform());
    blobs.push_back(Blob{cx, cy, rx, ry, d,
                         FractalTexture(derive_seed(opt.seed, 100 + k), contrast, 60.0 + 140.0 * rng.uniform(), opt.texture_cell)});
  }
  // Nearest first.
  std::stable_sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) { return a.disparity > b.disparity; });

  StereoPair pair{GrayImage(opt.width, opt.height), GrayImage(opt.width, opt.height),
                  Grid<float>(opt.width, opt.height)};
  Xoshiro256 noise_left(derive_seed(opt.seed, 2));
  Xoshiro256 noise_right(derive_seed(opt.seed, 3));

  for (std::size_t yi = 0; yi < opt.height; ++yi) {
    const double y = static_cast<double>(yi);
    for (std::size_t xi = 0; xi < opt.width; ++xi) {
      const double x = static_cast<double>(xi);
      // Left view: surfaces are parametrized by left-image coordinates.
      double value = background(x, y);
      double disparity = bg_disparity(y);
      for (const auto& b : blobs) {
        if (b.covers(x, y)) {
          value = b.texture(x, y);
          disparity = b.disparity;
          break;
        }
      }
      pair.left(xi, yi) = to_gray(value + opt.noise_sigma * gaussian(noise_left));
      pair.disparity(xi, yi) = static_cast<float>(disparity);

      // Right view: the nearest surface whose left footprint maps onto x.
      double rvalue = background(x + bg_disparity(y), y);
      for (const auto& b : blobs) {
        if (b.covers(x + b.disparity, y)) {
          rvalue = b.texture(x + b.disparity, y);
          break;
        }
      }
      pair.right(xi, yi) =
          to_gray(opt.right_gain * rvalue + opt.right_offset + opt.noise_sigma * gaussian(noise_right));
    }
  }
  // Mark left pixels hidden in the right view.
  for (std::size_t yi = 0; yi < opt.height; ++yi) {
    for (std::size_t xi = 0; xi < opt.width; ++xi) {
      const double d = pair.disparity(xi, yi);
      const double xr = static_cast<double>(xi) - d;
      bool hidden = xr < 0.0;
      for (const auto& b : blobs) {
        if (hidden || b.disparity <= d + 0.5) continue;
        if (b.covers(xr + b.disparity, static_cast<double>(yi))) hidden = true;
      }
      if (hidden) pair.disparity(xi, yi) = -1.0f;
    }
  }
  return pair;
}

}  // namespace sbm
