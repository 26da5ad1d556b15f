#pragma once

// Synthetic rectified stereo pairs with known disparity.

#include <cstddef>
#include <cstdint>

#include "sbm/image.hpp"

namespace sbm {

struct StereoPair {
  GrayImage left;
  GrayImage right;
  Grid<float> disparity;  // true left-image disparity, < 0 where occluded in the right view
};

/// i.i.d. uniform 8-bit texture.
GrayImage random_image(std::size_t width, std::size_t height, std::uint64_t seed);

/// Dense random texture seen with a uniform integer shift:
/// right(x, y) = left(x + shift, y). Left columns x < shift have no
/// counterpart in the right view and are marked occluded.
StereoPair planted_shift_pair(std::size_t width, std::size_t height, std::uint32_t shift,
                              std::uint64_t seed);

struct SceneOptions {
  std::size_t width = 240;
  std::size_t height = 100;
  std::uint64_t seed = 1;
  std::size_t objects = 1;           // fronto-parallel blobs in front of the background
  double min_disparity = 3.0;        // background disparity at the top row
  double max_disparity = 15.0;       // upper bound for object disparities
  double floor_slope = 0.12;         // background disparity gain per row
  double texture_contrast = 200.0;   // amplitude of the 1/f texture
  double texture_cell = 4.0;         // lattice spacing of the coarsest octave, pixels
  double flat_fraction = 0.25;       // share of objects rendered with almost no texture
  double noise_sigma = 2.0;          // additive sensor noise, gray levels
  double right_gain = 1.0;           // photometric mismatch of the right camera
  double right_offset = 12.0;
};

/// Office-like scene: a slanted textured background plane (fractional
/// disparities), fronto-parallel objects with 1/f textures, some weakly
/// textured, occlusions at object borders and independent sensor noise in
/// each view.
StereoPair natural_scene_pair(const SceneOptions& options);

}  // namespace sbm
