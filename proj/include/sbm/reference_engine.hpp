#pragma once

// Floating-point evaluation of the fused posterior, used as the oracle for
// the stochastic machine.

#include <cstddef>
#include <optional>
#include <vector>

#include "sbm/disparity_model.hpp"
#include "sbm/disparity_result.hpp"

namespace sbm {

struct PixelPosterior {
  std::vector<double> scores;      // d_max + 2 unnormalized: prod_f likelihoods, then p_nomatch
  std::vector<double> normalized;  // scores / max(scores)
  bool no_match = false;           // p_nomatch strictly above every disparity score
  std::optional<std::uint32_t> map_disparity;  // lowest index among equal maxima
};

PixelPosterior infer_pixel(const PixelLikelihoods& pixel);

/// Reference posterior over `region` (defaults to the volume's valid region).
DisparityResult reference_infer(const LikelihoodVolume& volume, std::optional<Region> region = {},
                                std::size_t workers = 1);

}  // namespace sbm
