#include "sbm/reference_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "sbm/parallel.hpp"

namespace sbm {

PixelPosterior infer_pixel(const PixelLikelihoods& pixel) {
  if (pixel.by_disparity.empty()) throw std::invalid_argument("infer_pixel: empty pixel");
  PixelPosterior post;
  const std::size_t n_disp = pixel.by_disparity.size();
  post.scores.resize(n_disp + 1);
  std::size_t best = 0;
  for (std::size_t d = 0; d < n_disp; ++d) {
    const auto& l = pixel.by_disparity[d];
    post.scores[d] = l[0] * l[1] * l[2];
    if (post.scores[d] > post.scores[best]) best = d;
  }
  post.scores[n_disp] = pixel.nomatch;
  post.no_match = pixel.nomatch > post.scores[best];
  if (!post.no_match) post.map_disparity = static_cast<std::uint32_t>(best);

  const double peak = std::max(post.scores[best], pixel.nomatch);
  post.normalized.resize(post.scores.size());
  for (std::size_t j = 0; j < post.scores.size(); ++j) post.normalized[j] = post.scores[j] / peak;
  // The winner reads exactly 1, as a counter readout would.
  post.normalized[post.no_match ? n_disp : best] = 1.0;
  return post;
}

DisparityResult reference_infer(const LikelihoodVolume& volume, std::optional<Region> region,
                                std::size_t workers) {
  const Region r = region.value_or(volume.valid_region());
  check_region(r, volume.width(), volume.height());
  DisparityResult result(r, volume.params().d_max, 0);
  parallel_for(r.height, workers, [&](std::size_t row) {
    const std::size_t y = r.y0 + row;
    for (std::size_t x = r.x0; x < r.x0 + r.width; ++x) {
      if (!volume.is_valid(x, y)) continue;
      const std::size_t i = result.index(x, y);
      PixelPosterior post = infer_pixel(volume.at(x, y));
      std::copy(post.normalized.begin(), post.normalized.end(), result.distribution(i).begin());
      result.pixels[i].state = post.no_match ? PixelState::kNoMatch : PixelState::kMatched;
      result.pixels[i].disparity = post.map_disparity.value_or(0);
    }
  });
  return result;
}

}  // namespace sbm
