#pragma once

// Per-pixel disparity machines run over a region of a likelihood volume.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "sbm/disparity_model.hpp"
#include "sbm/disparity_result.hpp"
#include "sbm/stochastic_core.hpp"

namespace sbm {

struct StochasticOptions {
  std::uint32_t n_max = 16;
  std::uint64_t seed = 1;
  std::uint64_t max_cycles = kDefaultMaxCycles;
  std::size_t workers = 1;
};

/// Seed of the machine at feature-map pixel (x, y). Machines are re-seeded
/// from their coordinates, so results do not depend on scan order.
std::uint64_t pixel_seed(std::uint64_t master_seed, std::size_t x, std::size_t y) noexcept;

/// Runs one fresh machine per valid pixel of `region` (defaults to the
/// volume's valid region). The no-match channel winning marks a no-match pixel.
DisparityResult stochastic_infer(const LikelihoodVolume& volume, const StochasticOptions& options,
                                 std::optional<Region> region = {});

}  // namespace sbm
