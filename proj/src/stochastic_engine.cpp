#include "sbm/stochastic_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "sbm/bayesian_machine.hpp"
#include "sbm/parallel.hpp"
#include "sbm/rng.hpp"

namespace sbm {

std::uint64_t pixel_seed(std::uint64_t master_seed, std::size_t x, std::size_t y) noexcept {
  return derive_seed(derive_seed(master_seed, y), x);
}

DisparityResult stochastic_infer(const LikelihoodVolume& volume, const StochasticOptions& options,
                                 std::optional<Region> region) {
  if (options.n_max == 0 || options.n_max > 0xffff) {
    throw std::invalid_argument("stochastic_infer: n_max must lie in [1, 65535]");
  }
  if (options.max_cycles == 0) throw std::invalid_argument("stochastic_infer: max_cycles must be positive");
  const Region r = region.value_or(volume.valid_region());
  check_region(r, volume.width(), volume.height());
  const std::size_t nomatch = volume.params().nomatch_channel();
  DisparityResult result(r, volume.params().d_max, options.n_max);

  parallel_for(r.height, options.workers, [&](std::size_t row) {
    const std::size_t y = r.y0 + row;
    for (std::size_t x = r.x0; x < r.x0 + r.width; ++x) {
      if (!volume.is_valid(x, y)) continue;
      const std::size_t i = result.index(x, y);
      BayesianMachine machine(build_pixel_spec(volume, x, y), pixel_seed(options.seed, x, y));
      MachineResult run = run_machine(machine, options.n_max, options.max_cycles);

      std::copy(run.counts.begin(), run.counts.end(),
                result.counts.begin() + static_cast<std::ptrdiff_t>(i * result.channels()));
      std::copy(run.readout.begin(), run.readout.end(), result.distribution(i).begin());
      PixelOutcome& px = result.pixels[i];
      px.cycles = run.cycles;
      if (run.timed_out()) {
        px.state = PixelState::kTimeout;
      } else if (*run.winner == nomatch) {
        px.state = PixelState::kNoMatch;
      } else {
        px.state = PixelState::kMatched;
        px.disparity = static_cast<std::uint32_t>(*run.winner);
      }
    }
  });
  return result;
}

}  // namespace sbm
