#pragma once

// Accuracy metrics between engines, cycle statistics, counter-size sweeps
// and the generator/power/throughput arithmetic of the hardware model.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "sbm/disparity_model.hpp"
#include "sbm/disparity_result.hpp"

namespace sbm {

/// sqrt(mean over all entries of (a - b)^2). Throws std::invalid_argument
/// for an empty set or mismatched shapes.
double rms_distribution_error(std::span<const std::vector<double>> stochastic,
                              std::span<const std::vector<double>> reference);

/// F1 of `predicted` against `truth` (the reference flags). With no positive
/// in either set the score is 1 when both are empty; otherwise a side with no
/// positives scores 0.
double f1_nomatch(const std::vector<bool>& truth, const std::vector<bool>& predicted);

struct AccuracyReport {
  double rms_error = 0.0;  // NaN when no pixel is matched by both engines
  double f1_nomatch = 0.0;
  std::size_t matched_both = 0;
  std::size_t nomatch_reference = 0;
  std::size_t nomatch_stochastic = 0;
  std::size_t invalid = 0;
  std::size_t timeouts = 0;
};

/// RMS over pixels matched by both engines, disparity entries only (the
/// no-match channel is excluded); F1 over every non-invalid pixel. A timed-out
/// pixel counts as not flagged no-match. Both results must cover the same region.
AccuracyReport compare_results(const DisparityResult& reference, const DisparityResult& stochastic);

struct CycleStats {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation over pixels
  std::size_t pixels = 0;
  std::size_t timeouts = 0;
};

/// Cycles to first overflow over non-invalid pixels (timeouts count at max_cycles).
CycleStats cycle_statistics(const DisparityResult& stochastic);

struct HardwareInputs {
  std::size_t channels = 82;  // M
  std::size_t terms = 3;      // N
  double mean_cycles_per_pixel = 0.0;
  std::size_t image_width = 640;
  std::size_t image_height = 480;
  std::uint32_t d_max = 80;
  double clock_hz = 500e6;
  double generator_power_w = 50e-6;
};

struct HardwareEstimate {
  std::size_t generators = 0;
  double power_w = 0.0;
  std::size_t valid_pixels = 0;
  double cycles_per_pixel = 0.0;
  double cycles_per_image = 0.0;
  double frames_per_second = 0.0;
  double clock_hz = 0.0;
  double generator_power_w = 0.0;
};

/// generators = N M, power = generators * per-generator power,
/// valid pixels = (W - 4 - d_max)(H - 4), cycles/image = valid pixels * cycles/pixel,
/// fps = clock / cycles per image.
HardwareEstimate hardware_estimate(const HardwareInputs& in);

struct SweepRow {
  std::uint32_t n_max = 0;
  double rms = 0.0;
  double f1 = 0.0;
  double cycles_mean = 0.0;
  double cycles_sd = 0.0;
  std::size_t timeouts = 0;
};

struct SweepOptions {
  std::vector<std::uint32_t> n_max_values{1, 4, 16, 64, 256};
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t max_cycles = 10'000'000;
  std::size_t workers = 1;
  std::optional<Region> region;
};

/// For each n_max: RMS and F1 against the reference averaged over seeds,
/// cycle mean/sd pooled over pixels and seeds, total timeouts.
std::vector<SweepRow> sweep_counter_sizes(const LikelihoodVolume& volume, const SweepOptions& options);

/// Header `n_max,rms,f1,cycles_mean,cycles_sd,timeouts`, fixed 6-digit decimals.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double max_relative_residual = 0.0;  // max |y - fit| / |fit|
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace sbm
