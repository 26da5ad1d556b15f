#pragma once

// End-to-end disparity run: load a rectified pair, evaluate the reference
// and/or stochastic engine, and write disparity images, dumps and statistics.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbm/disparity_model.hpp"
#include "sbm/disparity_result.hpp"
#include "sbm/evaluation.hpp"
#include "sbm/stochastic_core.hpp"

namespace sbm {

enum class RunMode { kReference, kStochastic, kBoth };

RunMode parse_run_mode(const std::string& text);

struct RunConfig {
  std::filesystem::path left_path;
  std::filesystem::path right_path;
  ModelParams params;
  std::uint32_t n_max = 16;
  std::uint64_t seed = 1;
  RunMode mode = RunMode::kBoth;
  std::filesystem::path output_prefix = "disparity";
  bool write_dumps = false;
  std::optional<Region> crop;  // feature-map coordinates
  std::uint64_t max_cycles = kDefaultMaxCycles;
  std::size_t workers = 1;
  double timeout_fraction_limit = 0.01;
};

struct PipelineReport {
  std::optional<DisparityResult> reference;
  std::optional<DisparityResult> stochastic;
  std::optional<CycleStats> cycles;
  std::optional<AccuracyReport> accuracy;
  bool timeout_limit_exceeded = false;
  std::vector<std::filesystem::path> written;
};

/// Thrown for configurations that cannot run (sizes, crop, parameters).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Runs on images already in memory. Progress goes to `log`.
PipelineReport process_pair(const GrayImage& left, const GrayImage& right, const RunConfig& config,
                            std::ostream& log);

/// Loads both images and calls process_pair.
PipelineReport run_pipeline(const RunConfig& config, std::ostream& log);

}  // namespace sbm
