#include "sbm/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "sbm/dump.hpp"
#include "sbm/pgm.hpp"
#include "sbm/reference_engine.hpp"
#include "sbm/stochastic_engine.hpp"

namespace sbm {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const char* suffix) {
  return std::filesystem::path(prefix.string() + suffix);
}

}  // namespace

RunMode parse_run_mode(const std::string& text) {
  if (text == "reference") return RunMode::kReference;
  if (text == "stochastic") return RunMode::kStochastic;
  if (text == "both") return RunMode::kBoth;
  throw ConfigError("unknown mode '" + text + "' (expected reference, stochastic or both)");
}

PipelineReport process_pair(const GrayImage& left, const GrayImage& right, const RunConfig& config,
                            std::ostream& log) {
  if (left.width() != right.width() || left.height() != right.height()) {
    throw ConfigError("left and right images differ in size");
  }
  if (left.width() < kKernelSize || left.height() < kKernelSize) {
    throw ConfigError("images smaller than the 5x5 filters");
  }
  if (config.n_max == 0 || config.n_max > 0xffff) throw ConfigError("n_max must lie in [1, 65535]");
  if (config.max_cycles == 0) throw ConfigError("max_cycles must be positive");
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const LikelihoodVolume volume(left, right, config.params);
  const Region region = config.crop.value_or(Region{0, 0, volume.width(), volume.height()});
  try {
    check_region(region, volume.width(), volume.height());
  } catch (const std::invalid_argument&) {
    throw ConfigError("crop rectangle outside the " + std::to_string(volume.width()) + "x" +
                      std::to_string(volume.height()) + " feature map");
  }

  PipelineReport report;
  const bool want_reference = config.mode != RunMode::kStochastic;
  const bool want_stochastic = config.mode != RunMode::kReference;

  if (want_reference) {
    log << "reference: " << region.width << "x" << region.height << " pixels\n";
    report.reference = reference_infer(volume, region, config.workers);
  }
  if (want_stochastic) {
    log << "stochastic: n_max=" << config.n_max << " seed=" << config.seed << "\n";
    StochasticOptions options{config.n_max, config.seed, config.max_cycles, config.workers};
    report.stochastic = stochastic_infer(volume, options, region);
    report.cycles = cycle_statistics(*report.stochastic);
    char line[160];
    std::snprintf(line, sizeof line, "cycles/pixel: %.4f +- %.4f over %zu pixels, %zu timeouts\n",
                  report.cycles->mean, report.cycles->sd, report.cycles->pixels, report.cycles->timeouts);
    log << line;
    if (report.cycles->pixels > 0 &&
        static_cast<double>(report.cycles->timeouts) >
            config.timeout_fraction_limit * static_cast<double>(report.cycles->pixels)) {
      report.timeout_limit_exceeded = true;
      log << "warning: " << report.cycles->timeouts << " of " << report.cycles->pixels
          << " pixels timed out after " << config.max_cycles << " cycles\n";
    }
  }
  if (report.reference && report.stochastic) {
    report.accuracy = compare_results(*report.reference, *report.stochastic);
    char line[160];
    std::snprintf(line, sizeof line, "rms=%.6f f1_nomatch=%.6f\n", report.accuracy->rms_error,
                  report.accuracy->f1_nomatch);
    log << line;
  }

  // Every result is computed before the first file is written.
  DisparityImage mask_source;
  if (report.reference) {
    const DisparityImage img = disparity_image(*report.reference);
    const auto path = with_suffix(config.output_prefix, "_reference.pgm");
    save_pgm(path, img.image);
    report.written.push_back(path);
    mask_source = img;
    if (config.write_dumps) {
      const auto dump_path = with_suffix(config.output_prefix, "_reference.sbmd");
      save_dump(dump_path, *report.reference);
      report.written.push_back(dump_path);
    }
  }
  if (report.stochastic) {
    const DisparityImage img = disparity_image(*report.stochastic);
    const auto path = with_suffix(config.output_prefix, "_stochastic.pgm");
    save_pgm(path, img.image);
    report.written.push_back(path);
    if (!report.reference) mask_source = img;
    if (config.write_dumps) {
      const auto dump_path = with_suffix(config.output_prefix, "_stochastic.sbmd");
      save_dump(dump_path, *report.stochastic);
      report.written.push_back(dump_path);
    }
    const auto stats_path = with_suffix(config.output_prefix, "_cycles.csv");
    std::ofstream stats(stats_path, std::ios::trunc);
    char line[200];
    std::snprintf(line, sizeof line, "n_max,pixels,timeouts,cycles_mean,cycles_sd\n%u,%zu,%zu,%.6f,%.6f\n",
                  config.n_max, report.cycles->pixels, report.cycles->timeouts, report.cycles->mean,
                  report.cycles->sd);
    stats << line;
    if (!stats) throw ImageError(ImageErrorCode::kWriteFailed, "cannot write " + stats_path.string());
    report.written.push_back(stats_path);
  }
  const auto valid_path = with_suffix(config.output_prefix, "_valid.pgm");
  save_pgm(valid_path, mask_source.valid);
  report.written.push_back(valid_path);
  return report;
}

PipelineReport run_pipeline(const RunConfig& config, std::ostream& log) {
  const GrayImage left = load_image(config.left_path);
  const GrayImage right = load_image(config.right_path);
  return process_pair(left, right, config, log);
}

}  // namespace sbm
