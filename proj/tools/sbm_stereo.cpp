// sbm-stereo: stochastic Bayesian stereo disparity from the command line.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or
// configuration, 3 timed-out pixels above the allowed fraction.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbm/dump.hpp"
#include "sbm/evaluation.hpp"
#include "sbm/pgm.hpp"
#include "sbm/pipeline.hpp"
#include "sbm/synthetic.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTimeouts = 3;

void add_model_options(CLI::App* cmd, sbm::ModelParams& p) {
  cmd->add_option("--d-max", p.d_max, "Largest disparity searched")->capture_default_str();
  cmd->add_option("--p0", p.p0, "Likelihood floor")->capture_default_str();
  cmd->add_option("--sigma-m", p.sigma_mean, "Mean-feature sigma")->capture_default_str();
  cmd->add_option("--sigma-gh", p.sigma_grad_h, "Horizontal-gradient sigma")->capture_default_str();
  cmd->add_option("--sigma-gv", p.sigma_grad_v, "Vertical-gradient sigma")->capture_default_str();
  cmd->add_option("--p-nm0", p.p_nm0, "No-match floor")->capture_default_str();
  cmd->add_option("--sigma-nm", p.sigma_nm, "No-match gradient sigma")->capture_default_str();
}

std::optional<sbm::Region> to_region(const std::vector<std::size_t>& crop) {
  if (crop.empty()) return std::nullopt;
  if (crop.size() != 4) throw sbm::ConfigError("--crop expects x,y,width,height");
  return sbm::Region{crop[0], crop[1], crop[2], crop[3]};
}

int run_estimate(const sbm::HardwareInputs& in) {
  const sbm::HardwareEstimate est = sbm::hardware_estimate(in);
  std::printf("generators: %zu\n", est.generators);
  std::printf("power_mw: %.6f\n", est.power_w * 1e3);
  std::printf("valid_pixels: %zu\n", est.valid_pixels);
  std::printf("cycles_per_pixel: %.6f\n", est.cycles_per_pixel);
  std::printf("cycles_per_image: %.2f\n", est.cycles_per_image);
  std::printf("frames_per_second: %.4f\n", est.frames_per_second);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Bayesian machine for binocular disparity"};
  app.require_subcommand(1);

  // disparity
  sbm::RunConfig run;
  std::string mode = "both";
  std::vector<std::size_t> crop;
  auto* disparity = app.add_subcommand("disparity", "Compute disparity images for a rectified pair");
  disparity->add_option("--left", run.left_path, "Left image (PGM/PPM)")->required();
  disparity->add_option("--right", run.right_path, "Right image (PGM/PPM)")->required();
  disparity->add_option("--mode", mode, "reference | stochastic | both")->capture_default_str();
  disparity->add_option("--n-max", run.n_max, "Counter maximum")->capture_default_str();
  disparity->add_option("--seed", run.seed, "Master seed")->capture_default_str();
  disparity->add_option("-o,--output", run.output_prefix, "Output path prefix")->capture_default_str();
  disparity->add_flag("--dump", run.write_dumps, "Also write per-pixel distribution dumps");
  disparity->add_option("--crop", crop, "Feature-map rectangle x,y,width,height")->delimiter(',');
  disparity->add_option("--max-cycles", run.max_cycles, "Per-pixel cycle limit")->capture_default_str();
  disparity->add_option("-j,--workers", run.workers, "Worker threads (0 = all cores)")->capture_default_str();
  disparity->add_option("--timeout-limit", run.timeout_fraction_limit,
                        "Largest tolerated fraction of timed-out pixels")
      ->capture_default_str();
  add_model_options(disparity, run.params);

  // sweep
  std::filesystem::path sweep_left, sweep_right, sweep_out;
  sbm::ModelParams sweep_params;
  sbm::SweepOptions sweep;
  std::vector<std::size_t> sweep_crop;
  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy and cycles over counter maxima");
  sweep_cmd->add_option("--left", sweep_left, "Left image")->required();
  sweep_cmd->add_option("--right", sweep_right, "Right image")->required();
  sweep_cmd->add_option("--n-max", sweep.n_max_values, "Counter maxima")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--seeds", sweep.seeds, "Master seeds")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--crop", sweep_crop, "Feature-map rectangle x,y,width,height")->delimiter(',');
  sweep_cmd->add_option("--max-cycles", sweep.max_cycles, "Per-pixel cycle limit")->capture_default_str();
  sweep_cmd->add_option("-j,--workers", sweep.workers, "Worker threads (0 = all cores)")->capture_default_str();
  sweep_cmd->add_option("-o,--output", sweep_out, "CSV path (default: standard output)");
  add_model_options(sweep_cmd, sweep_params);

  // estimate
  sbm::HardwareInputs hw;
  hw.mean_cycles_per_pixel = 27.97;
  double clock_mhz = 500.0;
  double gen_uw = 50.0;
  auto* estimate = app.add_subcommand("estimate", "Generator count, power and throughput");
  estimate->add_option("--channels", hw.channels, "Bus width M")->capture_default_str();
  estimate->add_option("--terms", hw.terms, "Data terms N")->capture_default_str();
  estimate->add_option("--cycles", hw.mean_cycles_per_pixel, "Mean cycles per pixel")->capture_default_str();
  estimate->add_option("--width", hw.image_width, "Image width")->capture_default_str();
  estimate->add_option("--height", hw.image_height, "Image height")->capture_default_str();
  estimate->add_option("--d-max", hw.d_max, "Largest disparity")->capture_default_str();
  estimate->add_option("--clock-mhz", clock_mhz, "Generator clock")->capture_default_str();
  estimate->add_option("--generator-uw", gen_uw, "Power per generator, microwatts")->capture_default_str();

  // compare
  std::filesystem::path cmp_ref, cmp_stoch;
  auto* compare = app.add_subcommand("compare", "RMS and no-match F1 between two dumps");
  compare->add_option("--reference", cmp_ref, "Reference dump")->required();
  compare->add_option("--stochastic", cmp_stoch, "Stochastic dump")->required();

  // synth
  std::string kind = "natural";
  std::filesystem::path synth_out = "scene";
  sbm::SceneOptions scene;
  std::uint32_t shift = 12;
  auto* synth = app.add_subcommand("synth", "Write a synthetic rectified pair");
  synth->add_option("--kind", kind, "natural | planted")->capture_default_str();
  synth->add_option("--width", scene.width)->capture_default_str();
  synth->add_option("--height", scene.height)->capture_default_str();
  synth->add_option("--seed", scene.seed)->capture_default_str();
  synth->add_option("--shift", shift, "Uniform disparity of the planted pair")->capture_default_str();
  synth->add_option("--noise", scene.noise_sigma, "Sensor noise sigma")->capture_default_str();
  synth->add_option("--gain", scene.right_gain, "Right-camera gain")->capture_default_str();
  synth->add_option("--offset", scene.right_offset, "Right-camera offset")->capture_default_str();
  synth->add_option("--contrast", scene.texture_contrast, "Texture amplitude")->capture_default_str();
  synth->add_option("--cell", scene.texture_cell, "Coarsest texture cell, pixels")->capture_default_str();
  synth->add_option("-o,--output", synth_out, "Output prefix")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*disparity) {
      run.mode = sbm::parse_run_mode(mode);
      run.crop = to_region(crop);
      const sbm::PipelineReport report = sbm::run_pipeline(run, std::cerr);
      for (const auto& p : report.written) std::cerr << "wrote " << p.string() << "\n";
      return report.timeout_limit_exceeded ? kExitTimeouts : 0;
    }
    if (*sweep_cmd) {
      sweep.region = to_region(sweep_crop);
      sweep_params.validate();
      const sbm::LikelihoodVolume volume(sbm::load_image(sweep_left), sbm::load_image(sweep_right),
                                         sweep_params);
      const auto rows = sbm::sweep_counter_sizes(volume, sweep);
      std::ostringstream csv;
      sbm::write_sweep_csv(csv, rows);
      if (sweep_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(sweep_out, std::ios::trunc);
        out << csv.str();
        if (!out) throw sbm::ImageError(sbm::ImageErrorCode::kWriteFailed, "cannot write " + sweep_out.string());
      }
      return 0;
    }
    if (*estimate) {
      hw.clock_hz = clock_mhz * 1e6;
      hw.generator_power_w = gen_uw * 1e-6;
      return run_estimate(hw);
    }
    if (*compare) {
      const sbm::DisparityResult ref = sbm::load_dump(cmp_ref);
      const sbm::DisparityResult stoch = sbm::load_dump(cmp_stoch);
      const sbm::AccuracyReport acc = sbm::compare_results(ref, stoch);
      std::printf("rms,f1,matched_both,nomatch_reference,nomatch_stochastic,timeouts\n");
      std::printf("%.6f,%.6f,%zu,%zu,%zu,%zu\n", acc.rms_error, acc.f1_nomatch, acc.matched_both,
                  acc.nomatch_reference, acc.nomatch_stochastic, acc.timeouts);
      return 0;
    }
    if (*synth) {
      sbm::StereoPair pair;
      if (kind == "natural") {
        pair = sbm::natural_scene_pair(scene);
      } else if (kind == "planted") {
        pair = sbm::planted_shift_pair(scene.width, scene.height, shift, scene.seed);
      } else {
        throw sbm::ConfigError("unknown scene kind '" + kind + "'");
      }
      sbm::save_pgm(synth_out.string() + "_left.pgm", pair.left);
      sbm::save_pgm(synth_out.string() + "_right.pgm", pair.right);
      return 0;
    }
  } catch (const sbm::ImageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const sbm::DumpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
