#include "sbm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sbm/reference_engine.hpp"
#include "sbm/stochastic_engine.hpp"

namespace sbm {

double rms_distribution_error(std::span<const std::vector<double>> stochastic,
                              std::span<const std::vector<double>> reference) {
  if (stochastic.empty()) throw std::invalid_argument("rms_distribution_error: empty pixel set");
  if (stochastic.size() != reference.size()) {
    throw std::invalid_argument("rms_distribution_error: pixel count mismatch");
  }
  double sum = 0.0;
  std::size_t entries = 0;
  for (std::size_t i = 0; i < stochastic.size(); ++i) {
    if (stochastic[i].size() != reference[i].size()) {
      throw std::invalid_argument("rms_distribution_error: distribution length mismatch");
    }
    for (std::size_t j = 0; j < stochastic[i].size(); ++j) {
      const double diff = stochastic[i][j] - reference[i][j];
      sum += diff * diff;
    }
    entries += stochastic[i].size();
  }
  if (entries == 0) throw std::invalid_argument("rms_distribution_error: empty distributions");
  return std::sqrt(sum / static_cast<double>(entries));
}

double f1_nomatch(const std::vector<bool>& truth, const std::vector<bool>& predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("f1_nomatch: size mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] && predicted[i]) ++tp;
    else if (predicted[i]) ++fp;
    else if (truth[i]) ++fn;
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

AccuracyReport compare_results(const DisparityResult& reference, const DisparityResult& stochastic) {
  if (!(reference.region == stochastic.region) || reference.d_max != stochastic.d_max) {
    throw std::invalid_argument("compare_results: results cover different regions");
  }
  AccuracyReport report;
  const std::size_t n_disp = static_cast<std::size_t>(reference.d_max) + 1;
  std::vector<bool> truth, predicted;
  double sum = 0.0;
  for (std::size_t i = 0; i < reference.pixels.size(); ++i) {
    const PixelState rs = reference.pixels[i].state;
    const PixelState ss = stochastic.pixels[i].state;
    if (rs == PixelState::kInvalid || ss == PixelState::kInvalid) {
      ++report.invalid;
      continue;
    }
    if (ss == PixelState::kTimeout) ++report.timeouts;
    truth.push_back(rs == PixelState::kNoMatch);
    predicted.push_back(ss == PixelState::kNoMatch);
    report.nomatch_reference += rs == PixelState::kNoMatch;
    report.nomatch_stochastic += ss == PixelState::kNoMatch;
    if (rs == PixelState::kMatched && ss == PixelState::kMatched) {
      ++report.matched_both;
      auto a = reference.distribution(i);
      auto b = stochastic.distribution(i);
      for (std::size_t d = 0; d < n_disp; ++d) {
        const double diff = b[d] - a[d];
        sum += diff * diff;
      }
    }
  }
  report.rms_error = report.matched_both == 0
                         ? std::numeric_limits<double>::quiet_NaN()
                         : std::sqrt(sum / static_cast<double>(report.matched_both * n_disp));
  report.f1_nomatch = f1_nomatch(truth, predicted);
  return report;
}

CycleStats cycle_statistics(const DisparityResult& stochastic) {
  CycleStats stats;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& px : stochastic.pixels) {
    if (px.state == PixelState::kInvalid) continue;
    const double c = static_cast<double>(px.cycles);
    sum += c;
    sum_sq += c * c;
    ++stats.pixels;
    stats.timeouts += px.state == PixelState::kTimeout;
  }
  if (stats.pixels > 0) {
    const double n = static_cast<double>(stats.pixels);
    stats.mean = sum / n;
    stats.sd = std::sqrt(std::max(0.0, sum_sq / n - stats.mean * stats.mean));
  }
  return stats;
}

HardwareEstimate hardware_estimate(const HardwareInputs& in) {
  if (in.channels == 0 || in.terms == 0 || in.image_width == 0 || in.image_height == 0) {
    throw std::invalid_argument("hardware_estimate: dimensions must be positive");
  }
  if (!(in.mean_cycles_per_pixel > 0.0) || !(in.clock_hz > 0.0) || !(in.generator_power_w > 0.0)) {
    throw std::invalid_argument("hardware_estimate: rates must be positive");
  }
  if (in.image_width <= kKernelMargin + in.d_max || in.image_height <= kKernelMargin) {
    throw std::invalid_argument("hardware_estimate: image too small for the filters and d_max");
  }
  HardwareEstimate est;
  est.generators = in.channels * in.terms;
  est.power_w = static_cast<double>(est.generators) * in.generator_power_w;
  est.valid_pixels = (in.image_width - kKernelMargin - in.d_max) * (in.image_height - kKernelMargin);
  est.cycles_per_pixel = in.mean_cycles_per_pixel;
  est.cycles_per_image = static_cast<double>(est.valid_pixels) * in.mean_cycles_per_pixel;
  est.frames_per_second = in.clock_hz / est.cycles_per_image;
  est.clock_hz = in.clock_hz;
  est.generator_power_w = in.generator_power_w;
  return est;
}

std::vector<SweepRow> sweep_counter_sizes(const LikelihoodVolume& volume, const SweepOptions& options) {
  if (options.n_max_values.empty()) throw std::invalid_argument("sweep_counter_sizes: empty n_max list");
  if (options.seeds.empty()) throw std::invalid_argument("sweep_counter_sizes: no seeds");
  const DisparityResult reference = reference_infer(volume, options.region, options.workers);

  std::vector<SweepRow> rows;
  for (std::uint32_t n_max : options.n_max_values) {
    SweepRow row;
    row.n_max = n_max;
    double rms_sum = 0.0, f1_sum = 0.0, cyc_sum = 0.0, cyc_sq = 0.0;
    std::size_t rms_runs = 0, pixels = 0;
    for (std::uint64_t seed : options.seeds) {
      StochasticOptions so{n_max, seed, options.max_cycles, options.workers};
      const DisparityResult stoch = stochastic_infer(volume, so, options.region);
      const AccuracyReport acc = compare_results(reference, stoch);
      if (!std::isnan(acc.rms_error)) {
        rms_sum += acc.rms_error;
        ++rms_runs;
      }
      f1_sum += acc.f1_nomatch;
      const CycleStats cs = cycle_statistics(stoch);
      const double n = static_cast<double>(cs.pixels);
      cyc_sum += cs.mean * n;
      cyc_sq += (cs.sd * cs.sd + cs.mean * cs.mean) * n;
      pixels += cs.pixels;
      row.timeouts += cs.timeouts;
    }
    row.rms = rms_runs ? rms_sum / static_cast<double>(rms_runs) : std::numeric_limits<double>::quiet_NaN();
    row.f1 = f1_sum / static_cast<double>(options.seeds.size());
    if (pixels > 0) {
      row.cycles_mean = cyc_sum / static_cast<double>(pixels);
      row.cycles_sd = std::sqrt(std::max(0.0, cyc_sq / static_cast<double>(pixels) -
                                                  row.cycles_mean * row.cycles_mean));
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "n_max,rms,f1,cycles_mean,cycles_sd,timeouts\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%u,%.6f,%.6f,%.6f,%.6f,%zu\n", r.n_max, r.rms, r.f1, r.cycles_mean,
                  r.cycles_sd, r.timeouts);
    out << buf;
  }
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length series");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need two equal-length series");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x has no spread");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double predicted = fit.intercept + fit.slope * x[i];
    const double res = y[i] - predicted;
    ss_res += res * res;
    if (predicted != 0.0) {
      fit.max_relative_residual = std::max(fit.max_relative_residual, std::abs(res) / std::abs(predicted));
    }
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace sbm
