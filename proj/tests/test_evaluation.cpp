#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "sbm/evaluation.hpp"
#include "sbm/reference_engine.hpp"
#include "sbm/stochastic_core.hpp"
#include "sbm/stochastic_engine.hpp"
#include "sbm/synthetic.hpp"

using namespace sbm;

TEST_CASE("rms_distribution_error") {
  const std::vector<std::vector<double>> a{{1.0, 0.0}};
  const std::vector<std::vector<double>> b{{1.0, 1.0}};
  CHECK(rms_distribution_error(a, a) == 0.0);
  CHECK(rms_distribution_error(a, b) == doctest::Approx(std::sqrt(0.5)));
  CHECK(rms_distribution_error(a, b) == doctest::Approx(0.7071).epsilon(1e-4));
  const std::vector<std::vector<double>> empty;
  CHECK_THROWS_AS(rms_distribution_error(empty, empty), std::invalid_argument);
  const std::vector<std::vector<double>> c{{1.0}};
  CHECK_THROWS_AS(rms_distribution_error(a, c), std::invalid_argument);
  const std::vector<std::vector<double>> two{{1.0, 0.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(rms_distribution_error(a, two), std::invalid_argument);
}

TEST_CASE("rms error is larger at n_max = 1 than at n_max = 256") {
  const std::vector<double> p{1.0, 0.7, 0.4, 0.2};
  double err1 = 0;
  double err256 = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    for (std::uint32_t n_max : {1U, 256U}) {
      StochasticBus bus(p, 1.0, derive_seed(n_max, s));
      CounterBank bank(p.size(), n_max);
      const std::vector<std::vector<double>> got{readout_distribution(run_until_overflow(bus, bank))};
      const std::vector<std::vector<double>> want{p};
      (n_max == 1 ? err1 : err256) += rms_distribution_error(got, want);
    }
  }
  CHECK(err1 > err256);
}

TEST_CASE("f1_nomatch") {
  const std::vector<bool> a{true, false, true, false};
  CHECK(f1_nomatch(a, a) == 1.0);
  CHECK(f1_nomatch({true, true, false, false}, {false, false, true, true}) == 0.0);
  CHECK(f1_nomatch({false, false}, {false, false}) == 1.0);
  CHECK(f1_nomatch({false, false}, {true, false}) == 0.0);
  CHECK(f1_nomatch({true, false}, {false, false}) == 0.0);
  // Precision 0.8 and recall 0.8.
  std::vector<bool> truth(20, false);
  std::vector<bool> pred(20, false);
  for (int i = 0; i < 10; ++i) truth[i] = true;
  for (int i = 2; i < 12; ++i) pred[i] = true;  // 8 hits, 2 false alarms, 2 misses
  CHECK(f1_nomatch(truth, pred) == doctest::Approx(0.8));
  CHECK_THROWS_AS(f1_nomatch({true}, {true, false}), std::invalid_argument);
}

TEST_CASE("hardware estimate reproduces the published arithmetic") {
  HardwareInputs in;
  in.mean_cycles_per_pixel = 27.97;
  const HardwareEstimate e = hardware_estimate(in);
  CHECK(e.generators == 246);
  CHECK(e.power_w == doctest::Approx(12.3e-3).epsilon(1e-12));
  CHECK(e.power_w == doctest::Approx(e.generators * e.generator_power_w).epsilon(1e-15));
  CHECK(e.valid_pixels == 264656);
  CHECK(e.cycles_per_image == doctest::Approx(7402428.32).epsilon(1e-12));
  CHECK(e.frames_per_second == doctest::Approx(67.5454).epsilon(1e-5));
  CHECK(e.frames_per_second == doctest::Approx(e.clock_hz / e.cycles_per_image).epsilon(1e-15));
  HardwareInputs bad = in;
  bad.image_width = 0;
  CHECK_THROWS_AS(hardware_estimate(bad), std::invalid_argument);
  bad = in;
  bad.image_width = 84;  // no column survives x >= d_max
  CHECK_THROWS_AS(hardware_estimate(bad), std::invalid_argument);
}

TEST_CASE("spearman with ties") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{0.1, 0.2, 0.3, 0.4, 0.5};
  const std::vector<double> down{5, 4, 3, 2, 1};
  CHECK(spearman(x, up) == doctest::Approx(1.0));
  CHECK(spearman(x, down) == doctest::Approx(-1.0));
  const std::vector<double> tied{1, 1, 2, 3, 3};
  // Average ranks (1.5, 1.5, 3, 4.5, 4.5) against (1..5): rho = 0.9486833.
  CHECK(spearman(x, tied) == doctest::Approx(0.9486833).epsilon(1e-6));
  const std::vector<double> short_x{1};
  CHECK_THROWS_AS(spearman(short_x, short_x), std::invalid_argument);
}

TEST_CASE("linear fit") {
  const std::vector<double> x{1, 4, 16, 64};
  const std::vector<double> y{3, 9, 33, 129};  // y = 2 x + 1
  const LinearFit f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.max_relative_residual == doctest::Approx(0.0).epsilon(1e-9));
  const std::vector<double> bent{3, 9, 40, 129};
  CHECK(linear_fit(x, bent).r_squared < 1.0);
}

TEST_CASE("compare_results and cycle statistics") {
  DisparityResult ref(Region{0, 0, 4, 1}, 1, 0);
  DisparityResult sto(Region{0, 0, 4, 1}, 1, 4);
  // pixel 0: both matched; pixel 1: both no-match; pixel 2: ref no-match, sto timeout;
  // pixel 3: invalid.
  ref.pixels = {{PixelState::kMatched, 0, 0}, {PixelState::kNoMatch, 0, 0},
                {PixelState::kNoMatch, 0, 0}, {PixelState::kInvalid, 0, 0}};
  sto.pixels = {{PixelState::kMatched, 0, 4}, {PixelState::kNoMatch, 0, 6},
                {PixelState::kTimeout, 0, 20}, {PixelState::kInvalid, 0, 0}};
  ref.distributions = {1.0, 0.5, 0.1, 0, 0, 1, 0, 0, 1, 0, 0, 0};
  sto.distributions = {1.0, 0.25, 0.9, 0, 0, 1, 0, 0, 0, 0, 0, 0};
  const AccuracyReport acc = compare_results(ref, sto);
  CHECK(acc.matched_both == 1);
  // No-match entry excluded: sqrt(((1-1)^2 + (0.25-0.5)^2) / 2).
  CHECK(acc.rms_error == doctest::Approx(std::sqrt(0.0625 / 2)));
  CHECK(acc.nomatch_reference == 2);
  CHECK(acc.nomatch_stochastic == 1);
  CHECK(acc.timeouts == 1);
  CHECK(acc.invalid == 1);
  CHECK(acc.f1_nomatch == doctest::Approx(2.0 / 3.0));

  const CycleStats cs = cycle_statistics(sto);
  CHECK(cs.pixels == 3);
  CHECK(cs.timeouts == 1);
  CHECK(cs.mean == doctest::Approx(10.0));
  CHECK(cs.sd == doctest::Approx(std::sqrt((36.0 + 16.0 + 100.0) / 3.0)));

  DisparityResult other(Region{1, 0, 4, 1}, 1, 4);
  CHECK_THROWS_AS(compare_results(ref, other), std::invalid_argument);
}

TEST_CASE("sweep over counter sizes") {
  const StereoPair pair = planted_shift_pair(70, 14, 6, 8);
  ModelParams params;
  params.d_max = 16;
  const LikelihoodVolume vol(pair.left, pair.right, params);
  SweepOptions opt;
  opt.n_max_values = {1, 4, 16};
  opt.seeds = {1, 2};
  opt.workers = 2;
  const auto rows = sweep_counter_sizes(vol, opt);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].n_max == 1);
  CHECK(rows[0].cycles_mean < rows[1].cycles_mean);
  CHECK(rows[1].cycles_mean < rows[2].cycles_mean);
  for (const auto& r : rows) {
    CHECK(r.timeouts == 0);
    CHECK((r.f1 >= 0.0 && r.f1 <= 1.0));
  }
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  const std::string text = csv.str();
  CHECK(text.rfind("n_max,rms,f1,cycles_mean,cycles_sd,timeouts\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  // Repeating the sweep gives the identical table.
  std::ostringstream again;
  write_sweep_csv(again, sweep_counter_sizes(vol, opt));
  CHECK(again.str() == text);

  SweepOptions empty = opt;
  empty.n_max_values.clear();
  CHECK_THROWS_AS(sweep_counter_sizes(vol, empty), std::invalid_argument);
}
