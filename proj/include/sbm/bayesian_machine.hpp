#pragma once

// Naive Bayesian fusion on stochastic buses: an M x N matrix of AND-gate
// product modules fed by a prior bus, read out by a bank of M counters.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sbm/stochastic_core.hpp"

namespace sbm {

/// Description of one fusion problem over a searched variable of cardinality M
/// with N data terms. Channel j of the output bus carries
/// prior[j] * terms[0][j] * ... * terms[N-1][j].
struct FusionSpec {
  std::vector<double> prior;               // M p-values, bus constant C_0
  std::vector<std::vector<double>> terms;  // N rows of M p-values, p_{i,j} = C_i P(K_i | S_j)
  std::vector<double> bus_constants;       // C_0 .. C_N; empty means all 1

  std::size_t width() const noexcept { return prior.size(); }
  std::size_t term_count() const noexcept { return terms.size(); }

  /// Throws std::invalid_argument on shape errors or p-values outside [0, 1].
  void validate() const;

  /// Exact per-channel product of the prior and every term.
  std::vector<double> channel_products() const;

  /// prod_i C_i.
  double output_bus_constant() const;

  bool prior_is_constant_one() const noexcept;
};

/// Uniform prior wired as constant-1 lines, C_0 = M, term constants 1.
FusionSpec make_uniform_prior_spec(std::vector<std::vector<double>> terms);

struct MachineResult {
  std::optional<std::size_t> winner;  // empty on timeout
  std::vector<std::uint32_t> counts;
  std::uint64_t cycles = 0;
  std::uint32_t n_max = 0;
  std::vector<double> readout;  // counts / n_max, partial when timed out

  bool timed_out() const noexcept { return !winner.has_value(); }
};

/// Runnable instance of a FusionSpec. Every product module owns its own
/// bit source; prior channels at p = 1 are constant lines with no source.
class BayesianMachine {
 public:
  BayesianMachine(FusionSpec spec, std::uint64_t seed);

  std::size_t width() const noexcept { return width_; }
  std::size_t term_count() const noexcept { return terms_; }
  const FusionSpec& spec() const noexcept { return spec_; }

  std::size_t term_source_count() const noexcept { return width_ * terms_; }
  std::size_t prior_source_count() const noexcept { return prior_random_ ? width_ : 0; }
  std::size_t source_count() const noexcept { return term_source_count() + prior_source_count(); }

  double output_bus_constant() const { return spec_.output_bus_constant(); }

  /// One clock cycle: out[j] = b_{j,0} & b_{j,1} & ... & b_{j,N}.
  /// Evaluation stops at the first 0 along a row; skipped sources are not
  /// clocked, which leaves every output bit's distribution unchanged.
  void step(std::span<std::uint8_t> out) noexcept;

  /// Clocks the machine for a fixed number of cycles with no counter stop
  /// and returns the number of 1s on each output channel.
  std::vector<std::uint64_t> free_run(std::uint64_t cycles);

 private:
  FusionSpec spec_;
  std::size_t width_;
  std::size_t terms_;
  bool prior_random_;
  std::vector<BitSource> prior_sources_;  // width_ entries, or empty
  std::vector<BitSource> term_sources_;   // row-major: [j * terms_ + i]
};

BayesianMachine build_machine(const FusionSpec& spec, std::uint64_t seed);

/// Runs until the first counter reaches n_max (or max_cycles elapse).
MachineResult run_machine(BayesianMachine& machine, std::uint32_t n_max,
                          std::uint64_t max_cycles = kDefaultMaxCycles);

/// Index of the first overflowing counter; empty for a timed-out result.
std::optional<std::size_t> map_estimate(const MachineResult& result);

}  // namespace sbm
