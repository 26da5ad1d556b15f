#pragma once

// Bitstream-level primitives: Bernoulli bit sources, AND-gate products,
// stochastic buses and saturating counter banks with overflow readout.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sbm/rng.hpp"

namespace sbm {

inline constexpr std::uint64_t kDefaultMaxCycles = 10'000'000;

/// Throws std::invalid_argument unless 0 <= p <= 1 (NaN rejected).
void check_probability(double p, const char* what);

/// A finite bit sequence packed into 64-bit words, bit i at word i/64, position i%64.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::size_t length);

  static BitStream from_string(std::string_view bits);

  std::size_t size() const noexcept { return length_; }
  bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value) noexcept;

  std::size_t count_ones() const noexcept;
  double rate() const noexcept;
  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  friend bool operator==(const BitStream&, const BitStream&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Random binary signal whose bits are i.i.d. Bernoulli(p).
/// Each bit compares a fresh 53-bit uniform variate against p, so p = 1 and
/// p = 0 give constant lines exactly.
class BitSource {
 public:
  BitSource(double p, std::uint64_t seed);

  double p() const noexcept { return p_; }

  bool next() noexcept {
    if (p_ >= 1.0) return true;
    if (p_ <= 0.0) return false;
    return rng_.uniform() < p_;
  }

 private:
  double p_;
  Xoshiro256 rng_;
};

BitStream emit_bits(BitSource& source, std::size_t n);

/// Bitwise conjunction. Encodes p1*p2 when the inputs are independent.
BitStream and_product(const BitStream& a, const BitStream& b);

/// Anything that produces one bit per channel per clock cycle.
template <typename T>
concept ClockedBus = requires(T bus, std::span<std::uint8_t> out) {
  { std::as_const(bus).width() } -> std::convertible_to<std::size_t>;
  bus.step(out);
};

/// M independent bit sources encoding C * P(V = V_j) on channel j.
class StochasticBus {
 public:
  /// Channel p-values given directly; bus_constant is bookkeeping only.
  StochasticBus(std::vector<double> p_values, double bus_constant, std::uint64_t seed);

  /// Encodes a distribution with C = 1 / max_j P_j so the mode maps to p = 1.
  static StochasticBus encode_max_normalized(std::span<const double> distribution,
                                             std::uint64_t seed);

  std::size_t width() const noexcept { return sources_.size(); }
  double bus_constant() const noexcept { return bus_constant_; }
  std::vector<double> p_values() const;

  void step(std::span<std::uint8_t> out) noexcept;

 private:
  std::vector<BitSource> sources_;
  double bus_constant_;
};

/// M saturating counters sharing a maximum value.
class CounterBank {
 public:
  CounterBank(std::size_t width, std::uint32_t n_max);

  std::size_t width() const noexcept { return counts_.size(); }
  std::uint32_t n_max() const noexcept { return n_max_; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }

  /// Increments counter j unless saturated; returns true once it holds n_max.
  bool increment(std::size_t j) noexcept {
    if (counts_[j] < n_max_) ++counts_[j];
    return counts_[j] == n_max_;
  }
  void reset() noexcept;

 private:
  std::vector<std::uint32_t> counts_;
  std::uint32_t n_max_;
};

struct RunOutcome {
  std::optional<std::size_t> winner;  // empty on timeout
  std::vector<std::uint32_t> counts;
  std::uint64_t cycles = 0;
  std::uint32_t n_max = 0;

  bool timed_out() const noexcept { return !winner.has_value(); }
};

/// Clocks the bus into the counters until some counter reaches n_max.
/// All channels are counted for the whole stopping cycle; among counters
/// reaching n_max on that cycle the lowest index wins.
template <ClockedBus Bus>
RunOutcome run_until_overflow(Bus& bus, CounterBank& bank,
                              std::uint64_t max_cycles = kDefaultMaxCycles) {
  const std::size_t width = bus.width();
  if (width == 0) throw std::invalid_argument("run_until_overflow: zero-width bus");
  if (bank.width() != width) throw std::invalid_argument("run_until_overflow: width mismatch");
  if (max_cycles == 0) throw std::invalid_argument("run_until_overflow: max_cycles must be positive");
  bank.reset();

  std::vector<std::uint8_t> bits(width);
  RunOutcome outcome;
  outcome.n_max = bank.n_max();
  for (std::uint64_t cycle = 1; cycle <= max_cycles; ++cycle) {
    bus.step(bits);
    std::optional<std::size_t> first;
    for (std::size_t j = 0; j < width; ++j) {
      if (bits[j] && bank.increment(j) && !first) first = j;
    }
    if (first) {
      outcome.winner = first;
      outcome.cycles = cycle;
      break;
    }
  }
  if (!outcome.winner) outcome.cycles = max_cycles;
  outcome.counts.assign(bank.counts().begin(), bank.counts().end());
  return outcome;
}

/// n_j / n_max for a completed run; throws std::logic_error on a timeout.
std::vector<double> readout_distribution(const RunOutcome& outcome);

/// Same division applied to a timed-out run's partial counts.
std::vector<double> partial_readout(const RunOutcome& outcome);

std::vector<double> readout_distribution(std::span<const std::uint32_t> counts, std::uint32_t n_max);

}  // namespace sbm
