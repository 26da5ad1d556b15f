#include "sbm/stochastic_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace sbm {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": probability " + std::to_string(p) +
                                " outside [0, 1]");
  }
}

BitStream::BitStream(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

BitStream BitStream::from_string(std::string_view bits) {
  BitStream stream(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw std::invalid_argument("BitStream::from_string: expected only '0' and '1'");
    }
    stream.set(i, bits[i] == '1');
  }
  return stream;
}

void BitStream::set(std::size_t i, bool value) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

std::size_t BitStream::count_ones() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

double BitStream::rate() const noexcept {
  return length_ == 0 ? 0.0 : static_cast<double>(count_ones()) / static_cast<double>(length_);
}

std::string BitStream::to_string() const {
  std::string out(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

BitSource::BitSource(double p, std::uint64_t seed) : p_(p), rng_(seed) {
  check_probability(p, "BitSource");
}

BitStream emit_bits(BitSource& source, std::size_t n) {
  if (n == 0) throw std::invalid_argument("emit_bits: n must be positive");
  BitStream stream(n);
  auto words = stream.words();
  for (std::size_t i = 0; i < n; ++i) {
    if (source.next()) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return stream;
}

BitStream and_product(const BitStream& a, const BitStream& b) {
  if (a.size() != b.size()) throw std::invalid_argument("and_product: length mismatch");
  BitStream out(a.size());
  auto dst = out.words();
  auto lhs = a.words();
  auto rhs = b.words();
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] = lhs[w] & rhs[w];
  return out;
}

StochasticBus::StochasticBus(std::vector<double> p_values, double bus_constant, std::uint64_t seed)
    : bus_constant_(bus_constant) {
  if (p_values.empty()) throw std::invalid_argument("StochasticBus: zero width");
  if (!(bus_constant > 0.0)) throw std::invalid_argument("StochasticBus: bus constant must be positive");
  sources_.reserve(p_values.size());
  for (std::size_t j = 0; j < p_values.size(); ++j) {
    sources_.emplace_back(p_values[j], derive_seed(seed, j));
  }
}

StochasticBus StochasticBus::encode_max_normalized(std::span<const double> distribution,
                                                   std::uint64_t seed) {
  if (distribution.empty()) throw std::invalid_argument("encode_max_normalized: empty distribution");
  for (double v : distribution) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("encode_max_normalized: negative or non-finite probability");
    }
  }
  const double peak = *std::max_element(distribution.begin(), distribution.end());
  if (!(peak > 0.0)) throw std::invalid_argument("encode_max_normalized: all-zero distribution");
  std::vector<double> p(distribution.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::min(1.0, distribution[j] / peak);
  return StochasticBus(std::move(p), 1.0 / peak, seed);
}

std::vector<double> StochasticBus::p_values() const {
  std::vector<double> out;
  out.reserve(sources_.size());
  for (const auto& s : sources_) out.push_back(s.p());
  return out;
}

void StochasticBus::step(std::span<std::uint8_t> out) noexcept {
  for (std::size_t j = 0; j < sources_.size(); ++j) out[j] = sources_[j].next() ? 1 : 0;
}

CounterBank::CounterBank(std::size_t width, std::uint32_t n_max) : counts_(width, 0), n_max_(n_max) {
  if (width == 0) throw std::invalid_argument("CounterBank: zero width");
  if (n_max == 0) throw std::invalid_argument("CounterBank: n_max must be positive");
}

void CounterBank::reset() noexcept { std::fill(counts_.begin(), counts_.end(), 0U); }

std::vector<double> readout_distribution(std::span<const std::uint32_t> counts, std::uint32_t n_max) {
  if (n_max == 0) throw std::invalid_argument("readout_distribution: n_max must be positive");
  std::vector<double> out(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    out[j] = static_cast<double>(counts[j]) / static_cast<double>(n_max);
  }
  return out;
}

std::vector<double> readout_distribution(const RunOutcome& outcome) {
  if (outcome.timed_out()) {
    throw std::logic_error("readout_distribution: run timed out; use partial_readout");
  }
  return readout_distribution(outcome.counts, outcome.n_max);
}

std::vector<double> partial_readout(const RunOutcome& outcome) {
  return readout_distribution(outcome.counts, outcome.n_max);
}

}  // namespace sbm
