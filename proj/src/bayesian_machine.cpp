#include "sbm/bayesian_machine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sbm {

void FusionSpec::validate() const {
  if (prior.empty()) throw std::invalid_argument("FusionSpec: M must be positive");
  for (double p : prior) check_probability(p, "FusionSpec prior");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].size() != prior.size()) {
      throw std::invalid_argument("FusionSpec: term " + std::to_string(i) + " has width " +
                                  std::to_string(terms[i].size()) + ", expected " +
                                  std::to_string(prior.size()));
    }
    for (double p : terms[i]) check_probability(p, "FusionSpec term");
  }
  if (!bus_constants.empty()) {
    if (bus_constants.size() != terms.size() + 1) {
      throw std::invalid_argument("FusionSpec: need N + 1 bus constants");
    }
    for (double c : bus_constants) {
      if (!(c > 0.0)) throw std::invalid_argument("FusionSpec: bus constants must be positive");
    }
  }
}

std::vector<double> FusionSpec::channel_products() const {
  std::vector<double> out(prior);
  for (const auto& row : terms) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= row[j];
  }
  return out;
}

double FusionSpec::output_bus_constant() const {
  double c = 1.0;
  for (double v : bus_constants) c *= v;
  return c;
}

bool FusionSpec::prior_is_constant_one() const noexcept {
  return std::all_of(prior.begin(), prior.end(), [](double p) { return p == 1.0; });
}

FusionSpec make_uniform_prior_spec(std::vector<std::vector<double>> terms) {
  if (terms.empty()) throw std::invalid_argument("make_uniform_prior_spec: no terms");
  FusionSpec spec;
  const std::size_t width = terms.front().size();
  spec.prior.assign(width, 1.0);
  spec.bus_constants.assign(terms.size() + 1, 1.0);
  spec.bus_constants[0] = static_cast<double>(width);
  spec.terms = std::move(terms);
  spec.validate();
  return spec;
}

BayesianMachine::BayesianMachine(FusionSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)),
      width_(spec_.width()),
      terms_(spec_.term_count()),
      prior_random_(!spec_.prior_is_constant_one()) {
  spec_.validate();
  // Source s gets sub-seed derive_seed(seed, s); term sources first, then prior.
  term_sources_.reserve(width_ * terms_);
  for (std::size_t j = 0; j < width_; ++j) {
    for (std::size_t i = 0; i < terms_; ++i) {
      term_sources_.emplace_back(spec_.terms[i][j], derive_seed(seed, j * terms_ + i));
    }
  }
  if (prior_random_) {
    prior_sources_.reserve(width_);
    for (std::size_t j = 0; j < width_; ++j) {
      prior_sources_.emplace_back(spec_.prior[j], derive_seed(seed, width_ * terms_ + j));
    }
  }
}

void BayesianMachine::step(std::span<std::uint8_t> out) noexcept {
  for (std::size_t j = 0; j < width_; ++j) {
    bool bit = prior_random_ ? prior_sources_[j].next() : true;
    BitSource* row = term_sources_.data() + j * terms_;
    for (std::size_t i = 0; bit && i < terms_; ++i) bit = row[i].next();
    out[j] = bit ? 1 : 0;
  }
}

std::vector<std::uint64_t> BayesianMachine::free_run(std::uint64_t cycles) {
  std::vector<std::uint64_t> ones(width_, 0);
  std::vector<std::uint8_t> bits(width_);
  for (std::uint64_t c = 0; c < cycles; ++c) {
    step(bits);
    for (std::size_t j = 0; j < width_; ++j) ones[j] += bits[j];
  }
  return ones;
}

BayesianMachine build_machine(const FusionSpec& spec, std::uint64_t seed) {
  return BayesianMachine(spec, seed);
}

MachineResult run_machine(BayesianMachine& machine, std::uint32_t n_max, std::uint64_t max_cycles) {
  CounterBank bank(machine.width(), n_max);
  RunOutcome outcome = run_until_overflow(machine, bank, max_cycles);
  MachineResult result;
  result.winner = outcome.winner;
  result.cycles = outcome.cycles;
  result.n_max = n_max;
  result.readout = partial_readout(outcome);
  result.counts = std::move(outcome.counts);
  return result;
}

std::optional<std::size_t> map_estimate(const MachineResult& result) { return result.winner; }

}  // namespace sbm
