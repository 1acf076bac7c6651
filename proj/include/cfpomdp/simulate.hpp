#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

struct JointFrequency {
  std::vector<History> histories;  // one per agent
  std::uint64_t count = 0;
  Rat exact;                       // collection_prob of the joint outcome
  [[nodiscard]] double frequency(std::uint64_t episodes) const;
  /// Standard error of the empirical frequency under the exact probability.
  [[nodiscard]] double std_error(std::uint64_t episodes) const;
};

struct SimulationReport {
  std::uint64_t episodes = 0;
  std::uint64_t seed = 0;
  /// Every joint outcome of nonzero exact probability, sorted.
  std::vector<JointFrequency> rows;

  /// Empirical frequency of a joint outcome; 0 when never observed.
  [[nodiscard]] double frequency_of(const std::vector<History>& histories) const;
};

/// Monte Carlo cross-check: each episode samples one environment policy and
/// rolls every agent's policy through it. Deterministic given the seed.
SimulationReport simulate(const Pomdp& p, int m, std::span<const DeterministicPolicy> agents,
                          std::uint64_t episodes, std::uint64_t seed);

}  // namespace cfpomdp
