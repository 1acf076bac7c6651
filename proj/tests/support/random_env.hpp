#pragma once

#include <cstdint>
#include <random>

#include "cfpomdp/pomdp.hpp"

namespace cfpomdp::testing {

struct RandomEnvOptions {
  int max_states = 4;
  int max_actions = 3;
  int max_observations = 3;
  int horizon = 2;
  /// Upper bound on the number of support environment policies, estimated
  /// as the product of support sizes over every entry reachable within the
  /// horizon. Environments above it are redrawn.
  std::uint64_t policy_budget = 4096;
  /// Probability that a transition or observation row is stochastic.
  double branching = 0.35;
};

/// Fresh random environment with states q*, actions b*, observations x*.
Pomdp random_env(std::mt19937_64& rng, const RandomEnvOptions& options = {});

/// Random environment sharing `like`'s actions and observations.
Pomdp random_env_like(std::mt19937_64& rng, const Pomdp& like, const RandomEnvOptions& options = {});

/// Same environment with its states listed in a shuffled order.
Pomdp shuffle_states(std::mt19937_64& rng, const Pomdp& p);

/// Random deterministic policy on the given decision points.
DeterministicPolicy random_det_policy(std::mt19937_64& rng, const Pomdp& p, int m);

/// Random stochastic policy on the given decision points.
StochasticPolicy random_stochastic_policy(std::mt19937_64& rng, const Pomdp& p, int m);

/// Random distribution with the given support size over [0, n).
FiniteDist random_dist(std::mt19937_64& rng, int n, int support);

}  // namespace cfpomdp::testing
