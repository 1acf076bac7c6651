#pragma once

#include <cstddef>
#include <vector>

#include "cfpomdp/env_policy.hpp"
#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

/// A state of the determinized environment: a source state, the
/// environment policy resolving all randomness, and the turn counter.
struct DetState {
  SymbolId base_state;
  std::size_t env_policy;  // index into Determinization::support
  int turn;
};

struct Determinization {
  Pomdp env;
  std::vector<DetState> states;  // parallel to env.states
  std::vector<WeightedEnvPolicy> support;
};

/// True iff every transition row and every observation row is a point mass.
/// The initial distribution is unconstrained.
bool is_deterministic(const Pomdp& p);

/// Deterministic environment that is m-counterfactually equivalent to p.
/// Only states reachable under some support environment policy are built;
/// turn-m states self-loop under every action.
Determinization determinize_with_states(const Pomdp& p, int m);
Pomdp determinize(const Pomdp& p, int m);

/// f_s for a deterministic environment. Throws PreconditionError otherwise.
BehaviorMap initial_behavior_map(const Pomdp& p, SymbolId s, int m);

struct BehaviorCell {
  BehaviorMap map;
  std::vector<SymbolId> states;  // ascending ids
  Rat mass;
};

/// Initial-support states grouped by equal behavior maps, ordered by their
/// least member.
struct BehaviorPartition {
  std::vector<BehaviorCell> cells;
};

BehaviorPartition behavior_partition(const Pomdp& p, int m);

/// Keeps one initial state (the least id) per behavior cell with the cell's
/// whole mass, merges absorbing states that share an observation, and drops
/// unreachable states.
Pomdp minimize(const Pomdp& p, int m);

}  // namespace cfpomdp
