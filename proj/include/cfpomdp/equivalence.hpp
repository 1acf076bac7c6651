#pragma once

#include <map>
#include <variant>
#include <vector>

#include "cfpomdp/env_policy.hpp"
#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

struct QueryPair {
  History history;
  StochasticPolicy policy;
};

/// (h_i, pi_i)_{i <= n}: agents sharing one environment policy.
using CollectionQuery = std::vector<QueryPair>;

/// Conditional counterexample: mu1(h_long | h_short, pi) != mu2(h_long | h_short, pi).
struct ConditionalWitness {
  History h_short;
  History h_long;
  DeterministicPolicy policy;
  Rat left;
  Rat right;
};

/// Collection of deterministic (history, policy) pairs whose joint
/// probabilities differ between the two environments.
struct CollectionWitness {
  std::vector<std::pair<History, DeterministicPolicy>> pairs;
  Rat left;
  Rat right;

  [[nodiscard]] CollectionQuery query() const;
};

/// Witness histories are expressed in the first environment's alphabet order.
struct Verdict {
  bool equivalent = true;
  std::variant<std::monostate, ConditionalWitness, CollectionWitness> witness;
};

/// m-equivalence. Throws InputError for dissimilar environments.
Verdict check_equiv(const Pomdp& p1, const Pomdp& p2, int m);

/// Joint probability of the collection under a shared environment policy,
/// summed over enumerate_support(p, m).
Rat collection_prob(const Pomdp& p, const CollectionQuery& q, int m);

/// Push-forward of the environment-policy distribution through behavior_map.
std::map<BehaviorMap, Rat> behavior_distribution(const Pomdp& p, int m);

/// m-counterfactual equivalence, decided by comparing behavior
/// distributions. Throws InputError for dissimilar environments.
Verdict check_cf_equiv(const Pomdp& p1, const Pomdp& p2, int m);

/// Deterministic policy that plays h's actions along h and is undefined
/// elsewhere.
DeterministicPolicy policy_along(const History& h);

}  // namespace cfpomdp
