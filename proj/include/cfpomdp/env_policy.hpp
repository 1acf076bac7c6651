#pragma once

#include <compare>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

struct TransitionKey {
  SymbolId state;
  SymbolId action;
  int turn;  // 1..m
  friend auto operator<=>(const TransitionKey&, const TransitionKey&) = default;
};

struct ObservationKey {
  SymbolId state;
  int turn;  // 0..m
  friend auto operator<=>(const ObservationKey&, const ObservationKey&) = default;
};

/// Deterministic resolution of an environment's randomness for `horizon`
/// turns: the initial state, the successor of every (state, action, turn)
/// and the observation of every (state, turn).
///
/// Only the entries reachable from init_state under the policy's own
/// transition choices are stored; the remaining factors of the product
/// distribution are summed out.
struct EnvironmentPolicy {
  SymbolId init_state = 0;
  std::map<TransitionKey, SymbolId> trans_choice;
  std::map<ObservationKey, SymbolId> obs_choice;
  int horizon = 0;

  friend auto operator<=>(const EnvironmentPolicy&, const EnvironmentPolicy&) = default;
};

struct WeightedEnvPolicy {
  EnvironmentPolicy policy;
  Rat prob;
};

/// All reduced environment policies of nonzero probability for horizon m,
/// in a fixed canonical order. Probabilities sum to 1. Requires m >= 1.
std::vector<WeightedEnvPolicy> enumerate_support(const Pomdp& p, int m);

/// Product probability over the recorded entries of ep.
Rat env_policy_prob(const Pomdp& p, const EnvironmentPolicy& ep);

/// The unique length-horizon history produced by ep and pi.
History rollout(const Pomdp& p, const EnvironmentPolicy& ep, const DeterministicPolicy& pi);

/// mu(h | ep, pi): product of pi's action probabilities along h when h is
/// consistent with ep's evolution, zero otherwise.
Rat history_prob_given_ep(const Pomdp& p, const History& h, const EnvironmentPolicy& ep,
                          const StochasticPolicy& pi);

/// mu(ep | h) over the support of enumerate_support(p, m), in that order.
/// All zero when h is impossible.
std::vector<WeightedEnvPolicy> env_policy_posterior(const Pomdp& p, const History& h,
                                                    const StochasticPolicy& pi, int m);

/// The map from deterministic policies to length-m histories induced by a
/// fixed deterministic resolution of the environment.
///
/// Stored as the observation seen after every action sequence of length
/// 0..m. Two resolutions induce the same policy-to-history map exactly when
/// these response tables coincide, because every action sequence is played
/// by some deterministic policy. tabulate() gives the policy-keyed view.
class BehaviorMap {
 public:
  BehaviorMap() = default;
  BehaviorMap(int num_actions, int horizon, std::vector<SymbolId> responses);

  [[nodiscard]] int num_actions() const { return num_actions_; }
  [[nodiscard]] int horizon() const { return horizon_; }
  [[nodiscard]] const std::vector<SymbolId>& responses() const { return responses_; }

  /// Observation after playing `actions` (length <= horizon).
  [[nodiscard]] SymbolId response(std::span<const SymbolId> actions) const;

  /// f(pi): the length-horizon history generated by pi.
  [[nodiscard]] History apply(const DeterministicPolicy& pi) const;

  [[nodiscard]] std::vector<std::pair<DeterministicPolicy, History>> tabulate(
      std::span<const DeterministicPolicy> policies) const;

  /// Histories produced by the |A|^m open-loop action sequences, in
  /// odometer order over declared actions.
  [[nodiscard]] std::vector<History> open_loop_histories() const;

  friend auto operator<=>(const BehaviorMap&, const BehaviorMap&) = default;

 private:
  int num_actions_ = 0;
  int horizon_ = 0;
  std::vector<SymbolId> responses_;
};

/// Number of action sequences of length 0..m, i.e. BehaviorMap table size.
std::size_t response_table_size(int num_actions, int m);

BehaviorMap behavior_map(const Pomdp& p, const EnvironmentPolicy& ep, int m);

enum class CountConvention { full, transition_only };

/// |Pi_mu^m| without support reduction.
/// full:            |S| * |S|^(|S||A|m) * |O|^(|S|(m+1))
/// transition_only: |S| * |S|^(|S||A|m)
BigInt count_env_policies(const Pomdp& p, int m, CountConvention convention);

}  // namespace cfpomdp
