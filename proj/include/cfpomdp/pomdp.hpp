#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfpomdp/rational.hpp"

namespace cfpomdp {

/// Index into one of an environment's ordered alphabets (states, actions or
/// observations). Indices follow declaration order.
using SymbolId = int;

struct Outcome {
  SymbolId id;
  Rat prob;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Finite distribution stored by its support, sorted by outcome id.
/// Well-formedness (strictly positive entries summing to 1) is checked by
/// validate(), not by construction, so that broken inputs can be reported.
struct FiniteDist {
  std::vector<Outcome> entries;

  static FiniteDist point(SymbolId id) { return FiniteDist{{{id, Rat(1)}}}; }

  [[nodiscard]] Rat prob(SymbolId id) const;
  [[nodiscard]] Rat total() const;
  [[nodiscard]] bool is_point_mass() const {
    return entries.size() == 1 && entries.front().prob.is_one();
  }
  void normalize_order();

  friend bool operator==(const FiniteDist&, const FiniteDist&) = default;
};

/// Finite POMDP without reward. Transition row (s, a) lives at
/// trans[s * num_actions() + a].
struct Pomdp {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<std::string> observations;
  FiniteDist init;
  std::vector<FiniteDist> trans;
  std::vector<FiniteDist> obs;

  [[nodiscard]] int num_states() const { return static_cast<int>(states.size()); }
  [[nodiscard]] int num_actions() const { return static_cast<int>(actions.size()); }
  [[nodiscard]] int num_observations() const { return static_cast<int>(observations.size()); }

  [[nodiscard]] const FiniteDist& transition(SymbolId s, SymbolId a) const {
    return trans[static_cast<std::size_t>(s * num_actions() + a)];
  }
  FiniteDist& transition(SymbolId s, SymbolId a) {
    return trans[static_cast<std::size_t>(s * num_actions() + a)];
  }
  [[nodiscard]] const FiniteDist& observation(SymbolId s) const {
    return obs[static_cast<std::size_t>(s)];
  }

  /// Lookups by identifier; throw InputError for unknown names.
  [[nodiscard]] SymbolId state_id(std::string_view name) const;
  [[nodiscard]] SymbolId action_id(std::string_view name) const;
  [[nodiscard]] SymbolId observation_id(std::string_view name) const;

  friend bool operator==(const Pomdp&, const Pomdp&) = default;
};

struct Violation {
  std::string entry;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

ValidationReport validate(const Pomdp& p);

/// Same action and observation sets (order may differ).
bool similar(const Pomdp& a, const Pomdp& b);

/// Returns p with its actions and observations re-indexed to follow the
/// declaration order of `reference`. Requires similar(p, reference).
Pomdp align_alphabets(const Pomdp& p, const Pomdp& reference);

// ---------------------------------------------------------------------------
// Histories

struct Step {
  SymbolId action;
  SymbolId observation;
  friend auto operator<=>(const Step&, const Step&) = default;
};

/// o0 a1 o1 ... at ot. Its length is the number of steps.
struct History {
  SymbolId initial_obs = 0;
  std::vector<Step> steps;

  [[nodiscard]] std::size_t length() const { return steps.size(); }
  [[nodiscard]] History prefix(std::size_t t) const;
  [[nodiscard]] History extended(SymbolId action, SymbolId observation) const;
  /// h <= other: equal, or other continues h.
  [[nodiscard]] bool is_prefix_of(const History& other) const;

  friend auto operator<=>(const History&, const History&) = default;
};

/// Parses whitespace-separated "o0 a1 o1 ..." against p's alphabets.
History parse_history(const Pomdp& p, std::string_view text);
std::string format_history(const Pomdp& p, const History& h);

/// reachable[t] holds the length-t histories of nonzero probability under
/// some policy, sorted. Size is m + 1.
std::vector<std::vector<History>> reachable_histories(const Pomdp& p, int m);

/// Reachable histories of length < m, ordered by length then lexicographically.
std::vector<History> decision_points(const Pomdp& p, int m);

// ---------------------------------------------------------------------------
// Policies

class DeterministicPolicy {
 public:
  DeterministicPolicy() = default;
  static DeterministicPolicy constant(SymbolId action);

  void set(const History& h, SymbolId action) { decisions_[h] = action; }
  /// Throws PreconditionError when h is outside the policy's domain.
  [[nodiscard]] SymbolId at(const History& h) const;
  [[nodiscard]] bool defined_at(const History& h) const;
  [[nodiscard]] const std::map<History, SymbolId>& table() const { return decisions_; }
  [[nodiscard]] std::optional<SymbolId> fallback() const { return fallback_; }

  friend auto operator<=>(const DeterministicPolicy&, const DeterministicPolicy&) = default;

 private:
  std::map<History, SymbolId> decisions_;
  std::optional<SymbolId> fallback_;
};

class StochasticPolicy {
 public:
  StochasticPolicy() = default;
  static StochasticPolicy constant(SymbolId action);
  static StochasticPolicy uniform(int num_actions);
  static StochasticPolicy from(const DeterministicPolicy& policy);

  void set(const History& h, FiniteDist actions) { decisions_[h] = std::move(actions); }
  [[nodiscard]] const FiniteDist& at(const History& h) const;
  [[nodiscard]] Rat prob(const History& h, SymbolId action) const { return at(h).prob(action); }

 private:
  std::map<History, FiniteDist> decisions_;
  std::optional<FiniteDist> fallback_;
};

std::string format_policy_table(const Pomdp& p, const DeterministicPolicy& policy);

/// All deterministic policies on the reachable decision points of
/// p for horizon m, in lexicographic order (first decision point most
/// significant, actions in declaration order). Requires m >= 1.
std::vector<DeterministicPolicy> enumerate_det_policies(const Pomdp& p, int m);

/// Same enumeration over an explicit decision-point set.
std::vector<DeterministicPolicy> enumerate_det_policies(std::span<const History> points,
                                                        int num_actions);

}  // namespace cfpomdp
