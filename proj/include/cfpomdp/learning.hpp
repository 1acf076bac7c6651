#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

/// P(h) = sum_s weight(s) * mu(s0 = s | h) on a deterministic environment.
struct PureLearningSpec {
  Pomdp env;
  std::map<SymbolId, Rat> weights;  // keyed by initial-support state
  int horizon = 0;
};

/// Checks determinism, weight range [0, 1] and totality on the initial
/// support. Throws PreconditionError.
void check_learning_spec(const PureLearningSpec& spec);

Rat evaluate(const PureLearningSpec& spec, const History& h);

/// Moves the weights onto `target` cell by cell: each target state in a
/// behavior cell receives the mass-weighted average weight of the matching
/// source cell. Requires horizon == m, a deterministic target and
/// m-counterfactual equivalence (PreconditionError otherwise).
PureLearningSpec transfer(const PureLearningSpec& spec, const Pomdp& target, int m);

struct UniversalityReport {
  bool holds = true;
  std::optional<History> first_difference;  // in spec.env's alphabet order
  PureLearningSpec transferred;
};

UniversalityReport verify_universality(const PureLearningSpec& spec, const Pomdp& target, int m);

/// Per matched cell: (sum over source cell of mu(s) p_s,
///                    sum over target cell of mu*(s*) p_s*).
std::vector<std::pair<Rat, Rat>> cell_mass_identities(const PureLearningSpec& source,
                                                      const PureLearningSpec& target);

/// Weight files: one "state p/q" per line, '#' comments allowed.
std::map<SymbolId, Rat> parse_weights(const Pomdp& env, std::string_view text);
std::string format_weights(const PureLearningSpec& spec);

}  // namespace cfpomdp
