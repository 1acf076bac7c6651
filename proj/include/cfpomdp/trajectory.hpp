#pragma once

#include <vector>

#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

/// mu(h | pi): probability of observing h when acting with pi.
/// Forward dynamic program over the joint (state, observed prefix).
Rat history_prob(const Pomdp& p, const History& h, const StochasticPolicy& pi);

/// mu(h_long | h_short, pi). Zero if h_short is not a prefix of h_long or
/// if h_short itself has probability zero.
Rat cond_history_prob(const Pomdp& p, const History& h_long, const History& h_short,
                      const StochasticPolicy& pi);

/// Probability of the observations of h given that its actions are played
/// (policy factor removed). Equals history_prob under any deterministic
/// policy consistent with h.
Rat observation_likelihood(const Pomdp& p, const History& h);

/// mu(s0 = s | h) for every state, indexed by state id. All zero if h is
/// impossible under every policy.
std::vector<Rat> initial_posterior(const Pomdp& p, const History& h);

/// Throws InputError if h mentions ids outside p's alphabets.
void check_history_symbols(const Pomdp& p, const History& h);

}  // namespace cfpomdp
