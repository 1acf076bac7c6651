#include "cfpomdp/trajectory.hpp"

#include "cfpomdp/errors.hpp"

namespace cfpomdp {

namespace {

// alpha[s] = P(s_t = s, o_0..o_t | a_1..a_t), starting from `start`.
std::vector<Rat> forward(const Pomdp& p, const History& h, const FiniteDist& start) {
  std::vector<Rat> alpha(static_cast<std::size_t>(p.num_states()));
  for (const auto& e : start.entries) {
    alpha[e.id] = e.prob * p.observation(e.id).prob(h.initial_obs);
  }
  for (const auto& step : h.steps) {
    std::vector<Rat> next(alpha.size());
    for (int s = 0; s < p.num_states(); ++s) {
      if (alpha[s].is_zero()) continue;
      for (const auto& to : p.transition(s, step.action).entries) {
        const Rat o = p.observation(to.id).prob(step.observation);
        if (!o.is_zero()) next[to.id] += alpha[s] * to.prob * o;
      }
    }
    alpha = std::move(next);
  }
  return alpha;
}

Rat sum(const std::vector<Rat>& v) {
  Rat out;
  for (const auto& x : v) out += x;
  return out;
}

}  // namespace

void check_history_symbols(const Pomdp& p, const History& h) {
  auto bad_obs = [&](SymbolId o) { return o < 0 || o >= p.num_observations(); };
  if (bad_obs(h.initial_obs)) throw InputError("history uses an unknown observation");
  for (const auto& step : h.steps) {
    if (step.action < 0 || step.action >= p.num_actions()) {
      throw InputError("history uses an unknown action");
    }
    if (bad_obs(step.observation)) throw InputError("history uses an unknown observation");
  }
}

Rat observation_likelihood(const Pomdp& p, const History& h) {
  check_history_symbols(p, h);
  return sum(forward(p, h, p.init));
}

Rat history_prob(const Pomdp& p, const History& h, const StochasticPolicy& pi) {
  check_history_symbols(p, h);
  Rat policy_factor(1);
  for (std::size_t k = 0; k < h.length(); ++k) {
    policy_factor *= pi.prob(h.prefix(k), h.steps[k].action);
    if (policy_factor.is_zero()) return Rat(0);
  }
  return policy_factor * sum(forward(p, h, p.init));
}

Rat cond_history_prob(const Pomdp& p, const History& h_long, const History& h_short,
                      const StochasticPolicy& pi) {
  check_history_symbols(p, h_long);
  check_history_symbols(p, h_short);
  if (!h_short.is_prefix_of(h_long)) return Rat(0);
  const Rat denom = history_prob(p, h_short, pi);
  if (denom.is_zero()) return Rat(0);
  return history_prob(p, h_long, pi) / denom;
}

std::vector<Rat> initial_posterior(const Pomdp& p, const History& h) {
  check_history_symbols(p, h);
  // Playing h's own actions is a compatible deterministic policy; its
  // factor cancels in the normalization.
  std::vector<Rat> post(static_cast<std::size_t>(p.num_states()));
  Rat total;
  for (const auto& e : p.init.entries) {
    const Rat joint = e.prob * sum(forward(p, h, FiniteDist::point(e.id)));
    post[e.id] = joint;
    total += joint;
  }
  if (total.is_zero()) return std::vector<Rat>(post.size());
  for (auto& x : post) x /= total;
  return post;
}

}  // namespace cfpomdp
