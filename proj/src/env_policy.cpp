#include "cfpomdp/env_policy.hpp"

#include <set>

#include "cfpomdp/errors.hpp"

namespace cfpomdp {

namespace {

std::size_t level_offset(int num_actions, int t) {
  std::size_t offset = 0;
  std::size_t width = 1;
  for (int i = 0; i < t; ++i) {
    offset += width;
    width *= static_cast<std::size_t>(num_actions);
  }
  return offset;
}

// One factor of the product distribution that still has to be resolved.
struct Slot {
  bool is_transition;
  TransitionKey tkey;
  ObservationKey okey;
  const FiniteDist* dist;
};

class SupportEnumerator {
 public:
  SupportEnumerator(const Pomdp& p, int m) : p_(p), m_(m) {}

  std::vector<WeightedEnvPolicy> run() {
    for (const auto& e : p_.init.entries) {
      EnvironmentPolicy ep;
      ep.init_state = e.id;
      ep.horizon = m_;
      turn(ep, e.prob, 0, {e.id});
    }
    return std::move(out_);
  }

 private:
  // frontier: states occupied at turn `t`; their observations come first,
  // then the transitions into turn t + 1.
  void turn(EnvironmentPolicy& ep, const Rat& prob, int t, const std::set<SymbolId>& frontier) {
    std::vector<Slot> slots;
    for (const SymbolId s : frontier) {
      slots.push_back({false, {}, {s, t}, &p_.observation(s)});
    }
    if (t < m_) {
      for (const SymbolId s : frontier) {
        for (int a = 0; a < p_.num_actions(); ++a) {
          slots.push_back({true, {s, a, t + 1}, {}, &p_.transition(s, a)});
        }
      }
    }
    assign(ep, prob, t, slots, 0);
  }

  void assign(EnvironmentPolicy& ep, const Rat& prob, int t, const std::vector<Slot>& slots,
              std::size_t index) {
    if (index == slots.size()) {
      if (t == m_) {
        out_.push_back({ep, prob});
        return;
      }
      std::set<SymbolId> next;
      for (const auto& slot : slots) {
        if (slot.is_transition) next.insert(ep.trans_choice.at(slot.tkey));
      }
      turn(ep, prob, t + 1, next);
      return;
    }
    const Slot& slot = slots[index];
    for (const auto& e : slot.dist->entries) {
      if (slot.is_transition) {
        ep.trans_choice[slot.tkey] = e.id;
      } else {
        ep.obs_choice[slot.okey] = e.id;
      }
      assign(ep, prob * e.prob, t, slots, index + 1);
    }
    if (slot.is_transition) {
      ep.trans_choice.erase(slot.tkey);
    } else {
      ep.obs_choice.erase(slot.okey);
    }
  }

  const Pomdp& p_;
  int m_;
  std::vector<WeightedEnvPolicy> out_;
};

SymbolId next_state(const EnvironmentPolicy& ep, SymbolId s, SymbolId a, int turn) {
  const auto it = ep.trans_choice.find({s, a, turn});
  if (it == ep.trans_choice.end()) {
    throw PreconditionError("environment policy has no transition recorded for a visited entry");
  }
  return it->second;
}

SymbolId observation_at(const EnvironmentPolicy& ep, SymbolId s, int turn) {
  const auto it = ep.obs_choice.find({s, turn});
  if (it == ep.obs_choice.end()) {
    throw PreconditionError("environment policy has no observation recorded for a visited entry");
  }
  return it->second;
}

}  // namespace

std::vector<WeightedEnvPolicy> enumerate_support(const Pomdp& p, int m) {
  if (m < 1) throw PreconditionError("environment policies require m >= 1");
  return SupportEnumerator(p, m).run();
}

Rat env_policy_prob(const Pomdp& p, const EnvironmentPolicy& ep) {
  auto valid_state = [&](SymbolId s) { return s >= 0 && s < p.num_states(); };
  if (!valid_state(ep.init_state)) throw InputError("environment policy: unknown initial state");
  Rat prob = p.init.prob(ep.init_state);
  for (const auto& [key, to] : ep.trans_choice) {
    if (!valid_state(key.state) || !valid_state(to) || key.action < 0 ||
        key.action >= p.num_actions()) {
      throw InputError("environment policy: transition entry outside alphabets");
    }
    prob *= p.transition(key.state, key.action).prob(to);
  }
  for (const auto& [key, o] : ep.obs_choice) {
    if (!valid_state(key.state) || o < 0 || o >= p.num_observations()) {
      throw InputError("environment policy: observation entry outside alphabets");
    }
    prob *= p.observation(key.state).prob(o);
  }
  return prob;
}

History rollout(const Pomdp& p, const EnvironmentPolicy& ep, const DeterministicPolicy& pi) {
  (void)p;
  SymbolId s = ep.init_state;
  History h{observation_at(ep, s, 0), {}};
  for (int t = 1; t <= ep.horizon; ++t) {
    const SymbolId a = pi.at(h);
    s = next_state(ep, s, a, t);
    h.steps.push_back({a, observation_at(ep, s, t)});
  }
  return h;
}

Rat history_prob_given_ep(const Pomdp& p, const History& h, const EnvironmentPolicy& ep,
                          const StochasticPolicy& pi) {
  (void)p;
  if (static_cast<int>(h.length()) > ep.horizon) {
    throw PreconditionError("history longer than the environment policy's horizon");
  }
  SymbolId s = ep.init_state;
  if (observation_at(ep, s, 0) != h.initial_obs) return Rat(0);
  Rat prob(1);
  for (std::size_t k = 0; k < h.length(); ++k) {
    const auto& step = h.steps[k];
    prob *= pi.prob(h.prefix(k), step.action);
    if (prob.is_zero()) return prob;
    const int t = static_cast<int>(k) + 1;
    s = next_state(ep, s, step.action, t);
    if (observation_at(ep, s, t) != step.observation) return Rat(0);
  }
  return prob;
}

std::vector<WeightedEnvPolicy> env_policy_posterior(const Pomdp& p, const History& h,
                                                    const StochasticPolicy& pi, int m) {
  auto support = enumerate_support(p, m);
  Rat total;
  for (auto& w : support) {
    w.prob *= history_prob_given_ep(p, h, w.policy, pi);
    total += w.prob;
  }
  if (!total.is_zero()) {
    for (auto& w : support) w.prob /= total;
  }
  return support;
}

// ---------------------------------------------------------------------------

std::size_t response_table_size(int num_actions, int m) {
  return level_offset(num_actions, m + 1);
}

BehaviorMap::BehaviorMap(int num_actions, int horizon, std::vector<SymbolId> responses)
    : num_actions_(num_actions), horizon_(horizon), responses_(std::move(responses)) {
  if (responses_.size() != response_table_size(num_actions, horizon)) {
    throw InternalError("behavior map response table has the wrong size");
  }
}

SymbolId BehaviorMap::response(std::span<const SymbolId> actions) const {
  if (static_cast<int>(actions.size()) > horizon_) {
    throw PreconditionError("action sequence exceeds behavior map horizon");
  }
  std::size_t code = 0;
  for (const SymbolId a : actions) code = code * static_cast<std::size_t>(num_actions_) + a;
  return responses_[level_offset(num_actions_, static_cast<int>(actions.size())) + code];
}

History BehaviorMap::apply(const DeterministicPolicy& pi) const {
  History h{responses_.front(), {}};
  std::vector<SymbolId> actions;
  for (int t = 1; t <= horizon_; ++t) {
    actions.push_back(pi.at(h));
    h.steps.push_back({actions.back(), response(actions)});
  }
  return h;
}

std::vector<std::pair<DeterministicPolicy, History>> BehaviorMap::tabulate(
    std::span<const DeterministicPolicy> policies) const {
  std::vector<std::pair<DeterministicPolicy, History>> out;
  out.reserve(policies.size());
  for (const auto& pi : policies) out.emplace_back(pi, apply(pi));
  return out;
}

std::vector<History> BehaviorMap::open_loop_histories() const {
  std::vector<History> out;
  std::vector<SymbolId> actions(static_cast<std::size_t>(horizon_), 0);
  while (true) {
    History h{responses_.front(), {}};
    for (int t = 1; t <= horizon_; ++t) {
      h.steps.push_back(
          {actions[t - 1], response(std::span<const SymbolId>(actions.data(), t))});
    }
    out.push_back(std::move(h));
    std::size_t i = actions.size();
    while (i > 0 && actions[i - 1] == num_actions_ - 1) actions[--i] = 0;
    if (i == 0) break;
    ++actions[i - 1];
  }
  return out;
}

BehaviorMap behavior_map(const Pomdp& p, const EnvironmentPolicy& ep, int m) {
  if (m > ep.horizon) throw PreconditionError("behavior map horizon exceeds environment policy");
  const int na = p.num_actions();
  std::vector<SymbolId> responses;
  responses.reserve(response_table_size(na, m));
  std::vector<SymbolId> level{ep.init_state};
  responses.push_back(observation_at(ep, ep.init_state, 0));
  for (int t = 1; t <= m; ++t) {
    std::vector<SymbolId> next;
    next.reserve(level.size() * static_cast<std::size_t>(na));
    for (const SymbolId s : level) {
      for (int a = 0; a < na; ++a) {
        const SymbolId to = next_state(ep, s, a, t);
        next.push_back(to);
        responses.push_back(observation_at(ep, to, t));
      }
    }
    level = std::move(next);
  }
  return BehaviorMap(na, m, std::move(responses));
}

BigInt count_env_policies(const Pomdp& p, int m, CountConvention convention) {
  if (m < 1) throw PreconditionError("counting environment policies requires m >= 1");
  const BigInt states(p.num_states());
  const auto ns = static_cast<unsigned long>(p.num_states());
  const auto na = static_cast<unsigned long>(p.num_actions());
  const auto turns = static_cast<unsigned long>(m);
  BigInt count = states * big_pow(states, ns * na * turns);
  if (convention == CountConvention::full) {
    count *= big_pow(BigInt(p.num_observations()), ns * (turns + 1));
  }
  return count;
}

}  // namespace cfpomdp
