#include "cfpomdp/equivalence.hpp"

#include <algorithm>
#include <set>

#include "cfpomdp/errors.hpp"
#include "cfpomdp/trajectory.hpp"

namespace cfpomdp {

namespace {

Pomdp aligned_or_throw(const Pomdp& p1, const Pomdp& p2) {
  if (!similar(p1, p2)) {
    throw InputError("environments are not similar: action or observation sets differ");
  }
  return align_alphabets(p2, p1);
}

class LikelihoodCache {
 public:
  explicit LikelihoodCache(const Pomdp& p) : p_(p) {}
  const Rat& operator()(const History& h) {
    auto it = cache_.find(h);
    if (it == cache_.end()) it = cache_.emplace(h, observation_likelihood(p_, h)).first;
    return it->second;
  }

 private:
  const Pomdp& p_;
  std::map<History, Rat> cache_;
};

Rat conditional(LikelihoodCache& lik, const History& h_long, const History& h_short) {
  const Rat& denom = lik(h_short);
  if (denom.is_zero()) return Rat(0);
  return lik(h_long) / denom;
}

}  // namespace

CollectionQuery CollectionWitness::query() const {
  CollectionQuery q;
  for (const auto& [h, pi] : pairs) q.push_back({h, StochasticPolicy::from(pi)});
  return q;
}

DeterministicPolicy policy_along(const History& h) {
  DeterministicPolicy pi;
  for (std::size_t k = 0; k < h.length(); ++k) pi.set(h.prefix(k), h.steps[k].action);
  return pi;
}

Verdict check_equiv(const Pomdp& p1, const Pomdp& p2, int m) {
  const Pomdp q = aligned_or_throw(p1, p2);
  // Under a deterministic policy, mu(h | pi) is the observation likelihood
  // of h when pi plays h's actions and zero otherwise. Non-prefix pairs and
  // policies inconsistent with h_long give zero on both sides, so only the
  // pairs h_short <= h_long with a consistent policy need comparing.
  std::set<History> histories;
  for (const auto* env : {&p1, &q}) {
    for (const auto& level : reachable_histories(*env, m)) {
      histories.insert(level.begin(), level.end());
    }
  }
  std::vector<History> ordered(histories.begin(), histories.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const History& a, const History& b) {
    return a.length() < b.length();
  });
  LikelihoodCache lik1(p1);
  LikelihoodCache lik2(q);
  for (const auto& h_long : ordered) {
    for (std::size_t t = 0; t <= h_long.length(); ++t) {
      const History h_short = h_long.prefix(t);
      Rat left = conditional(lik1, h_long, h_short);
      Rat right = conditional(lik2, h_long, h_short);
      if (left != right) {
        return Verdict{false, ConditionalWitness{h_short, h_long, policy_along(h_long),
                                                 std::move(left), std::move(right)}};
      }
    }
  }
  return Verdict{};
}

Rat collection_prob(const Pomdp& p, const CollectionQuery& q, int m) {
  for (const auto& pair : q) {
    check_history_symbols(p, pair.history);
    if (static_cast<int>(pair.history.length()) > m) {
      throw PreconditionError("collection history exceeds the horizon");
    }
  }
  Rat total;
  for (const auto& w : enumerate_support(p, m)) {
    Rat term = w.prob;
    for (const auto& pair : q) {
      term *= history_prob_given_ep(p, pair.history, w.policy, pair.policy);
      if (term.is_zero()) break;
    }
    total += term;
  }
  return total;
}

std::map<BehaviorMap, Rat> behavior_distribution(const Pomdp& p, int m) {
  std::map<BehaviorMap, Rat> out;
  for (const auto& w : enumerate_support(p, m)) out[behavior_map(p, w.policy, m)] += w.prob;
  return out;
}

Verdict check_cf_equiv(const Pomdp& p1, const Pomdp& p2, int m) {
  const Pomdp q = aligned_or_throw(p1, p2);
  const auto d1 = behavior_distribution(p1, m);
  const auto d2 = behavior_distribution(q, m);
  if (d1 == d2) return Verdict{};

  // Prefer a behavior present on only one side, then the least map.
  std::set<BehaviorMap> keys;
  for (const auto& [map, _] : d1) keys.insert(map);
  for (const auto& [map, _] : d2) keys.insert(map);
  auto mass = [](const std::map<BehaviorMap, Rat>& d, const BehaviorMap& key) {
    const auto it = d.find(key);
    return it == d.end() ? Rat(0) : it->second;
  };
  const BehaviorMap* chosen = nullptr;
  bool chosen_one_sided = false;
  for (const auto& key : keys) {
    const Rat a = mass(d1, key);
    const Rat b = mass(d2, key);
    if (a == b) continue;
    const bool one_sided = a.is_zero() || b.is_zero();
    if (chosen == nullptr || (one_sided && !chosen_one_sided)) {
      chosen = &key;
      chosen_one_sided = one_sided;
    }
  }
  if (chosen == nullptr) throw InternalError("behavior distributions differ without a witness");

  CollectionWitness witness;
  for (auto& h : chosen->open_loop_histories()) {
    witness.pairs.emplace_back(h, policy_along(h));
  }
  const auto query = witness.query();
  witness.left = collection_prob(p1, query, m);
  witness.right = collection_prob(q, query, m);
  if (witness.left == witness.right) {
    throw InternalError("counterfactual witness does not separate the environments");
  }
  return Verdict{false, std::move(witness)};
}

}  // namespace cfpomdp
