#include <gtest/gtest.h>

#include <map>
#include <random>

#include "cfpomdp/env_policy.hpp"
#include "cfpomdp/equivalence.hpp"
#include "cfpomdp/errors.hpp"
#include "cfpomdp/trajectory.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/random_env.hpp"

namespace cfpomdp {
namespace {

using testing::hist;

// pi_ij of mu: a0 leads to s0i, a1 leads to s1j.
EnvironmentPolicy mu_policy(const Pomdp& p, int i, int j) {
  const SymbolId s0 = p.state_id("s0");
  for (const auto& w : enumerate_support(p, 1)) {
    if (w.policy.trans_choice.at({s0, p.action_id("a0"), 1}) == p.state_id("s0" + std::to_string(i)) &&
        w.policy.trans_choice.at({s0, p.action_id("a1"), 1}) == p.state_id("s1" + std::to_string(j))) {
      return w.policy;
    }
  }
  throw std::runtime_error("no such policy");
}

Pomdp trivial_env() {
  Pomdp p;
  p.states = {"s"};
  p.actions = {"a"};
  p.observations = {"o"};
  p.init = FiniteDist::point(0);
  p.trans = {FiniteDist::point(0)};
  p.obs = {FiniteDist::point(0)};
  return p;
}

TEST(EnumerateSupport, MuHasFourQuarterPolicies) {
  const auto support = enumerate_support(testing::mu(), 1);
  ASSERT_EQ(support.size(), 4u);
  for (const auto& w : support) EXPECT_EQ(w.prob, Rat(1) / Rat(4));
}

TEST(EnumerateSupport, MuDoublePrimeHasTwoHalfPolicies) {
  const Pomdp p = testing::mu_double_prime();
  const auto support = enumerate_support(p, 1);
  ASSERT_EQ(support.size(), 2u);
  EXPECT_EQ(support[0].policy.init_state, p.state_id("s0^0"));
  EXPECT_EQ(support[1].policy.init_state, p.state_id("s0^1"));
  for (const auto& w : support) EXPECT_EQ(w.prob, Rat(1) / Rat(2));
}

TEST(EnumerateSupport, DeterministicEnvironmentHasOnePolicy) {
  const auto support = enumerate_support(trivial_env(), 3);
  ASSERT_EQ(support.size(), 1u);
  EXPECT_EQ(support[0].prob, Rat(1));
}

TEST(EnumerateSupport, SumsToOneAndMatchesProductFormula) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Pomdp p = testing::random_env(rng);
    for (int m : {1, 2}) {
      Rat total;
      for (const auto& w : enumerate_support(p, m)) {
        EXPECT_GT(w.prob, Rat(0));
        EXPECT_EQ(w.prob, env_policy_prob(p, w.policy));
        total += w.prob;
      }
      EXPECT_EQ(total, Rat(1));
    }
  }
}

TEST(EnumerateSupport, ReducedEnumerationIsSound) {
  // Expanding to unreduced policies and summing by projection reproduces
  // each reduced policy's probability.
  std::mt19937_64 rng(32);
  testing::RandomEnvOptions opts;
  opts.max_states = 3;
  opts.max_actions = 2;
  opts.max_observations = 2;
  opts.policy_budget = 256;
  int checked = 0;
  while (checked < 25) {
    const Pomdp p = testing::random_env(rng, opts);
    for (int m : {1, 2}) {
      const auto full = testing::full_env_policies(p, m);
      if (full.size() > 20000) continue;
      std::map<EnvironmentPolicy, Rat> projected;
      for (const auto& ep : full) projected[testing::reduce(p, ep, m)] += ep.prob;
      std::map<EnvironmentPolicy, Rat> reduced;
      for (const auto& w : enumerate_support(p, m)) reduced[w.policy] = w.prob;
      EXPECT_EQ(projected, reduced);
    }
    ++checked;
  }
}

TEST(EnvPolicyProb, Examples) {
  const Pomdp p = testing::mu();
  EXPECT_EQ(env_policy_prob(p, mu_policy(p, 0, 1)), Rat(1) / Rat(4));

  EnvironmentPolicy off = mu_policy(p, 0, 0);
  off.trans_choice[{p.state_id("s0"), p.action_id("a0"), 1}] = p.state_id("s10");
  EXPECT_EQ(env_policy_prob(p, off), Rat(0));

  EnvironmentPolicy bad = off;
  bad.obs_choice[{0, 0}] = 99;
  EXPECT_THROW(env_policy_prob(p, bad), InputError);

  const Pomdp q = testing::mu_prime();
  const SymbolId s00 = q.state_id("s0^0");
  EnvironmentPolicy ep;
  ep.horizon = 1;
  ep.init_state = s00;
  ep.trans_choice[{s00, q.action_id("a0"), 1}] = q.state_id("s00");
  ep.trans_choice[{s00, q.action_id("a1"), 1}] = q.state_id("s10");
  ep.obs_choice[{s00, 0}] = q.observation_id("o0");
  ep.obs_choice[{q.state_id("s00"), 1}] = q.observation_id("s00");
  ep.obs_choice[{q.state_id("s10"), 1}] = q.observation_id("s10");
  EXPECT_EQ(env_policy_prob(q, ep), Rat(1) / Rat(4));
}

TEST(Rollout, Examples) {
  const Pomdp p = testing::mu();
  const auto a0 = DeterministicPolicy::constant(p.action_id("a0"));
  const auto a1 = DeterministicPolicy::constant(p.action_id("a1"));
  EXPECT_EQ(rollout(p, mu_policy(p, 0, 1), a0), hist(p, "o0 a0 s00"));
  EXPECT_EQ(rollout(p, mu_policy(p, 0, 1), a1), hist(p, "o0 a1 s11"));

  const Pomdp q = testing::mu_double_prime();
  EXPECT_EQ(rollout(q, enumerate_support(q, 1)[1].policy, a0), hist(q, "o0 a0 s01"));
}

TEST(HistoryProbGivenEp, Examples) {
  const Pomdp p = testing::mu();
  const auto ep = mu_policy(p, 0, 1);
  EXPECT_EQ(history_prob_given_ep(p, hist(p, "o0 a0 s00"), ep, StochasticPolicy::uniform(2)),
            Rat(1) / Rat(2));
  EXPECT_EQ(history_prob_given_ep(p, hist(p, "o0 a0 s01"), ep, StochasticPolicy::uniform(2)),
            Rat(0));
  EXPECT_EQ(history_prob_given_ep(p, hist(p, "o0 a0 s00"), ep,
                                  StochasticPolicy::constant(p.action_id("a0"))),
            Rat(1));
}

TEST(HistoryProbGivenEp, TwoViewsConsistency) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const Pomdp p = testing::random_env(rng);
    const int m = 2;
    const auto support = enumerate_support(p, m);
    const auto pi = testing::random_stochastic_policy(rng, p, m);
    for (const auto& level : reachable_histories(p, m)) {
      for (const auto& h : level) {
        Rat mixture;
        for (const auto& w : support) mixture += w.prob * history_prob_given_ep(p, h, w.policy, pi);
        EXPECT_EQ(mixture, history_prob(p, h, pi));
      }
    }
  }
}

TEST(HistoryProbGivenEp, RolloutHasProbabilityOne) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const Pomdp p = testing::random_env(rng);
    const auto det = testing::random_det_policy(rng, p, 2);
    for (const auto& w : enumerate_support(p, 2)) {
      const History h = rollout(p, w.policy, det);
      EXPECT_EQ(history_prob_given_ep(p, h, w.policy, StochasticPolicy::from(det)), Rat(1));
    }
  }
}

TEST(EnvPolicyPosterior, Examples) {
  const Pomdp p = testing::mu();
  const auto a0 = StochasticPolicy::constant(p.action_id("a0"));
  const auto post = env_policy_posterior(p, hist(p, "o0 a0 s00"), a0, 1);
  std::map<EnvironmentPolicy, Rat> by_policy;
  for (const auto& w : post) by_policy[w.policy] = w.prob;
  EXPECT_EQ(by_policy.at(mu_policy(p, 0, 0)), Rat(1) / Rat(2));
  EXPECT_EQ(by_policy.at(mu_policy(p, 0, 1)), Rat(1) / Rat(2));
  EXPECT_EQ(by_policy.at(mu_policy(p, 1, 0)), Rat(0));
  EXPECT_EQ(by_policy.at(mu_policy(p, 1, 1)), Rat(0));

  for (const auto& w : env_policy_posterior(p, hist(p, "o0"), StochasticPolicy::uniform(2), 1)) {
    EXPECT_EQ(w.prob, Rat(1) / Rat(4));
  }

  const Pomdp q = testing::mu_double_prime();
  const auto qpost = env_policy_posterior(q, hist(q, "o0 a0 s00"),
                                          StochasticPolicy::constant(q.action_id("a0")), 1);
  EXPECT_EQ(qpost[0].prob, Rat(1));
  EXPECT_EQ(qpost[1].prob, Rat(0));
}

TEST(EnvPolicyPosterior, PolicyIndependent) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const Pomdp p = testing::random_env(rng);
    const auto levels = reachable_histories(p, 2);
    for (const auto& h : levels[2]) {
      const auto a = env_policy_posterior(p, h, StochasticPolicy::from(policy_along(h)), 2);
      const auto b = env_policy_posterior(p, h, StochasticPolicy::uniform(p.num_actions()), 2);
      ASSERT_EQ(a.size(), b.size());
      Rat total;
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].prob, b[i].prob);
        total += a[i].prob;
      }
      EXPECT_EQ(total, Rat(1));
    }
  }
}

TEST(BehaviorMap, MuAndMuDoublePrime) {
  const Pomdp p = testing::mu();
  const auto policies = enumerate_det_policies(p, 1);
  const auto table = behavior_map(p, mu_policy(p, 0, 1), 1).tabulate(policies);
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0].second, hist(p, "o0 a0 s00"));
  EXPECT_EQ(table[1].second, hist(p, "o0 a1 s11"));

  const Pomdp q = testing::mu_double_prime();
  const auto qtable = behavior_map(q, enumerate_support(q, 1)[0].policy, 1)
                          .tabulate(enumerate_det_policies(q, 1));
  EXPECT_EQ(qtable[0].second, hist(q, "o0 a0 s00"));
  EXPECT_EQ(qtable[1].second, hist(q, "o0 a1 s10"));
}

TEST(BehaviorMap, AgreesWithRolloutOnEveryPolicy) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    testing::RandomEnvOptions opts;
    opts.max_actions = 2;
    const Pomdp p = testing::random_env(rng, opts);
    const auto policies = enumerate_det_policies(p, 2);
    if (policies.size() > 512) continue;
    for (const auto& w : enumerate_support(p, 2)) {
      const auto f = behavior_map(p, w.policy, 2);
      for (const auto& [pi, h] : f.tabulate(policies)) EXPECT_EQ(h, rollout(p, w.policy, pi));
    }
  }
}

TEST(BehaviorMap, DeterministicEnvironmentSingleMap) {
  const Pomdp p = trivial_env();
  const auto support = enumerate_support(p, 2);
  const auto f = behavior_map(p, support[0].policy, 2);
  EXPECT_EQ(f.apply(DeterministicPolicy::constant(0)), parse_history(p, "o a o a o"));
}

TEST(CountEnvPolicies, Conventions) {
  const Pomdp p = testing::mu();
  EXPECT_EQ(count_env_policies(p, 1, CountConvention::transition_only), BigInt(48828125));
  EXPECT_EQ(count_env_policies(p, 1, CountConvention::full),
            BigInt(5) * big_pow(BigInt(5), 10) * big_pow(BigInt(5), 10));
  EXPECT_EQ(count_env_policies(trivial_env(), 1, CountConvention::full), BigInt(1));
  // |S| * count * (m + 1) for mu at m = 1.
  EXPECT_EQ(BigInt(5) * count_env_policies(p, 1, CountConvention::transition_only) * 2,
            BigInt(488281250));
}

}  // namespace
}  // namespace cfpomdp
