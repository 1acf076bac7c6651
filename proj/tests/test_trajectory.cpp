#include <gtest/gtest.h>

#include <random>

#include "cfpomdp/errors.hpp"
#include "cfpomdp/trajectory.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/random_env.hpp"

namespace cfpomdp {
namespace {

using testing::hist;

TEST(HistoryProb, MuFirstStep) {
  const Pomdp p = testing::mu();
  const auto a0 = StochasticPolicy::constant(p.action_id("a0"));
  EXPECT_EQ(history_prob(p, hist(p, "o0 a0 s00"), a0), Rat(1) / Rat(2));
  EXPECT_EQ(history_prob(p, hist(p, "o0 a0 s10"), StochasticPolicy::uniform(2)), Rat(0));
}

TEST(HistoryProb, MuPrimeSumsOverInitialStates) {
  const Pomdp p = testing::mu_prime();
  const auto a0 = StochasticPolicy::constant(p.action_id("a0"));
  const History h = hist(p, "o0 a0 s00");
  EXPECT_EQ(history_prob(p, h, a0), Rat(1) / Rat(2));
  EXPECT_EQ(testing::brute_history_prob(p, h, a0), Rat(1) / Rat(2));
}

TEST(HistoryProb, UnknownSymbolIsInputError) {
  const Pomdp p = testing::mu();
  History bad{0, {{5, 0}}};
  EXPECT_THROW(history_prob(p, bad, StochasticPolicy::uniform(2)), InputError);
}

TEST(HistoryProb, MatchesBruteForceOnRandomEnvironments) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Pomdp p = testing::random_env(rng);
    const auto pi = testing::random_stochastic_policy(rng, p, 2);
    for (const auto& level : reachable_histories(p, 2)) {
      for (const auto& h : level) {
        EXPECT_EQ(history_prob(p, h, pi), testing::brute_history_prob(p, h, pi));
      }
    }
  }
}

TEST(HistoryProb, NormalizationAndPrefixConsistency) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const Pomdp p = testing::random_env(rng);
    const auto pi = testing::random_stochastic_policy(rng, p, 2);
    const auto levels = reachable_histories(p, 2);
    for (std::size_t t = 0; t < levels.size(); ++t) {
      Rat total;
      for (const auto& h : levels[t]) total += history_prob(p, h, pi);
      EXPECT_EQ(total, Rat(1)) << "length " << t;
    }
    for (std::size_t t = 0; t + 1 < levels.size(); ++t) {
      for (const auto& h : levels[t]) {
        Rat children;
        for (const auto& c : levels[t + 1]) {
          if (h.is_prefix_of(c)) children += history_prob(p, c, pi);
        }
        EXPECT_EQ(children, history_prob(p, h, pi));
      }
    }
  }
}

TEST(CondHistoryProb, Examples) {
  const Pomdp p = testing::mu();
  const auto a0 = StochasticPolicy::constant(p.action_id("a0"));
  const auto any = StochasticPolicy::uniform(2);
  EXPECT_EQ(cond_history_prob(p, hist(p, "o0 a0 s00"), hist(p, "o0"), a0), Rat(1) / Rat(2));
  EXPECT_EQ(cond_history_prob(p, hist(p, "o0 a1 s10"), hist(p, "o0 a0 s00"), any), Rat(0));
  const History h = hist(p, "o0 a0 s00");
  EXPECT_EQ(cond_history_prob(p, h, h, any), Rat(1));
  // Zero-probability conditioning history.
  EXPECT_EQ(cond_history_prob(p, hist(p, "o0 a0 s10"), hist(p, "o0 a0 s10"), any), Rat(0));
}

TEST(InitialPosterior, Examples) {
  const Pomdp m = testing::mu();
  const auto post_mu = initial_posterior(m, hist(m, "o0"));
  EXPECT_EQ(post_mu[m.state_id("s0")], Rat(1));

  const Pomdp p = testing::mu_prime();
  const auto half = Rat(1) / Rat(2);
  auto post = initial_posterior(p, hist(p, "o0"));
  EXPECT_EQ(post[p.state_id("s0^0")], half);
  EXPECT_EQ(post[p.state_id("s0^1")], half);
  post = initial_posterior(p, hist(p, "o0 a0 s00"));
  EXPECT_EQ(post[p.state_id("s0^0")], Rat(1));
  EXPECT_EQ(post[p.state_id("s0^1")], Rat(0));
  // Impossible history: all zero.
  post = initial_posterior(p, hist(p, "o0 a0 s10"));
  for (const auto& x : post) EXPECT_TRUE(x.is_zero());
}

TEST(InitialPosterior, PolicyIndependentAndNormalized) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Pomdp p = testing::random_env(rng);
    for (const auto& level : reachable_histories(p, 2)) {
      for (const auto& h : level) {
        const auto post = initial_posterior(p, h);
        EXPECT_EQ(post, testing::brute_initial_posterior(p, h));
        Rat total;
        for (const auto& x : post) total += x;
        EXPECT_EQ(total, Rat(1));
        // Bayes with an arbitrary stochastic policy that can play h.
        const auto pi = testing::random_stochastic_policy(rng, p, 2);
        const Rat evidence = history_prob(p, h, pi);
        if (evidence.is_zero()) continue;
        for (int s = 0; s < p.num_states(); ++s) {
          Pomdp pinned = p;
          if (p.init.prob(s).is_zero()) continue;
          pinned.init = FiniteDist::point(s);
          EXPECT_EQ(post[s], p.init.prob(s) * history_prob(pinned, h, pi) / evidence);
        }
      }
    }
  }
}

}  // namespace
}  // namespace cfpomdp
