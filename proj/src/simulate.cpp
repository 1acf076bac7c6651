#include "cfpomdp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "cfpomdp/env_policy.hpp"
#include "cfpomdp/equivalence.hpp"
#include "cfpomdp/errors.hpp"

namespace cfpomdp {

double JointFrequency::frequency(std::uint64_t episodes) const {
  return episodes == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(episodes);
}

double JointFrequency::std_error(std::uint64_t episodes) const {
  if (episodes == 0) return 0.0;
  const double p = exact.to_double();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(episodes));
}

double SimulationReport::frequency_of(const std::vector<History>& histories) const {
  for (const auto& row : rows) {
    if (row.histories == histories) return row.frequency(episodes);
  }
  return 0.0;
}

SimulationReport simulate(const Pomdp& p, int m, std::span<const DeterministicPolicy> agents,
                          std::uint64_t episodes, std::uint64_t seed) {
  if (agents.empty()) throw PreconditionError("simulate requires at least one agent");
  const auto support = enumerate_support(p, m);

  // Joint outcome of every support policy, plus its cumulative mass.
  std::vector<std::vector<History>> outcome;
  std::vector<Rat> cumulative;
  Rat running;
  std::map<std::vector<History>, std::size_t> row_of;
  for (const auto& w : support) {
    std::vector<History> joint;
    joint.reserve(agents.size());
    for (const auto& pi : agents) joint.push_back(rollout(p, w.policy, pi));
    row_of.emplace(joint, 0);
    outcome.push_back(std::move(joint));
    running += w.prob;
    cumulative.push_back(running);
  }

  SimulationReport report;
  report.episodes = episodes;
  report.seed = seed;
  for (auto& [joint, index] : row_of) {
    index = report.rows.size();
    CollectionQuery query;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      query.push_back({joint[i], StochasticPolicy::from(agents[i])});
    }
    report.rows.push_back({joint, 0, collection_prob(p, query, m)});
  }

  std::vector<std::size_t> outcome_row;
  outcome_row.reserve(outcome.size());
  for (const auto& joint : outcome) outcome_row.push_back(row_of.at(joint));

  // u = draw / 2^64 compared exactly against the cumulative masses.
  std::mt19937_64 rng(seed);
  const BigInt two64 = big_pow(BigInt(2), 64);
  for (std::uint64_t e = 0; e < episodes; ++e) {
    const std::uint64_t draw = rng();
    BigInt num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(draw), 0, 0, &draw);
    const Rat u(num, two64);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto k = static_cast<std::size_t>(it - cumulative.begin());
    if (k >= outcome.size()) throw InternalError("sampled beyond the support mass");
    ++report.rows[outcome_row[k]].count;
  }
  return report;
}

}  // namespace cfpomdp
