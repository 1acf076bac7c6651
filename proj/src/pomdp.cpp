#include "cfpomdp/pomdp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cfpomdp/errors.hpp"

namespace cfpomdp {

namespace {

SymbolId lookup(const std::vector<std::string>& names, std::string_view name,
                const char* kind) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw InputError("unknown " + std::string(kind) + " '" + std::string(name) + "'");
  }
  return static_cast<SymbolId>(it - names.begin());
}

void check_unique(const std::vector<std::string>& names, const char* kind,
                  std::vector<Violation>& out) {
  if (names.empty()) out.push_back({kind, std::string("empty ") + kind + " list"});
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      out.push_back({n, "duplicate identifier '" + n + "' in " + kind});
    }
  }
}

void check_dist(const FiniteDist& d, int range, const std::string& where,
                std::vector<Violation>& out) {
  std::set<SymbolId> seen;
  Rat sum;
  for (const auto& e : d.entries) {
    if (e.id < 0 || e.id >= range) {
      out.push_back({where, "outcome index out of range at " + where});
      continue;
    }
    if (!seen.insert(e.id).second) out.push_back({where, "repeated outcome at " + where});
    if (e.prob <= Rat(0)) out.push_back({where, "non-positive probability at " + where});
    if (e.prob > Rat(1)) out.push_back({where, "probability above 1 at " + where});
    sum += e.prob;
  }
  if (!sum.is_one()) {
    out.push_back({where, "distribution sum ≠ 1 at " + where + " (sum " + sum.str() + ")"});
  }
}

}  // namespace

Rat FiniteDist::prob(SymbolId id) const {
  for (const auto& e : entries) {
    if (e.id == id) return e.prob;
  }
  return Rat(0);
}

Rat FiniteDist::total() const {
  Rat sum;
  for (const auto& e : entries) sum += e.prob;
  return sum;
}

void FiniteDist::normalize_order() {
  std::sort(entries.begin(), entries.end(),
            [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
}

SymbolId Pomdp::state_id(std::string_view name) const { return lookup(states, name, "state"); }
SymbolId Pomdp::action_id(std::string_view name) const { return lookup(actions, name, "action"); }
SymbolId Pomdp::observation_id(std::string_view name) const {
  return lookup(observations, name, "observation");
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport validate(const Pomdp& p) {
  ValidationReport report;
  auto& out = report.violations;
  check_unique(p.states, "states", out);
  check_unique(p.actions, "actions", out);
  check_unique(p.observations, "observations", out);
  check_dist(p.init, p.num_states(), "init", out);

  const auto expected_rows = static_cast<std::size_t>(p.num_states() * p.num_actions());
  if (p.trans.size() != expected_rows) {
    out.push_back({"trans", "transition table has " + std::to_string(p.trans.size()) +
                                " rows, expected " + std::to_string(expected_rows)});
  } else {
    for (int s = 0; s < p.num_states(); ++s) {
      for (int a = 0; a < p.num_actions(); ++a) {
        check_dist(p.transition(s, a), p.num_states(),
                   "(" + p.states[s] + "," + p.actions[a] + ")", out);
      }
    }
  }
  if (p.obs.size() != p.states.size()) {
    out.push_back({"obs", "observation table has " + std::to_string(p.obs.size()) +
                              " rows, expected " + std::to_string(p.states.size())});
  } else {
    for (int s = 0; s < p.num_states(); ++s) {
      check_dist(p.observation(s), p.num_observations(), "obs(" + p.states[s] + ")", out);
    }
  }
  return report;
}

bool similar(const Pomdp& a, const Pomdp& b) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  return sorted(a.actions) == sorted(b.actions) &&
         sorted(a.observations) == sorted(b.observations);
}

Pomdp align_alphabets(const Pomdp& p, const Pomdp& reference) {
  if (!similar(p, reference)) {
    throw InputError("environments are not similar: action or observation sets differ");
  }
  std::vector<SymbolId> action_map(p.actions.size());
  std::vector<SymbolId> obs_map(p.observations.size());
  for (std::size_t a = 0; a < p.actions.size(); ++a) {
    action_map[a] = reference.action_id(p.actions[a]);
  }
  for (std::size_t o = 0; o < p.observations.size(); ++o) {
    obs_map[o] = reference.observation_id(p.observations[o]);
  }
  Pomdp out;
  out.states = p.states;
  out.actions = reference.actions;
  out.observations = reference.observations;
  out.init = p.init;
  out.trans.resize(p.trans.size());
  for (int s = 0; s < p.num_states(); ++s) {
    for (int a = 0; a < p.num_actions(); ++a) {
      out.transition(s, action_map[a]) = p.transition(s, a);
    }
  }
  out.obs.reserve(p.obs.size());
  for (const auto& row : p.obs) {
    FiniteDist d;
    for (const auto& e : row.entries) d.entries.push_back({obs_map[e.id], e.prob});
    d.normalize_order();
    out.obs.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------

History History::prefix(std::size_t t) const {
  History h{initial_obs, {}};
  h.steps.assign(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(std::min(t, steps.size())));
  return h;
}

History History::extended(SymbolId action, SymbolId observation) const {
  History h = *this;
  h.steps.push_back({action, observation});
  return h;
}

bool History::is_prefix_of(const History& other) const {
  if (initial_obs != other.initial_obs || steps.size() > other.steps.size()) return false;
  return std::equal(steps.begin(), steps.end(), other.steps.begin());
}

History parse_history(const Pomdp& p, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  if (tokens.empty() || tokens.size() % 2 == 0) {
    throw InputError("history must be 'o0 a1 o1 ... at ot', got '" + std::string(text) + "'");
  }
  History h{p.observation_id(tokens[0]), {}};
  for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
    h.steps.push_back({p.action_id(tokens[i]), p.observation_id(tokens[i + 1])});
  }
  return h;
}

std::string format_history(const Pomdp& p, const History& h) {
  std::string out = p.observations.at(static_cast<std::size_t>(h.initial_obs));
  for (const auto& step : h.steps) {
    out += ' ';
    out += p.actions.at(static_cast<std::size_t>(step.action));
    out += ' ';
    out += p.observations.at(static_cast<std::size_t>(step.observation));
  }
  return out;
}

std::vector<std::vector<History>> reachable_histories(const Pomdp& p, int m) {
  if (m < 0) throw PreconditionError("turn count must be non-negative");
  // Each frontier history carries the set of states it may currently be in.
  std::map<History, std::set<SymbolId>> frontier;
  for (const auto& e : p.init.entries) {
    for (const auto& o : p.observation(e.id).entries) {
      frontier[History{o.id, {}}].insert(e.id);
    }
  }
  std::vector<std::vector<History>> out;
  out.reserve(static_cast<std::size_t>(m) + 1);
  for (int t = 0;; ++t) {
    auto& level = out.emplace_back();
    for (const auto& [h, _] : frontier) level.push_back(h);
    if (t == m) break;
    std::map<History, std::set<SymbolId>> next;
    for (const auto& [h, support] : frontier) {
      for (int a = 0; a < p.num_actions(); ++a) {
        for (const SymbolId s : support) {
          for (const auto& to : p.transition(s, a).entries) {
            for (const auto& o : p.observation(to.id).entries) {
              next[h.extended(a, o.id)].insert(to.id);
            }
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

std::vector<History> decision_points(const Pomdp& p, int m) {
  std::vector<History> points;
  if (m <= 0) return points;
  const auto levels = reachable_histories(p, m - 1);
  for (const auto& level : levels) points.insert(points.end(), level.begin(), level.end());
  return points;
}

// ---------------------------------------------------------------------------

DeterministicPolicy DeterministicPolicy::constant(SymbolId action) {
  DeterministicPolicy pi;
  pi.fallback_ = action;
  return pi;
}

SymbolId DeterministicPolicy::at(const History& h) const {
  if (const auto it = decisions_.find(h); it != decisions_.end()) return it->second;
  if (fallback_) return *fallback_;
  throw PreconditionError("deterministic policy undefined at a queried history");
}

bool DeterministicPolicy::defined_at(const History& h) const {
  return fallback_.has_value() || decisions_.contains(h);
}

StochasticPolicy StochasticPolicy::constant(SymbolId action) {
  StochasticPolicy pi;
  pi.fallback_ = FiniteDist::point(action);
  return pi;
}

StochasticPolicy StochasticPolicy::uniform(int num_actions) {
  StochasticPolicy pi;
  FiniteDist d;
  for (int a = 0; a < num_actions; ++a) d.entries.push_back({a, Rat(1) / Rat(num_actions)});
  pi.fallback_ = std::move(d);
  return pi;
}

StochasticPolicy StochasticPolicy::from(const DeterministicPolicy& policy) {
  StochasticPolicy pi;
  for (const auto& [h, a] : policy.table()) pi.decisions_[h] = FiniteDist::point(a);
  if (policy.fallback()) pi.fallback_ = FiniteDist::point(*policy.fallback());
  return pi;
}

const FiniteDist& StochasticPolicy::at(const History& h) const {
  if (const auto it = decisions_.find(h); it != decisions_.end()) return it->second;
  if (fallback_) return *fallback_;
  throw PreconditionError("stochastic policy undefined at a queried history");
}

std::string format_policy_table(const Pomdp& p, const DeterministicPolicy& policy) {
  std::string out;
  for (const auto& [h, a] : policy.table()) {
    if (!out.empty()) out += ", ";
    out += format_history(p, h) + " -> " + p.actions.at(static_cast<std::size_t>(a));
  }
  if (policy.fallback()) {
    if (!out.empty()) out += ", ";
    out += "* -> " + p.actions.at(static_cast<std::size_t>(*policy.fallback()));
  }
  return out;
}

std::vector<DeterministicPolicy> enumerate_det_policies(std::span<const History> points,
                                                        int num_actions) {
  if (num_actions <= 0) throw PreconditionError("environment has no actions");
  std::vector<DeterministicPolicy> out;
  std::vector<SymbolId> digits(points.size(), 0);
  while (true) {
    DeterministicPolicy pi;
    for (std::size_t i = 0; i < points.size(); ++i) pi.set(points[i], digits[i]);
    out.push_back(std::move(pi));
    // Odometer: the last decision point varies fastest.
    std::size_t i = points.size();
    while (i > 0 && digits[i - 1] == num_actions - 1) digits[--i] = 0;
    if (i == 0) break;
    ++digits[i - 1];
  }
  return out;
}

std::vector<DeterministicPolicy> enumerate_det_policies(const Pomdp& p, int m) {
  if (m < 1) throw PreconditionError("policy enumeration requires m >= 1");
  const auto points = decision_points(p, m);
  return enumerate_det_policies(points, p.num_actions());
}

}  // namespace cfpomdp
