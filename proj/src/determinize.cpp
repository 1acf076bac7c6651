#include "cfpomdp/determinize.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "cfpomdp/errors.hpp"

namespace cfpomdp {

namespace {

void require_deterministic(const Pomdp& p) {
  if (!is_deterministic(p)) {
    throw PreconditionError("operation requires a deterministic environment");
  }
}

SymbolId successor(const Pomdp& p, SymbolId s, SymbolId a) {
  return p.transition(s, a).entries.front().id;
}

SymbolId emitted(const Pomdp& p, SymbolId s) { return p.observation(s).entries.front().id; }

bool is_absorbing(const Pomdp& p, SymbolId s) {
  for (int a = 0; a < p.num_actions(); ++a) {
    if (successor(p, s, a) != s) return false;
  }
  return true;
}

}  // namespace

bool is_deterministic(const Pomdp& p) {
  for (const auto& row : p.trans) {
    if (!row.is_point_mass()) return false;
  }
  for (const auto& row : p.obs) {
    if (!row.is_point_mass()) return false;
  }
  return true;
}

Determinization determinize_with_states(const Pomdp& p, int m) {
  if (m < 1) throw PreconditionError("determinize requires m >= 1");
  Determinization out;
  out.support = enumerate_support(p, m);
  out.env.actions = p.actions;
  out.env.observations = p.observations;

  // (env policy, turn, state) -> new id; visited entries are exactly the
  // recorded observation choices.
  std::map<std::tuple<std::size_t, int, SymbolId>, SymbolId> ids;
  for (std::size_t k = 0; k < out.support.size(); ++k) {
    std::vector<std::pair<int, SymbolId>> visited;
    for (const auto& [key, _] : out.support[k].policy.obs_choice) {
      visited.emplace_back(key.turn, key.state);
    }
    std::sort(visited.begin(), visited.end());
    for (const auto& [turn, s] : visited) {
      ids[{k, turn, s}] = out.env.num_states();
      out.states.push_back({s, k, turn});
      out.env.states.push_back(p.states[s] + ".e" + std::to_string(k) + ".t" +
                               std::to_string(turn));
    }
  }

  const int na = p.num_actions();
  out.env.trans.resize(out.states.size() * static_cast<std::size_t>(na));
  out.env.obs.resize(out.states.size());
  for (std::size_t id = 0; id < out.states.size(); ++id) {
    const auto& [s, k, turn] = out.states[id];
    const auto& ep = out.support[k].policy;
    const auto self = static_cast<SymbolId>(id);
    out.env.obs[id] = FiniteDist::point(ep.obs_choice.at({s, turn}));
    for (int a = 0; a < na; ++a) {
      SymbolId to = self;
      if (turn < m) {
        to = ids.at({k, turn + 1, ep.trans_choice.at({s, a, turn + 1})});
      }
      out.env.transition(self, a) = FiniteDist::point(to);
    }
  }
  for (std::size_t k = 0; k < out.support.size(); ++k) {
    out.env.init.entries.push_back(
        {ids.at({k, 0, out.support[k].policy.init_state}), out.support[k].prob});
  }
  out.env.init.normalize_order();
  return out;
}

Pomdp determinize(const Pomdp& p, int m) { return determinize_with_states(p, m).env; }

BehaviorMap initial_behavior_map(const Pomdp& p, SymbolId s, int m) {
  require_deterministic(p);
  if (s < 0 || s >= p.num_states()) throw InputError("unknown state for behavior map");
  const int na = p.num_actions();
  std::vector<SymbolId> responses{emitted(p, s)};
  std::vector<SymbolId> level{s};
  for (int t = 1; t <= m; ++t) {
    std::vector<SymbolId> next;
    next.reserve(level.size() * static_cast<std::size_t>(na));
    for (const SymbolId from : level) {
      for (int a = 0; a < na; ++a) {
        next.push_back(successor(p, from, a));
        responses.push_back(emitted(p, next.back()));
      }
    }
    level = std::move(next);
  }
  return BehaviorMap(na, m, std::move(responses));
}

BehaviorPartition behavior_partition(const Pomdp& p, int m) {
  require_deterministic(p);
  BehaviorPartition out;
  std::map<BehaviorMap, std::size_t> index;
  for (const auto& e : p.init.entries) {
    auto map = initial_behavior_map(p, e.id, m);
    const auto [it, inserted] = index.emplace(map, out.cells.size());
    if (inserted) out.cells.push_back({std::move(map), {}, Rat(0)});
    auto& cell = out.cells[it->second];
    cell.states.push_back(e.id);
    cell.mass += e.prob;
  }
  return out;
}

Pomdp minimize(const Pomdp& p, int m) {
  require_deterministic(p);
  const int ns = p.num_states();
  const int na = p.num_actions();

  // Absorbing states with equal observations are interchangeable.
  std::vector<SymbolId> rep(static_cast<std::size_t>(ns));
  std::iota(rep.begin(), rep.end(), 0);
  std::map<SymbolId, SymbolId> sink_by_obs;
  for (SymbolId s = 0; s < ns; ++s) {
    if (!is_absorbing(p, s)) continue;
    const auto [it, _] = sink_by_obs.emplace(emitted(p, s), s);
    rep[s] = it->second;
  }

  std::map<SymbolId, Rat> init;
  for (const auto& cell : behavior_partition(p, m).cells) {
    init[rep[cell.states.front()]] += cell.mass;
  }

  std::vector<bool> keep(static_cast<std::size_t>(ns), false);
  std::vector<SymbolId> stack;
  for (const auto& [s, _] : init) {
    keep[s] = true;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    const SymbolId s = stack.back();
    stack.pop_back();
    for (int a = 0; a < na; ++a) {
      const SymbolId to = rep[successor(p, s, a)];
      if (!keep[to]) {
        keep[to] = true;
        stack.push_back(to);
      }
    }
  }

  std::vector<SymbolId> renumber(static_cast<std::size_t>(ns), -1);
  Pomdp out;
  out.actions = p.actions;
  out.observations = p.observations;
  for (SymbolId s = 0; s < ns; ++s) {
    if (!keep[s]) continue;
    renumber[s] = out.num_states();
    out.states.push_back(p.states[s]);
  }
  out.trans.resize(out.states.size() * static_cast<std::size_t>(na));
  for (SymbolId s = 0; s < ns; ++s) {
    if (!keep[s]) continue;
    out.obs.push_back(p.observation(s));
    for (int a = 0; a < na; ++a) {
      out.transition(renumber[s], a) = FiniteDist::point(renumber[rep[successor(p, s, a)]]);
    }
  }
  for (const auto& [s, mass] : init) out.init.entries.push_back({renumber[s], mass});
  out.init.normalize_order();
  return out;
}

}  // namespace cfpomdp
