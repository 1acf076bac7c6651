#include "cfpomdp/learning.hpp"

#include <set>
#include <sstream>

#include "cfpomdp/determinize.hpp"
#include "cfpomdp/equivalence.hpp"
#include "cfpomdp/errors.hpp"
#include "cfpomdp/trajectory.hpp"

namespace cfpomdp {

namespace {

const BehaviorCell* find_cell(const BehaviorPartition& partition, const BehaviorMap& map) {
  for (const auto& cell : partition.cells) {
    if (cell.map == map) return &cell;
  }
  return nullptr;
}

Rat weighted_mass(const PureLearningSpec& spec, const BehaviorCell& cell) {
  Rat sum;
  for (const SymbolId s : cell.states) {
    const auto it = spec.weights.find(s);
    if (it != spec.weights.end()) sum += spec.env.init.prob(s) * it->second;
  }
  return sum;
}

}  // namespace

void check_learning_spec(const PureLearningSpec& spec) {
  if (!is_deterministic(spec.env)) {
    throw PreconditionError("pure learning process requires a deterministic environment");
  }
  for (const auto& [s, w] : spec.weights) {
    if (s < 0 || s >= spec.env.num_states()) throw PreconditionError("weight for unknown state");
    if (!w.is_probability()) {
      throw PreconditionError("weight for '" + spec.env.states[s] + "' is outside [0,1]");
    }
  }
  for (const auto& e : spec.env.init.entries) {
    if (!spec.weights.contains(e.id)) {
      throw PreconditionError("missing weight for initial state '" + spec.env.states[e.id] + "'");
    }
  }
}

Rat evaluate(const PureLearningSpec& spec, const History& h) {
  check_history_symbols(spec.env, h);
  if (static_cast<int>(h.length()) > spec.horizon) {
    throw PreconditionError("history exceeds the learning process horizon");
  }
  const auto posterior = initial_posterior(spec.env, h);
  Rat value;
  for (const auto& [s, w] : spec.weights) value += w * posterior[s];
  return value;
}

PureLearningSpec transfer(const PureLearningSpec& spec, const Pomdp& target, int m) {
  check_learning_spec(spec);
  if (spec.horizon != m) throw PreconditionError("transfer horizon differs from the spec horizon");
  if (!is_deterministic(target)) throw PreconditionError("transfer target must be deterministic");
  if (!similar(spec.env, target)) throw PreconditionError("transfer target is not similar");
  if (!check_cf_equiv(spec.env, target, m).equivalent) {
    throw PreconditionError("transfer target is not m-counterfactually equivalent");
  }
  const Pomdp aligned = align_alphabets(target, spec.env);
  const auto source_cells = behavior_partition(spec.env, m);
  const auto target_cells = behavior_partition(aligned, m);

  PureLearningSpec out{target, {}, m};
  for (SymbolId s = 0; s < target.num_states(); ++s) out.weights[s] = Rat(0);
  for (const auto& cell : target_cells.cells) {
    const BehaviorCell* source = find_cell(source_cells, cell.map);
    if (source == nullptr) throw InternalError("target behavior cell has no source counterpart");
    if (source->mass != cell.mass) throw InternalError("matched behavior cells differ in mass");
    const Rat average = weighted_mass(spec, *source) / source->mass;
    for (const SymbolId s : cell.states) out.weights[s] = average;
  }
  return out;
}

UniversalityReport verify_universality(const PureLearningSpec& spec, const Pomdp& target,
                                       int m) {
  UniversalityReport report;
  report.transferred = transfer(spec, target, m);
  PureLearningSpec aligned = report.transferred;
  aligned.env = align_alphabets(target, spec.env);

  std::set<History> histories;
  for (const Pomdp* env : {&spec.env, static_cast<const Pomdp*>(&aligned.env)}) {
    for (const auto& level : reachable_histories(*env, m)) {
      histories.insert(level.begin(), level.end());
    }
  }
  for (const auto& h : histories) {
    if (evaluate(spec, h) != evaluate(aligned, h)) {
      report.holds = false;
      report.first_difference = h;
      break;
    }
  }
  return report;
}

std::vector<std::pair<Rat, Rat>> cell_mass_identities(const PureLearningSpec& source,
                                                      const PureLearningSpec& target) {
  PureLearningSpec aligned = target;
  aligned.env = align_alphabets(target.env, source.env);
  const auto source_cells = behavior_partition(source.env, source.horizon);
  const auto target_cells = behavior_partition(aligned.env, source.horizon);
  std::vector<std::pair<Rat, Rat>> out;
  for (const auto& cell : source_cells.cells) {
    const BehaviorCell* match = find_cell(target_cells, cell.map);
    if (match == nullptr) throw InternalError("source behavior cell has no target counterpart");
    out.emplace_back(weighted_mass(source, cell), weighted_mass(aligned, *match));
  }
  return out;
}

std::map<SymbolId, Rat> parse_weights(const Pomdp& env, std::string_view text) {
  std::map<SymbolId, Rat> weights;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string state;
    std::string value;
    std::string extra;
    if (!(fields >> state)) continue;
    if (!(fields >> value) || (fields >> extra)) {
      throw InputError("weights line " + std::to_string(lineno) + ": expected 'state p/q'");
    }
    try {
      const SymbolId s = env.state_id(state);
      if (!weights.emplace(s, Rat::parse(value)).second) {
        throw InputError("duplicate weight for '" + state + "'");
      }
    } catch (const InputError& e) {
      throw InputError("weights line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return weights;
}

std::string format_weights(const PureLearningSpec& spec) {
  std::string out;
  for (const auto& [s, w] : spec.weights) out += spec.env.states[s] + " " + w.str() + "\n";
  return out;
}

}  // namespace cfpomdp
