#include "cfpomdp/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cfpomdp/determinize.hpp"
#include "cfpomdp/env_format.hpp"
#include "cfpomdp/env_policy.hpp"
#include "cfpomdp/equivalence.hpp"
#include "cfpomdp/errors.hpp"
#include "cfpomdp/learning.hpp"
#include "cfpomdp/simulate.hpp"
#include "cfpomdp/trajectory.hpp"

namespace cfpomdp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void add_policy_entry(const Pomdp& p, DeterministicPolicy& pi, std::string_view entry,
                      std::optional<SymbolId>& fallback) {
  const auto arrow = entry.find("->");
  if (arrow == std::string_view::npos) {
    throw InputError("policy entry '" + std::string(entry) + "' lacks '->'");
  }
  const std::string lhs = trim(entry.substr(0, arrow));
  const SymbolId action = p.action_id(trim(entry.substr(arrow + 2)));
  if (lhs == "*") {
    fallback = action;
  } else {
    pi.set(parse_history(p, lhs), action);
  }
}

DeterministicPolicy with_fallback(const DeterministicPolicy& table, std::optional<SymbolId> fb) {
  if (!fb) return table;
  DeterministicPolicy pi = DeterministicPolicy::constant(*fb);
  for (const auto& [h, a] : table.table()) pi.set(h, a);
  return pi;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string describe(const Pomdp& p, const EnvironmentPolicy& ep) {
  std::string out = "init=" + p.states[ep.init_state];
  for (const auto& [k, to] : ep.trans_choice) {
    out += " T(" + p.states[k.state] + "," + p.actions[k.action] + "," + std::to_string(k.turn) +
           ")=" + p.states[to];
  }
  for (const auto& [k, o] : ep.obs_choice) {
    out += " O(" + p.states[k.state] + "," + std::to_string(k.turn) + ")=" + p.observations[o];
  }
  return out;
}

void print_conditional_witness(const Pomdp& p, const ConditionalWitness& w, std::ostream& out) {
  out << "witness: " << format_history(p, w.h_long) << " given " << format_history(p, w.h_short)
      << " | " << format_policy_table(p, w.policy) << " | " << w.left << " | " << w.right
      << "\n";
}

void print_collection_witness(const Pomdp& p, const CollectionWitness& w, std::ostream& out) {
  out << "witness: " << w.pairs.size() << " pairs, joint probability " << w.left << " vs "
      << w.right << "\n";
  for (const auto& [h, pi] : w.pairs) {
    out << format_history(p, h) << " | " << format_policy_table(p, pi) << " | " << w.left
        << " | " << w.right << "\n";
  }
}

struct Options {
  std::string file1;
  std::string file2;
  std::string output;
  std::string weights;
  std::string history;
  std::string convention = "full";
  std::vector<std::string> pairs;
  std::vector<std::string> policies;
  int m = 1;
  int agents = 1;
  std::uint64_t episodes = 10000;
  std::uint64_t seed = 0;
  bool witness = false;
  bool do_minimize = false;
  bool count_only = false;
  bool verify = false;
};

int cmd_validate(const Options& o, std::ostream& out) {
  const Pomdp p = parse_env_unchecked(read_text_file(o.file1));
  const auto report = validate(p);
  if (report.ok()) {
    out << "ok\n";
    return kExitOk;
  }
  for (const auto& v : report.violations) out << "violation: " << v.message << "\n";
  return kExitNegative;
}

int cmd_equiv(const Options& o, std::ostream& out) {
  const Pomdp p1 = load_env(o.file1);
  const Pomdp p2 = load_env(o.file2);
  const Verdict v = check_equiv(p1, p2, o.m);
  if (v.equivalent) {
    out << "equivalent (m=" << o.m << ")\n";
    return kExitOk;
  }
  out << "not equivalent (m=" << o.m << ")\n";
  print_conditional_witness(p1, std::get<ConditionalWitness>(v.witness), out);
  return kExitNegative;
}

int cmd_cf_equiv(const Options& o, std::ostream& out) {
  const Pomdp p1 = load_env(o.file1);
  const Pomdp p2 = load_env(o.file2);
  const Verdict v = check_cf_equiv(p1, p2, o.m);
  if (v.equivalent) {
    out << "counterfactually equivalent (m=" << o.m << ")\n";
    return kExitOk;
  }
  out << "not counterfactually equivalent (m=" << o.m << ")\n";
  if (o.witness) print_collection_witness(p1, std::get<CollectionWitness>(v.witness), out);
  return kExitNegative;
}

int cmd_determinize(const Options& o, std::ostream& out) {
  const Pomdp p = load_env(o.file1);
  Pomdp det = determinize(p, o.m);
  if (o.do_minimize) det = minimize(det, o.m);
  save_env(det, o.output);
  out << "wrote " << o.output << ": " << det.num_states() << " states, "
      << det.init.entries.size() << " initial states\n";
  return kExitOk;
}

int cmd_env_policies(const Options& o, std::ostream& out) {
  const Pomdp p = load_env(o.file1);
  if (o.count_only) {
    const auto conv =
        o.convention == "transition-only" ? CountConvention::transition_only : CountConvention::full;
    out << count_env_policies(p, o.m, conv).get_str() << "\n";
    return kExitOk;
  }
  const auto support = enumerate_support(p, o.m);
  out << "support policies: " << support.size() << "\n";
  for (std::size_t k = 0; k < support.size(); ++k) {
    out << "[" << k << "] " << support[k].prob << " " << describe(p, support[k].policy) << "\n";
  }
  return kExitOk;
}

int cmd_posterior(const Options& o, std::ostream& out) {
  const Pomdp p = load_env(o.file1);
  const auto post = initial_posterior(p, parse_history(p, o.history));
  for (int s = 0; s < p.num_states(); ++s) out << p.states[s] << " " << post[s] << "\n";
  return kExitOk;
}

int cmd_collection_prob(const Options& o, std::ostream& out) {
  const Pomdp p = load_env(o.file1);
  CollectionQuery q;
  for (const auto& pair : o.pairs) {
    const auto semi = pair.find(';');
    if (semi == std::string::npos) throw InputError("--pair expects \"HIST ; POLICY\"");
    q.push_back({parse_history(p, pair.substr(0, semi)),
                 StochasticPolicy::from(parse_policy_arg(p, trim(pair.substr(semi + 1))))});
  }
  if (q.empty()) throw InputError("collection-prob needs at least one --pair");
  out << collection_prob(p, q, o.m) << "\n";
  return kExitOk;
}

PureLearningSpec load_spec(const std::string& env_path, const std::string& weights_path, int m) {
  PureLearningSpec spec{load_env(env_path), {}, m};
  spec.weights = parse_weights(spec.env, read_text_file(weights_path));
  check_learning_spec(spec);
  return spec;
}

int cmd_learn(const Options& o, std::ostream& out) {
  const auto spec = load_spec(o.file1, o.weights, o.m);
  out << evaluate(spec, parse_history(spec.env, o.history)) << "\n";
  return kExitOk;
}

int cmd_learn_transfer(const Options& o, std::ostream& out) {
  const auto spec = load_spec(o.file1, o.weights, o.m);
  const Pomdp target = load_env(o.file2);
  if (o.verify) {
    const auto report = verify_universality(spec, target, o.m);
    std::ofstream(o.output) << format_weights(report.transferred);
    if (!report.holds) {
      out << "universality fails at " << format_history(spec.env, *report.first_difference)
          << "\n";
      return kExitNegative;
    }
    out << "universality holds (m=" << o.m << ")\n";
    return kExitOk;
  }
  const auto transferred = transfer(spec, target, o.m);
  std::ofstream file(o.output);
  if (!file) throw InputError("cannot write '" + o.output + "'");
  file << format_weights(transferred);
  out << "wrote " << o.output << "\n";
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Pomdp p = load_env(o.file1);
  std::vector<DeterministicPolicy> agents;
  for (const auto& arg : o.policies) agents.push_back(parse_policy_arg(p, arg));
  if (agents.size() == 1 && o.agents > 1) agents.resize(static_cast<std::size_t>(o.agents), agents[0]);
  if (static_cast<int>(agents.size()) != o.agents) {
    throw InputError("--agents must match the number of --policy arguments");
  }
  const auto report = simulate(p, o.m, agents, o.episodes, o.seed);
  out << "episodes " << report.episodes << " seed " << report.seed << "\n";
  out << "count | frequency | exact | stderr | histories\n";
  for (const auto& row : report.rows) {
    out << row.count << " | " << format_double(row.frequency(report.episodes)) << " | "
        << row.exact << " | " << format_double(row.std_error(report.episodes));
    for (const auto& h : row.histories) out << " | " << format_history(p, h);
    out << "\n";
  }
  return kExitOk;
}

}  // namespace

DeterministicPolicy parse_policy_arg(const Pomdp& p, const std::string& arg) {
  const std::string text = trim(arg);
  if (text.find("->") == std::string::npos) {
    for (const auto& name : p.actions) {
      if (name == text) return DeterministicPolicy::constant(p.action_id(text));
    }
    // Not an action id: a policy file.
    DeterministicPolicy pi;
    std::optional<SymbolId> fallback;
    std::istringstream in(read_text_file(text));
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (trim(line).empty()) continue;
      try {
        add_policy_entry(p, pi, line, fallback);
      } catch (const InputError& e) {
        throw InputError(text + " line " + std::to_string(n) + ": " + e.what());
      }
    }
    return with_fallback(pi, fallback);
  }
  DeterministicPolicy pi;
  std::optional<SymbolId> fallback;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto entry = trim(std::string_view(text).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!entry.empty()) add_policy_entry(p, pi, entry, fallback);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return with_fallback(pi, fallback);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact equivalence, determinization and learning tools for finite POMDPs",
               "cfpomdp"};
  app.require_subcommand(1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "Check an environment file");
  validate_cmd->add_option("FILE", o.file1)->required();

  auto* equiv = app.add_subcommand("equiv", "Decide m-equivalence");
  equiv->add_option("FILE1", o.file1)->required();
  equiv->add_option("FILE2", o.file2)->required();
  equiv->add_option("--m", o.m)->required()->check(CLI::NonNegativeNumber);

  auto* cf = app.add_subcommand("cf-equiv", "Decide m-counterfactual equivalence");
  cf->add_option("FILE1", o.file1)->required();
  cf->add_option("FILE2", o.file2)->required();
  cf->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  cf->add_flag("--witness", o.witness, "Print a separating collection");

  auto* det = app.add_subcommand("determinize", "Build the deterministic equivalent");
  det->add_option("FILE", o.file1)->required();
  det->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  det->add_option("-o", o.output)->required();
  det->add_flag("--minimize", o.do_minimize);

  auto* eps = app.add_subcommand("env-policies", "List or count environment policies");
  eps->add_option("FILE", o.file1)->required();
  eps->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  eps->add_flag("--count-only", o.count_only);
  eps->add_option("--convention", o.convention)
      ->check(CLI::IsMember({"full", "transition-only"}));

  auto* post = app.add_subcommand("posterior", "Posterior over the initial state");
  post->add_option("FILE", o.file1)->required();
  post->add_option("--history", o.history)->required();

  auto* coll = app.add_subcommand("collection-prob", "Joint probability of a collection");
  coll->add_option("FILE", o.file1)->required();
  coll->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  coll->add_option("--pair", o.pairs, "\"HIST ; POLICY\"")->required();

  auto* learn = app.add_subcommand("learn", "Evaluate a pure learning process");
  learn->add_option("FILE", o.file1)->required();
  learn->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  learn->add_option("--weights", o.weights)->required();
  learn->add_option("--history", o.history)->required();

  auto* lt = app.add_subcommand("learn-transfer", "Transfer weights to another environment");
  lt->add_option("SRC", o.file1)->required();
  lt->add_option("TGT", o.file2)->required();
  lt->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  lt->add_option("--weights", o.weights)->required();
  lt->add_option("-o", o.output)->required();
  lt->add_flag("--verify", o.verify);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo cross-check of joint histories");
  sim->add_option("FILE", o.file1)->required();
  sim->add_option("--m", o.m)->required()->check(CLI::PositiveNumber);
  sim->add_option("--agents", o.agents)->required()->check(CLI::PositiveNumber);
  sim->add_option("--policy", o.policies)->required();
  sim->add_option("--episodes", o.episodes)->required();
  sim->add_option("--seed", o.seed)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (equiv->parsed()) return cmd_equiv(o, out);
    if (cf->parsed()) return cmd_cf_equiv(o, out);
    if (det->parsed()) return cmd_determinize(o, out);
    if (eps->parsed()) return cmd_env_policies(o, out);
    if (post->parsed()) return cmd_posterior(o, out);
    if (coll->parsed()) return cmd_collection_prob(o, out);
    if (learn->parsed()) return cmd_learn(o, out);
    if (lt->parsed()) return cmd_learn_transfer(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cfpomdp
