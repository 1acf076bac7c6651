#include "cfpomdp/env_format.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "cfpomdp/errors.hpp"

namespace cfpomdp {

namespace {

struct Line {
  int number;
  std::string keyword;
  std::string body;
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

// "<id> <rat> [| <id> <rat> ...]"
template <typename Lookup>
FiniteDist parse_dist(const Line& line, std::string_view text, Lookup&& lookup) {
  FiniteDist d;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto bar = text.find('|', start);
    const auto part = text.substr(start, bar == std::string_view::npos ? std::string_view::npos
                                                                        : bar - start);
    const auto tokens = tokenize(part);
    if (tokens.size() != 2) fail(line.number, "expected '<id> <rational>' in distribution");
    try {
      d.entries.push_back({lookup(tokens[0]), Rat::parse(tokens[1])});
    } catch (const InputError& e) {
      fail(line.number, e.what());
    }
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  d.normalize_order();
  return d;
}

std::pair<std::string, std::string> split_arrow(const Line& line) {
  const auto arrow = line.body.find("->");
  if (arrow == std::string::npos) fail(line.number, "expected '->' in " + line.keyword + " line");
  return {line.body.substr(0, arrow), line.body.substr(arrow + 2)};
}

std::string format_dist(const FiniteDist& d, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& e : d.entries) {
    if (!out.empty()) out += " | ";
    out += names.at(static_cast<std::size_t>(e.id)) + " " + e.prob.str();
  }
  return out;
}

bool has_duplicates(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  return std::adjacent_find(names.begin(), names.end()) != names.end();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace

Pomdp parse_env_unchecked(std::string_view text) {
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    for (int n = 1; std::getline(in, raw); ++n) {
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto colon = raw.find(':');
      if (colon == std::string::npos) fail(n, "expected '<keyword>: ...'");
      auto keyword = tokenize(raw.substr(0, colon));
      if (keyword.size() != 1) fail(n, "malformed keyword");
      lines.push_back({n, keyword.front(), raw.substr(colon + 1)});
    }
  }

  Pomdp p;
  bool have_states = false;
  bool have_actions = false;
  bool have_observations = false;
  for (const auto& line : lines) {
    auto set_list = [&](std::vector<std::string>& target, bool& seen) {
      if (seen) fail(line.number, "repeated '" + line.keyword + "' line");
      seen = true;
      target = tokenize(line.body);
    };
    if (line.keyword == "states") set_list(p.states, have_states);
    else if (line.keyword == "actions") set_list(p.actions, have_actions);
    else if (line.keyword == "observations") set_list(p.observations, have_observations);
    else if (line.keyword != "init" && line.keyword != "obs" && line.keyword != "trans") {
      fail(line.number, "unknown keyword '" + line.keyword + "'");
    }
  }
  if (!have_states || !have_actions || !have_observations) {
    throw InputError("environment must declare states, actions and observations");
  }

  auto state = [&](const std::string& n) { return p.state_id(n); };
  auto observation = [&](const std::string& n) { return p.observation_id(n); };
  const auto ns = static_cast<std::size_t>(p.num_states());
  const auto na = static_cast<std::size_t>(p.num_actions());
  p.trans.resize(ns * na);
  p.obs.resize(ns);
  std::vector<bool> trans_seen(ns * na, false);
  std::vector<bool> obs_seen(ns, false);
  bool init_seen = false;

  for (const auto& line : lines) {
    try {
      if (line.keyword == "init") {
        if (init_seen) fail(line.number, "repeated 'init' line");
        init_seen = true;
        p.init = parse_dist(line, line.body, state);
      } else if (line.keyword == "obs") {
        const auto [lhs, rhs] = split_arrow(line);
        const auto head = tokenize(lhs);
        if (head.size() != 1) fail(line.number, "expected 'obs: <state> -> ...'");
        const auto s = static_cast<std::size_t>(p.state_id(head[0]));
        if (obs_seen[s]) fail(line.number, "repeated obs line for '" + head[0] + "'");
        obs_seen[s] = true;
        p.obs[s] = parse_dist(line, rhs, observation);
      } else if (line.keyword == "trans") {
        const auto [lhs, rhs] = split_arrow(line);
        const auto head = tokenize(lhs);
        if (head.size() != 2) fail(line.number, "expected 'trans: <state> <action> -> ...'");
        const auto row = static_cast<std::size_t>(p.state_id(head[0])) * na +
                         static_cast<std::size_t>(p.action_id(head[1]));
        if (trans_seen[row]) {
          fail(line.number, "repeated trans line for (" + head[0] + "," + head[1] + ")");
        }
        trans_seen[row] = true;
        p.trans[row] = parse_dist(line, rhs, state);
      }
    } catch (const InputError& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      fail(line.number, what);
    }
  }
  if (!init_seen) throw InputError("missing 'init' line");
  // Rows of a repeated identifier cannot be told apart; leave them to validate().
  if (has_duplicates(p.states) || has_duplicates(p.actions)) return p;
  for (std::size_t s = 0; s < ns; ++s) {
    if (!obs_seen[s]) throw InputError("missing obs line for state '" + p.states[s] + "'");
    for (std::size_t a = 0; a < na; ++a) {
      if (!trans_seen[s * na + a]) {
        throw InputError("missing trans line for (" + p.states[s] + "," + p.actions[a] + ")");
      }
    }
  }
  return p;
}

Pomdp parse_env(std::string_view text) {
  Pomdp p = parse_env_unchecked(text);
  const auto report = validate(p);
  if (!report.ok()) throw InputError("invalid environment: " + report.summary());
  return p;
}

std::string serialize_env(const Pomdp& p) {
  std::ostringstream out;
  out << "states: " << join(p.states) << "\n";
  out << "actions: " << join(p.actions) << "\n";
  out << "observations: " << join(p.observations) << "\n";
  out << "init: " << format_dist(p.init, p.states) << "\n";
  for (int s = 0; s < p.num_states(); ++s) {
    out << "obs: " << p.states[s] << " -> " << format_dist(p.observation(s), p.observations)
        << "\n";
  }
  for (int s = 0; s < p.num_states(); ++s) {
    for (int a = 0; a < p.num_actions(); ++a) {
      out << "trans: " << p.states[s] << " " << p.actions[a] << " -> "
          << format_dist(p.transition(s, a), p.states) << "\n";
    }
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Pomdp load_env(const std::string& path) {
  try {
    return parse_env(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void save_env(const Pomdp& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << serialize_env(p);
}

}  // namespace cfpomdp
