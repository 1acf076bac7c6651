#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "cfpomdp/cli.hpp"
#include "cfpomdp/determinize.hpp"
#include "cfpomdp/env_format.hpp"
#include "cfpomdp/env_policy.hpp"
#include "cfpomdp/equivalence.hpp"
#include "cfpomdp/errors.hpp"
#include "cfpomdp/learning.hpp"
#include "cfpomdp/simulate.hpp"
#include "cfpomdp/trajectory.hpp"

namespace py = pybind11;
using namespace cfpomdp;

namespace {

py::object fraction(const Rat& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::int_(py::str(r.numerator().get_str())), py::int_(py::str(r.denominator().get_str())));
}

// Accepts Fraction, int or "p/q".
Rat to_rat(const py::handle& value) { return Rat::parse(py::str(value).cast<std::string>()); }

std::map<SymbolId, Rat> to_weights(const Pomdp& env, const py::dict& weights) {
  std::map<SymbolId, Rat> out;
  for (const auto& [k, v] : weights) out[env.state_id(k.cast<std::string>())] = to_rat(v);
  return out;
}

py::dict from_weights(const PureLearningSpec& spec) {
  py::dict out;
  for (const auto& [s, w] : spec.weights) out[py::str(spec.env.states[s])] = fraction(w);
  return out;
}

py::object witness(const Pomdp& p, const Verdict& v) {
  if (const auto* w = std::get_if<ConditionalWitness>(&v.witness)) {
    py::dict d;
    d["h_short"] = format_history(p, w->h_short);
    d["h_long"] = format_history(p, w->h_long);
    d["policy"] = format_policy_table(p, w->policy);
    d["left"] = fraction(w->left);
    d["right"] = fraction(w->right);
    return std::move(d);
  }
  if (const auto* w = std::get_if<CollectionWitness>(&v.witness)) {
    py::list pairs;
    for (const auto& [h, pi] : w->pairs) {
      pairs.append(py::make_tuple(format_history(p, h), format_policy_table(p, pi)));
    }
    py::dict d;
    d["pairs"] = pairs;
    d["left"] = fraction(w->left);
    d["right"] = fraction(w->right);
    return std::move(d);
  }
  return py::none();
}

py::dict describe(const Pomdp& p, const WeightedEnvPolicy& w) {
  py::dict trans;
  for (const auto& [k, to] : w.policy.trans_choice) {
    trans[py::make_tuple(p.states[k.state], p.actions[k.action], k.turn)] = p.states[to];
  }
  py::dict obs;
  for (const auto& [k, o] : w.policy.obs_choice) {
    obs[py::make_tuple(p.states[k.state], k.turn)] = p.observations[o];
  }
  py::dict d;
  d["prob"] = fraction(w.prob);
  d["init"] = p.states[w.policy.init_state];
  d["transitions"] = trans;
  d["observations"] = obs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact POMDP equivalence, determinization and learning";

  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<PreconditionError> precondition_error(m, "PreconditionError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr e) {
    try {
      if (e) std::rethrow_exception(e);
    } catch (const InputError& x) {
      PyErr_SetString(input_error.ptr(), x.what());
    } catch (const PreconditionError& x) {
      PyErr_SetString(precondition_error.ptr(), x.what());
    }
  });

  py::class_<Pomdp>(m, "Environment")
      .def_static("load", &load_env, py::arg("path"))
      .def_static("parse", [](const std::string& text) { return parse_env(text); }, py::arg("text"))
      .def_readonly("states", &Pomdp::states)
      .def_readonly("actions", &Pomdp::actions)
      .def_readonly("observations", &Pomdp::observations)
      .def("serialize", &serialize_env)
      .def("save", &save_env, py::arg("path"))
      .def("is_deterministic", &is_deterministic)
      .def("validate", [](const Pomdp& p) {
        std::vector<std::string> out;
        for (const auto& v : validate(p).violations) out.push_back(v.message);
        return out;
      })
      .def("initial_distribution", [](const Pomdp& p) {
        py::dict d;
        for (const auto& e : p.init.entries) d[py::str(p.states[e.id])] = fraction(e.prob);
        return d;
      })
      .def("__eq__", [](const Pomdp& a, const Pomdp& b) { return a == b; })
      .def("__repr__", [](const Pomdp& p) {
        return "<Environment " + std::to_string(p.num_states()) + " states>";
      });

  m.def("equiv", [](const Pomdp& a, const Pomdp& b, int horizon) {
    const Verdict v = check_equiv(a, b, horizon);
    return py::make_tuple(v.equivalent, witness(a, v));
  }, py::arg("a"), py::arg("b"), py::arg("m"));

  m.def("cf_equiv", [](const Pomdp& a, const Pomdp& b, int horizon) {
    const Verdict v = check_cf_equiv(a, b, horizon);
    return py::make_tuple(v.equivalent, witness(a, v));
  }, py::arg("a"), py::arg("b"), py::arg("m"));

  m.def("determinize", [](const Pomdp& p, int horizon, bool do_minimize) {
    Pomdp d = determinize(p, horizon);
    return do_minimize ? minimize(d, horizon) : d;
  }, py::arg("env"), py::arg("m"), py::arg("minimize") = false);

  m.def("minimize", &minimize, py::arg("env"), py::arg("m"));

  m.def("env_policies", [](const Pomdp& p, int horizon) {
    py::list out;
    for (const auto& w : enumerate_support(p, horizon)) out.append(describe(p, w));
    return out;
  }, py::arg("env"), py::arg("m"));

  m.def("count_env_policies", [](const Pomdp& p, int horizon, const std::string& convention) {
    if (convention != "full" && convention != "transition-only") {
      throw InputError("convention must be 'full' or 'transition-only'");
    }
    const auto conv = convention == "full" ? CountConvention::full : CountConvention::transition_only;
    return py::int_(py::str(count_env_policies(p, horizon, conv).get_str()));
  }, py::arg("env"), py::arg("m"), py::arg("convention") = "full");

  m.def("history_prob", [](const Pomdp& p, const std::string& history, const std::string& policy) {
    return fraction(history_prob(p, parse_history(p, history),
                                 StochasticPolicy::from(parse_policy_arg(p, policy))));
  }, py::arg("env"), py::arg("history"), py::arg("policy"));

  m.def("posterior", [](const Pomdp& p, const std::string& history) {
    const auto post = initial_posterior(p, parse_history(p, history));
    py::dict d;
    for (int s = 0; s < p.num_states(); ++s) d[py::str(p.states[s])] = fraction(post[s]);
    return d;
  }, py::arg("env"), py::arg("history"));

  m.def("collection_prob", [](const Pomdp& p, int horizon,
                              const std::vector<std::pair<std::string, std::string>>& pairs) {
    CollectionQuery q;
    for (const auto& [h, pi] : pairs) {
      q.push_back({parse_history(p, h), StochasticPolicy::from(parse_policy_arg(p, pi))});
    }
    return fraction(collection_prob(p, q, horizon));
  }, py::arg("env"), py::arg("m"), py::arg("pairs"));

  m.def("learn", [](const Pomdp& p, const py::dict& weights, const std::string& history, int horizon) {
    PureLearningSpec spec{p, to_weights(p, weights), horizon};
    check_learning_spec(spec);
    return fraction(evaluate(spec, parse_history(p, history)));
  }, py::arg("env"), py::arg("weights"), py::arg("history"), py::arg("m"));

  m.def("learn_transfer", [](const Pomdp& source, const Pomdp& target, const py::dict& weights,
                             int horizon) {
    PureLearningSpec spec{source, to_weights(source, weights), horizon};
    const auto report = verify_universality(spec, target, horizon);
    return py::make_tuple(report.holds, from_weights(report.transferred));
  }, py::arg("source"), py::arg("target"), py::arg("weights"), py::arg("m"));

  m.def("simulate", [](const Pomdp& p, int horizon, const std::vector<std::string>& policies,
                       std::uint64_t episodes, std::uint64_t seed) {
    std::vector<DeterministicPolicy> agents;
    for (const auto& arg : policies) agents.push_back(parse_policy_arg(p, arg));
    const auto report = simulate(p, horizon, agents, episodes, seed);
    py::list rows;
    for (const auto& row : report.rows) {
      py::list hs;
      for (const auto& h : row.histories) hs.append(format_history(p, h));
      py::dict d;
      d["histories"] = py::tuple(hs);
      d["count"] = row.count;
      d["frequency"] = row.frequency(report.episodes);
      d["exact"] = fraction(row.exact);
      d["std_error"] = row.std_error(report.episodes);
      rows.append(d);
    }
    return rows;
  }, py::arg("env"), py::arg("m"), py::arg("policies"), py::arg("episodes"), py::arg("seed"));
}
