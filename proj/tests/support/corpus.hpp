#pragma once

#include <string>

#include "cfpomdp/env_format.hpp"
#include "cfpomdp/pomdp.hpp"

namespace cfpomdp::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(CFPOMDP_CORPUS_DIR) + "/" + name;
}

inline Pomdp corpus(const std::string& name) { return load_env(corpus_path(name)); }

inline Pomdp mu() { return corpus("mu.env"); }
inline Pomdp mu_prime() { return corpus("mu-prime.env"); }
inline Pomdp mu_double_prime() { return corpus("mu-double-prime.env"); }
inline Pomdp mu_star() { return corpus("mu-star.env"); }

/// Short history literal against p's alphabets.
inline History hist(const Pomdp& p, const std::string& text) { return parse_history(p, text); }

}  // namespace cfpomdp::testing
