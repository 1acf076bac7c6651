#pragma once

#include <string>
#include <string_view>

#include "cfpomdp/pomdp.hpp"

namespace cfpomdp {

/// Line-oriented environment format ('#' starts a comment):
///
///   states: <id> <id> ...
///   actions: <id> ...
///   observations: <id> ...
///   init: <state> <rat> [| <state> <rat> ...]
///   obs: <state> -> <observation> <rat> [| ...]
///   trans: <state> <action> -> <state> <rat> [| ...]
///
/// Rationals are "p/q" or an integer. Parsing validates the result and
/// throws InputError (with a line number for syntax errors).
Pomdp parse_env(std::string_view text);

/// Syntax-only parse; the caller is responsible for validate().
Pomdp parse_env_unchecked(std::string_view text);

std::string serialize_env(const Pomdp& p);

Pomdp load_env(const std::string& path);
void save_env(const Pomdp& p, const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace cfpomdp
