#include <gtest/gtest.h>

#include <random>

#include "cfpomdp/env_format.hpp"
#include "cfpomdp/errors.hpp"
#include "support/corpus.hpp"
#include "support/random_env.hpp"

namespace cfpomdp {
namespace {

constexpr const char* kCoin = R"(states: h t
actions: flip
observations: H T
init: h 1/2 | t 1/2
obs: h -> H 1
obs: t -> T 1
trans: h flip -> h 1/2 | t 1/2
trans: t flip -> t 1
)";

std::string expect_input_error(const std::string& text) {
  try {
    parse_env(text);
  } catch (const InputError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no InputError for:\n" << text;
  return {};
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

TEST(ParseEnv, Coin) {
  const Pomdp p = parse_env(kCoin);
  EXPECT_EQ(p.num_states(), 2);
  EXPECT_EQ(p.init.prob(p.state_id("t")), Rat(1) / Rat(2));
  EXPECT_EQ(p.transition(p.state_id("h"), 0).prob(p.state_id("t")), Rat(1) / Rat(2));
}

TEST(ParseEnv, CorpusFilesValidate) {
  for (const char* name : {"mu.env", "mu-prime.env", "mu-double-prime.env", "mu-star.env"}) {
    EXPECT_TRUE(validate(testing::corpus(name)).ok()) << name;
  }
  EXPECT_EQ(testing::mu_star().num_states(), 8);
}

TEST(ParseEnv, SyntaxErrorsCarryLineNumbers) {
  EXPECT_NE(expect_input_error(replace(kCoin, "init: h 1/2", "init: h 0.5")).find("line 4"),
            std::string::npos);
  EXPECT_NE(expect_input_error(replace(kCoin, "obs: h -> H 1", "obs: h H 1")).find("line 5"),
            std::string::npos);
  EXPECT_NE(expect_input_error(replace(kCoin, "obs: t -> T 1", "obs: t -> Q 1")).find("line 6"),
            std::string::npos);
  EXPECT_NE(expect_input_error(std::string(kCoin) + "colour: red\n").find("unknown keyword"),
            std::string::npos);
  EXPECT_NE(expect_input_error(std::string(kCoin) + "obs: t -> T 1\n").find("repeated"),
            std::string::npos);
}

TEST(ParseEnv, StructuralErrors) {
  EXPECT_NE(expect_input_error(replace(kCoin, "trans: t flip -> t 1\n", "")).find("missing trans"),
            std::string::npos);
  EXPECT_NE(expect_input_error(replace(kCoin, "init: h 1/2 | t 1/2", "init: h 1/2 | t 1/3"))
                .find("distribution sum"),
            std::string::npos);
  EXPECT_NE(expect_input_error(replace(kCoin, "states: h t", "states: h t h")).find("duplicate"),
            std::string::npos);
  EXPECT_NE(expect_input_error(replace(kCoin, "init: h 1/2 | t 1/2", "init: h 0 | t 1"))
                .find("invalid environment"),
            std::string::npos);
}

TEST(ParseEnv, UncheckedKeepsInvalidProbabilities) {
  const Pomdp p = parse_env_unchecked(replace(kCoin, "init: h 1/2 | t 1/2", "init: h 1/2 | t 1/3"));
  EXPECT_FALSE(validate(p).ok());
}

TEST(ParseEnv, CommentsAndBlankLines) {
  const std::string text = "# header\n\n" + replace(kCoin, "actions: flip", "actions: flip  # one") + "\n# end\n";
  EXPECT_EQ(parse_env(text), parse_env(kCoin));
}

TEST(SerializeEnv, RoundTripsRandomEnvironments) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const Pomdp p = testing::random_env(rng);
    EXPECT_EQ(parse_env(serialize_env(p)), p);
  }
  for (const char* name : {"mu.env", "mu-star.env"}) {
    const Pomdp p = testing::corpus(name);
    EXPECT_EQ(parse_env(serialize_env(p)), p);
  }
}

TEST(LoadEnv, MissingFile) {
  EXPECT_THROW(load_env("/nonexistent/env.env"), InputError);
}

TEST(SaveEnv, WritesLoadableFile) {
  const std::string path = std::string(CFPOMDP_TEST_TMPDIR) + "/save_env_coin.env";
  save_env(parse_env(kCoin), path);
  EXPECT_EQ(load_env(path), parse_env(kCoin));
}

}  // namespace
}  // namespace cfpomdp
