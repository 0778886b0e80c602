#include <doctest.h>

#include <cmath>

#include "mwpx/equation.hpp"
#include "mwpx/error.hpp"
#include "oracles.hpp"

using namespace mwpx;

namespace {

std::vector<std::string> toks(std::string_view s) { return PrefixEquation::from_string(s).tokens(); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mwpx::Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("number token helpers") {
  CHECK(number_token_index("number0") == 0u);
  CHECK(number_token_index("number12") == 12u);
  CHECK_FALSE(number_token_index("number"));
  CHECK_FALSE(number_token_index("numberx"));
  CHECK_FALSE(number_token_index("Number1"));
  CHECK(number_token(3) == "number3");
  CHECK(is_number_token("number7"));
  CHECK_FALSE(is_number_token("numbers"));
}

TEST_CASE("evaluate simple prefix equations") {
  std::vector<double> n{3, 7};
  CHECK(evaluate(toks("- number1 number0"), n) == 4.0);
  CHECK(evaluate(toks("+ number0 * number1 number2"), std::vector<double>{25, 10, 5}) == 75.0);
  CHECK(evaluate(toks("/ number0 number1"), std::vector<double>{12, 4}) == 3.0);
  CHECK(evaluate(toks("number0"), n) == 3.0);
  CHECK(evaluate(toks("* 2 number0"), n) == 6.0);
  CHECK(evaluate(toks("- 0.5 number0"), n) == doctest::Approx(-2.5));
}

TEST_CASE("evaluate errors") {
  std::vector<double> n{1, 0};
  CHECK(code_of([&] { evaluate(toks("/ number0 number1"), n); }) == ErrorCode::DivisionByZero);
  CHECK(code_of([&] { evaluate(toks("+ number0 number5"), n); }) == ErrorCode::UnboundNumberToken);
  CHECK(code_of([&] { evaluate(toks("+ number0"), n); }) == ErrorCode::ArityError);
  CHECK(code_of([&] { evaluate(toks("number0 number1"), n); }) == ErrorCode::ArityError);
  CHECK(code_of([&] { evaluate(toks("+ number0 apples"), n); }) == ErrorCode::UnknownToken);
  CHECK(code_of([&] { evaluate(std::vector<std::string>{}, n); }) == ErrorCode::ArityError);
  CHECK_FALSE(try_evaluate(toks("/ number0 number1"), n));
  CHECK(*try_evaluate(toks("+ number0 number0"), n) == 2.0);
}

TEST_CASE("arity validity") {
  CHECK(is_arity_valid(toks("+ number0 number1")));
  CHECK(is_arity_valid(toks("number0")));
  CHECK_FALSE(is_arity_valid(toks("+ number0")));
  CHECK_FALSE(is_arity_valid(toks("+ number0 number1 number2")));
  CHECK_FALSE(is_arity_valid(toks("number0 +")));
  CHECK_FALSE(is_arity_valid({}));
}

TEST_CASE("parse_prefix builds a tree that serializes back") {
  for (std::string_view s : {"+ number0 * number1 number2", "- - number0 number1 number2", "number3", "/ 2.5 number0"}) {
    auto eq = PrefixEquation::from_string(s);
    auto tree = parse_prefix(eq);
    CHECK(tree.to_prefix() == eq);
  }
  CHECK(parse_prefix(PrefixEquation::from_string("+ number0 * number1 number2")).depth() == 3);
  CHECK(PrefixEquation::from_string("+ number0 * number1 number2").operator_count() == 2);
  CHECK(PrefixEquation::from_string("+ number4 number1").max_number_index() == 4u);
  CHECK_FALSE(PrefixEquation::from_string("+ 1 2").max_number_index());
}

TEST_CASE("answers_match tolerance") {
  CHECK(answers_match(4.0, 4.0));
  CHECK(answers_match(4.00005, 4.0));
  CHECK_FALSE(answers_match(4.001, 4.0));
  CHECK(answers_match(1000.05, 1000.0));
  CHECK_FALSE(answers_match(1000.2, 1000.0));
  CHECK_FALSE(answers_match(std::nan(""), 1.0));
  CHECK_FALSE(answers_match(INFINITY, 1.0));
}

TEST_CASE("evaluator agrees with recursive oracle on random trees") {
  Rng rng(7);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> numbers;
    std::size_t n = 1 + rng.below(5);
    for (std::size_t k = 0; k < n; ++k) numbers.push_back(rng.uniform(0.5, 100.0));
    std::vector<std::string> tree;
    oracle::random_tree(rng, 4, n, tree);
    std::size_t pos = 0;
    REQUIRE(oracle::tree_depth(tree, pos) <= 4);
    REQUIRE(is_arity_valid(tree));
    std::optional<double> expected;
    try {
      expected = oracle::evaluate(tree, numbers);
    } catch (const std::runtime_error&) {
    }
    if (expected) {
      CHECK(evaluate(tree, numbers) == *expected);
    } else {
      CHECK(code_of([&] { evaluate(tree, numbers); }) == ErrorCode::DivisionByZero);
    }
    CHECK(parse_prefix(tree).to_prefix().tokens() == tree);
    ++compared;
  }
  CHECK(compared == 1000);
}
