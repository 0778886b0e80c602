#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mwpx {

enum class Operator : char { Add = '+', Sub = '-', Mul = '*', Div = '/' };

std::optional<Operator> operator_from_token(std::string_view token) noexcept;
char operator_symbol(Operator op) noexcept;

/// Returns k when `token` is exactly "number<k>", otherwise nullopt.
std::optional<std::size_t> number_token_index(std::string_view token) noexcept;
bool is_number_token(std::string_view token) noexcept;
std::string number_token(std::size_t index);

/// Operator-first token stream over {+,-,*,/}, "numberk" operands and
/// numeric constants. Construction does not validate arity; use
/// parse_prefix() or is_arity_valid() for that.
class PrefixEquation {
 public:
  PrefixEquation() = default;
  explicit PrefixEquation(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  /// Splits a space-separated serialization.
  static PrefixEquation from_string(std::string_view text);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  std::string str() const;

  std::size_t operator_count() const noexcept;
  /// Largest k over "numberk" operands, or nullopt when none are present.
  std::optional<std::size_t> max_number_index() const noexcept;

  friend bool operator==(const PrefixEquation&, const PrefixEquation&) = default;

 private:
  std::vector<std::string> tokens_;
};

/// Binary expression tree stored as a flat node array; children are indices.
class ExprTree {
 public:
  enum class Kind { Op, NumberRef, Constant };

  struct Node {
    Kind kind = Kind::Constant;
    Operator op = Operator::Add;
    std::size_t number_index = 0;
    double constant = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  ExprTree() = default;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t root() const noexcept { return root_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }

  /// Preorder serialization; parse_prefix(t.to_prefix()) reproduces t.
  PrefixEquation to_prefix() const;
  std::size_t depth() const;

  // Builders used by parse_prefix and by callers generating trees.
  std::size_t add_number(std::size_t index);
  std::size_t add_constant(double value);
  std::size_t add_op(Operator op, std::size_t left, std::size_t right);
  void set_root(std::size_t i) { root_ = i; }

 private:
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

/// Throws Error{ArityError} for too few or surplus operands and
/// Error{UnknownToken} for tokens outside the equation alphabet.
ExprTree parse_prefix(const PrefixEquation& equation);
ExprTree parse_prefix(std::span<const std::string> tokens);

bool is_arity_valid(std::span<const std::string> tokens) noexcept;

/// Right-to-left stack evaluation with numberk bound to numbers[k].
/// Throws DivisionByZero, UnboundNumberToken, ArityError, UnknownToken.
double evaluate(const PrefixEquation& equation, std::span<const double> numbers);
double evaluate(std::span<const std::string> tokens, std::span<const double> numbers);

/// Like evaluate() but returns nullopt instead of throwing.
std::optional<double> try_evaluate(std::span<const std::string> tokens,
                                   std::span<const double> numbers) noexcept;

inline constexpr double kAnswerTolerance = 1e-4;

/// |predicted - gold| <= 1e-4 * max(1, |gold|); false for non-finite input.
bool answers_match(double predicted, double gold) noexcept;

}  // namespace mwpx
