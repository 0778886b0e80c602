#include "mwpx/equation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "mwpx/error.hpp"

namespace mwpx {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::UnboundNumberToken: return "UnboundNumberToken";
    case ErrorCode::DegenerateEquation: return "DegenerateEquation";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

std::optional<Operator> operator_from_token(std::string_view token) noexcept {
  if (token.size() != 1) return std::nullopt;
  switch (token[0]) {
    case '+': return Operator::Add;
    case '-': return Operator::Sub;
    case '*': return Operator::Mul;
    case '/': return Operator::Div;
    default: return std::nullopt;
  }
}

char operator_symbol(Operator op) noexcept { return static_cast<char>(op); }

std::optional<std::size_t> number_token_index(std::string_view token) noexcept {
  constexpr std::string_view prefix = "number";
  if (token.size() <= prefix.size() || token.substr(0, prefix.size()) != prefix) return std::nullopt;
  auto digits = token.substr(prefix.size());
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

bool is_number_token(std::string_view token) noexcept { return number_token_index(token).has_value(); }

std::string number_token(std::size_t index) { return "number" + std::to_string(index); }

namespace {

std::optional<double> parse_constant(std::string_view token) noexcept {
  if (token.empty()) return std::nullopt;
  if (!std::isdigit(static_cast<unsigned char>(token.front()))) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value,
                                   std::chars_format::fixed);
  if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

double apply(Operator op, double lhs, double rhs) {
  switch (op) {
    case Operator::Add: return lhs + rhs;
    case Operator::Sub: return lhs - rhs;
    case Operator::Mul: return lhs * rhs;
    case Operator::Div:
      if (rhs == 0.0) throw Error(ErrorCode::DivisionByZero, "division by zero");
      return lhs / rhs;
  }
  return 0.0;
}

}  // namespace

PrefixEquation PrefixEquation::from_string(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  for (std::string tok; in >> tok;) tokens.push_back(std::move(tok));
  return PrefixEquation(std::move(tokens));
}

std::string PrefixEquation::str() const {
  std::string out;
  for (const auto& t : tokens_) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::size_t PrefixEquation::operator_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(tokens_.begin(), tokens_.end(), [](const std::string& t) {
    return operator_from_token(t).has_value();
  }));
}

std::optional<std::size_t> PrefixEquation::max_number_index() const noexcept {
  std::optional<std::size_t> best;
  for (const auto& t : tokens_) {
    if (auto k = number_token_index(t); k && (!best || *k > *best)) best = k;
  }
  return best;
}

std::size_t ExprTree::add_number(std::size_t index) {
  Node n;
  n.kind = Kind::NumberRef;
  n.number_index = index;
  nodes_.push_back(n);
  return nodes_.size() - 1;
}

std::size_t ExprTree::add_constant(double value) {
  Node n;
  n.kind = Kind::Constant;
  n.constant = value;
  nodes_.push_back(n);
  return nodes_.size() - 1;
}

std::size_t ExprTree::add_op(Operator op, std::size_t left, std::size_t right) {
  Node n;
  n.kind = Kind::Op;
  n.op = op;
  n.left = left;
  n.right = right;
  nodes_.push_back(n);
  return nodes_.size() - 1;
}

PrefixEquation ExprTree::to_prefix() const {
  std::vector<std::string> out;
  if (nodes_.empty()) return PrefixEquation{};
  std::vector<std::size_t> stack{root_};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    switch (n.kind) {
      case Kind::Op:
        out.emplace_back(1, operator_symbol(n.op));
        stack.push_back(n.right);
        stack.push_back(n.left);
        break;
      case Kind::NumberRef:
        out.push_back(number_token(n.number_index));
        break;
      case Kind::Constant: {
        std::ostringstream s;
        s << n.constant;
        out.push_back(s.str());
        break;
      }
    }
  }
  return PrefixEquation(std::move(out));
}

std::size_t ExprTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root_, 1}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[i].kind == Kind::Op) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return best;
}

ExprTree parse_prefix(std::span<const std::string> tokens) {
  ExprTree tree;
  std::vector<std::size_t> stack;
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    const std::string& tok = *it;
    if (auto op = operator_from_token(tok)) {
      if (stack.size() < 2)
        throw Error(ErrorCode::ArityError, "operator '" + tok + "' is missing an operand");
      std::size_t left = stack.back();
      stack.pop_back();
      std::size_t right = stack.back();
      stack.pop_back();
      stack.push_back(tree.add_op(*op, left, right));
    } else if (auto k = number_token_index(tok)) {
      stack.push_back(tree.add_number(*k));
    } else if (auto c = parse_constant(tok)) {
      stack.push_back(tree.add_constant(*c));
    } else {
      throw Error(ErrorCode::UnknownToken, "'" + tok + "'");
    }
  }
  if (stack.size() != 1) {
    throw Error(ErrorCode::ArityError, stack.empty() ? "empty equation"
                                                     : std::to_string(stack.size()) + " values left on the stack");
  }
  tree.set_root(stack.back());
  return tree;
}

ExprTree parse_prefix(const PrefixEquation& equation) { return parse_prefix(std::span(equation.tokens())); }

bool is_arity_valid(std::span<const std::string> tokens) noexcept {
  long depth = 0;
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (operator_from_token(*it)) {
      if (depth < 2) return false;
      --depth;
    } else if (number_token_index(*it) || parse_constant(*it)) {
      ++depth;
    } else {
      return false;
    }
  }
  return depth == 1;
}

double evaluate(std::span<const std::string> tokens, std::span<const double> numbers) {
  std::vector<double> stack;
  stack.reserve(tokens.size());
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    const std::string& tok = *it;
    if (auto op = operator_from_token(tok)) {
      if (stack.size() < 2)
        throw Error(ErrorCode::ArityError, "operator '" + tok + "' is missing an operand");
      double lhs = stack.back();
      stack.pop_back();
      double rhs = stack.back();
      stack.back() = apply(*op, lhs, rhs);
    } else if (auto k = number_token_index(tok)) {
      if (*k >= numbers.size())
        throw Error(ErrorCode::UnboundNumberToken,
                    "'" + tok + "' with only " + std::to_string(numbers.size()) + " numbers bound");
      stack.push_back(numbers[*k]);
    } else if (auto c = parse_constant(tok)) {
      stack.push_back(*c);
    } else {
      throw Error(ErrorCode::UnknownToken, "'" + tok + "'");
    }
  }
  if (stack.size() != 1) {
    throw Error(ErrorCode::ArityError, stack.empty() ? "empty equation"
                                                     : std::to_string(stack.size()) + " values left on the stack");
  }
  return stack.back();
}

double evaluate(const PrefixEquation& equation, std::span<const double> numbers) {
  return evaluate(std::span(equation.tokens()), numbers);
}

std::optional<double> try_evaluate(std::span<const std::string> tokens,
                                   std::span<const double> numbers) noexcept {
  try {
    return evaluate(tokens, numbers);
  } catch (...) {
    return std::nullopt;
  }
}

bool answers_match(double predicted, double gold) noexcept {
  if (!std::isfinite(predicted) || !std::isfinite(gold)) return false;
  return std::fabs(predicted - gold) <= kAnswerTolerance * std::max(1.0, std::fabs(gold));
}

}  // namespace mwpx
