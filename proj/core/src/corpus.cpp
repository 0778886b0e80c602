#include "mwpx/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "mwpx/error.hpp"
#include "mwpx/rng.hpp"

namespace mwpx {

using nlohmann::json;

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::Add: return "ADD";
    case Category::Sub: return "SUB";
    case Category::Mul: return "MUL";
    case Category::Div: return "DIV";
    case Category::Multi: return "MULTI";
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view s) noexcept {
  for (Category c : kAllCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::string MathWordProblem::question() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Bytes >= 0x80 belong to UTF-8 sequences and are treated as word characters.
bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalpha(u);
}

bool is_numeral(std::string_view tok) {
  if (tok.empty() || !is_digit(tok.front()) || !is_digit(tok.back())) return false;
  bool seen_point = false;
  for (char c : tok) {
    if (c == '.') {
      if (seen_point) return false;
      seen_point = true;
    } else if (!is_digit(c)) {
      return false;
    }
  }
  return true;
}

bool is_clitic(std::string_view rest) {
  for (std::string_view c : {"s", "S", "re", "ve", "ll", "d", "m", "t"})
    if (rest == c) return true;
  return false;
}

void tokenize_chunk(std::string_view s, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (s.substr(i, 6) == "number" && i + 6 < s.size() && is_digit(s[i + 6])) {
      std::size_t j = i + 6;
      while (j < s.size() && is_digit(s[j])) ++j;
      if (j == s.size() || !is_word_char(s[j])) {
        out.emplace_back(s.substr(i, j - i));
        i = j;
        continue;
      }
    }
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < s.size() && is_digit(s[j])) ++j;
      if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
        ++j;
        while (j < s.size() && is_digit(s[j])) ++j;
      }
      out.emplace_back(s.substr(i, j - i));
      i = j;
    } else if (is_word_char(c)) {
      std::size_t j = i;
      while (j < s.size() && is_word_char(s[j])) ++j;
      out.emplace_back(s.substr(i, j - i));
      i = j;
    } else if (c == '\'' && i + 1 < s.size() && is_word_char(s[i + 1]) &&
               ((i > 0 && is_word_char(s[i - 1])) || (i == 0 && is_clitic(s.substr(1))))) {
      // clitic such as 's or 're, attached or already split off
      std::size_t j = i + 1;
      while (j < s.size() && is_word_char(s[j])) ++j;
      out.emplace_back(s.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
}

double parse_numeral(std::string_view tok) {
  double v = 0.0;
  std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return v;
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

struct RawRecord {
  std::string id;
  std::string question;
  std::string equation;
  double answer = 0.0;
  std::optional<std::vector<double>> numbers;
};

std::vector<double> parse_number_list(std::string_view text, const std::string& id, std::size_t line) {
  std::vector<double> out;
  std::istringstream in{std::string(text)};
  for (std::string tok; in >> tok;) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw RecordError(ErrorCode::MalformedRecord, id, line, "bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

MathWordProblem build_problem(RawRecord raw, std::size_t line, const LoadOptions& options) {
  MathWordProblem p;
  p.id = std::move(raw.id);
  if (raw.numbers) {
    p.tokens = tokenize(raw.question);
    p.numbers = std::move(*raw.numbers);
  } else {
    auto masked = mask_numbers(raw.question);
    p.tokens = std::move(masked.tokens);
    p.numbers = std::move(masked.numbers);
  }
  p.equation = PrefixEquation::from_string(raw.equation);
  p.answer = raw.answer;

  try {
    parse_prefix(p.equation);
  } catch (const Error& e) {
    throw RecordError(ErrorCode::MalformedRecord, p.id, line, std::string("equation: ") + e.what());
  }
  if (auto k = p.equation.max_number_index(); k && *k >= p.numbers.size()) {
    throw RecordError(ErrorCode::UnboundNumberToken, p.id, line,
                      "equation references " + number_token(*k) + " but only " +
                          std::to_string(p.numbers.size()) + " numbers are bound");
  }
  try {
    p.category = classify_operation(p.equation);
  } catch (const Error& e) {
    throw RecordError(e.code(), p.id, line, e.what());
  }
  auto value = try_evaluate(p.equation.tokens(), p.numbers);
  if (!value || !answers_match(*value, p.answer)) {
    p.flags.answer_mismatch = true;
    if (options.warnings) {
      *options.warnings << "warning: record '" << p.id << "' (line " << line << "): answer " << p.answer
                        << " disagrees with equation '" << p.equation.str() << "'\n";
    }
  }
  return p;
}

std::string json_id(const json& j, std::size_t line) {
  if (!j.contains("id")) return "line" + std::to_string(line);
  const auto& v = j.at("id");
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokenize_chunk(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

MaskedText mask_numbers(std::string_view raw_text) {
  MaskedText out;
  out.tokens = tokenize(raw_text);
  for (auto& tok : out.tokens) {
    if (is_numeral(tok)) {
      out.numbers.push_back(parse_numeral(tok));
      tok = number_token(out.numbers.size() - 1);
    }
  }
  return out;
}

Category classify_operation(const PrefixEquation& equation) {
  std::optional<Operator> first;
  std::size_t count = 0;
  for (const auto& t : equation.tokens()) {
    if (auto op = operator_from_token(t)) {
      if (!first) first = op;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::DegenerateEquation, "equation '" + equation.str() + "' has no operator");
  if (count > 1) return Category::Multi;
  switch (*first) {
    case Operator::Add: return Category::Add;
    case Operator::Sub: return Category::Sub;
    case Operator::Mul: return Category::Mul;
    case Operator::Div: return Category::Div;
  }
  return Category::Multi;
}

DataFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? DataFormat::Csv : DataFormat::Jsonl;
}

Dataset parse_jsonl(std::istream& in, const LoadOptions& options) {
  Dataset out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw RecordError(ErrorCode::MalformedRecord, "?", line_no, e.what());
    }
    RawRecord raw;
    raw.id = j.is_object() ? json_id(j, line_no) : "?";
    try {
      raw.question = j.at("question").get<std::string>();
      raw.equation = j.at("equation").get<std::string>();
      const auto& ans = j.at("answer");
      raw.answer = ans.is_string() ? parse_number_list(ans.get<std::string>(), raw.id, line_no).at(0)
                                   : ans.get<double>();
      if (j.contains("numbers") && !j.at("numbers").is_null()) {
        const auto& nums = j.at("numbers");
        raw.numbers = nums.is_string() ? parse_number_list(nums.get<std::string>(), raw.id, line_no)
                                       : nums.get<std::vector<double>>();
      }
    } catch (const json::exception& e) {
      throw RecordError(ErrorCode::MalformedRecord, raw.id, line_no, e.what());
    } catch (const std::out_of_range&) {
      throw RecordError(ErrorCode::MalformedRecord, raw.id, line_no, "empty answer");
    }
    out.push_back(build_problem(std::move(raw), line_no, options));
  }
  return out;
}

Dataset parse_csv(std::istream& in, const LoadOptions& options) {
  Dataset out;
  std::size_t line_no = 0;
  auto header = csv::read_record(in, line_no);
  if (!header) return out;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header->size(); ++i) col[(*header)[i]] = i;
  for (const char* required : {"question", "equation", "answer"}) {
    if (!col.count(required))
      throw RecordError(ErrorCode::MalformedRecord, "header", 1, std::string("missing column '") + required + "'");
  }
  for (;;) {
    std::size_t start = line_no + 1;
    auto rec = csv::read_record(in, line_no);
    if (!rec) break;
    if (rec->size() == 1 && (*rec)[0].empty()) continue;
    auto field = [&](const std::string& name) -> std::string {
      auto it = col.find(name);
      if (it == col.end() || it->second >= rec->size()) return {};
      return (*rec)[it->second];
    };
    RawRecord raw;
    raw.id = col.count("id") ? field("id") : "line" + std::to_string(start);
    if (rec->size() != header->size())
      throw RecordError(ErrorCode::MalformedRecord, raw.id, start,
                        "expected " + std::to_string(header->size()) + " fields, got " + std::to_string(rec->size()));
    raw.question = field("question");
    raw.equation = field("equation");
    auto answer = parse_number_list(field("answer"), raw.id, start);
    if (answer.size() != 1) throw RecordError(ErrorCode::MalformedRecord, raw.id, start, "answer must be one number");
    raw.answer = answer[0];
    if (col.count("numbers")) {
      auto text = field("numbers");
      if (!text.empty()) raw.numbers = parse_number_list(text, raw.id, start);
    }
    out.push_back(build_problem(std::move(raw), start, options));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return format == DataFormat::Csv ? parse_csv(in, options) : parse_jsonl(in, options);
}

Dataset load_dataset(const std::filesystem::path& path) { return load_dataset(path, format_for_path(path)); }

void write_jsonl(std::ostream& out, std::span<const MathWordProblem> dataset) {
  for (const auto& p : dataset) {
    json j;
    j["id"] = p.id;
    j["question"] = p.question();
    j["equation"] = p.equation.str();
    j["answer"] = p.answer;
    j["numbers"] = p.numbers;
    j["category"] = std::string(to_string(p.category));
    if (p.flags.answer_mismatch || p.flags.empty) {
      json flags = json::array();
      if (p.flags.answer_mismatch) flags.push_back("answer_mismatch");
      if (p.flags.empty) flags.push_back("empty");
      j["flags"] = flags;
    }
    out << j.dump() << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, std::span<const MathWordProblem> dataset) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_jsonl(out, dataset);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

std::array<std::size_t, 5> operation_counts(std::span<const MathWordProblem> dataset) {
  std::array<std::size_t, 5> counts{};
  for (const auto& p : dataset) ++counts[static_cast<std::size_t>(p.category)];
  return counts;
}

std::array<double, 5> operation_distribution(std::span<const MathWordProblem> dataset) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyInput, "operation distribution of an empty dataset");
  auto counts = operation_counts(dataset);
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < 5; ++i) out[i] = static_cast<double>(counts[i]) / static_cast<double>(dataset.size());
  return out;
}

std::vector<CVSplit> split_cv_folds(std::span<const MathWordProblem> dataset, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "fold count must be at least 2");
  if (dataset.size() < k)
    throw Error(ErrorCode::InvalidArgument, "fold count " + std::to_string(k) + " exceeds dataset size " +
                                                std::to_string(dataset.size()));
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span(order));

  std::vector<std::size_t> fold_of(dataset.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) fold_of[order[pos]] = pos % k;

  std::vector<CVSplit> splits(k);
  for (std::size_t f = 0; f < k; ++f) splits[f].fold_index = f;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? splits[f].test : splits[f].train).push_back(i);
  }
  return splits;
}

Dataset select(std::span<const MathWordProblem> dataset, std::span<const std::size_t> indices) {
  Dataset out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(dataset[i]);
  return out;
}

std::string dataset_hash(std::span<const MathWordProblem> dataset) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& p : dataset) {
    feed(p.id);
    feed("\x1f");
    for (const auto& t : p.tokens) {
      feed(t);
      feed(" ");
    }
    feed("\x1f");
    for (double v : p.numbers) {
      feed(hex_double(v));
      feed(" ");
    }
    feed("\x1f");
    feed(p.equation.str());
    feed("\x1f");
    feed(hex_double(p.answer));
    feed("\x1e");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mwpx
