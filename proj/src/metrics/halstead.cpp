#include "miner/metrics/halstead.hpp"

#include <cmath>
#include <set>
#include <string>

namespace miner {
namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Keywords counted as operators; everything else alphabetic is an operand.
bool is_keyword(std::string_view word) {
  static const std::set<std::string_view> keywords = {
      "if", "else", "for", "while", "return", "def", "fn", "function", "class"};
  return keywords.contains(word);
}

bool is_single_operator(char c) {
  return std::string_view("=+-*/%<>,;:.!&|^~?").find(c) != std::string_view::npos;
}

}  // namespace

double HalsteadReport::volume() const {
  const auto n = vocabulary();
  if (n == 0) return 0.0;
  return static_cast<double>(length()) * std::log2(static_cast<double>(n));
}

double HalsteadReport::difficulty() const {
  if (distinct_operands == 0) return 0.0;
  return (static_cast<double>(distinct_operators) / 2.0) *
         (static_cast<double>(total_operands) / static_cast<double>(distinct_operands));
}

HalsteadReport halstead_analyze(std::string_view src) {
  HalsteadReport report;
  if (src.find('\0') != std::string_view::npos) return report;  // binary: all zero

  std::set<std::string, std::less<>> operators;
  std::set<std::string, std::less<>> operands;
  const auto count_operator = [&](std::string tok) {
    report.total_operators++;
    operators.insert(std::move(tok));
  };
  const auto count_operand = [&](std::string tok) {
    report.total_operands++;
    operands.insert(std::move(tok));
  };

  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(src[i]);

    // comments: #... and //... to end of line, /*...*/ block
    if (c == '#') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
      i = (i + 1 < n) ? i + 2 : n;
      continue;
    }

    // string / char literals: stripped, not counted
    if (c == '"' || c == '\'') {
      const char quote = static_cast<char>(c);
      ++i;
      while (i < n && src[i] != quote) {
        if (src[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i < n) ++i;  // closing quote
      continue;
    }

    if (is_digit(c)) {  // numeric literal, one operand token (handles 0x.., 1e9, 3.14)
      const std::size_t start = i;
      while (i < n && (is_ident_char(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      count_operand(std::string(src.substr(start, i - start)));
      continue;
    }

    if (is_ident_start(c)) {
      const std::size_t start = i;
      while (i < n && is_ident_char(static_cast<unsigned char>(src[i]))) ++i;
      std::string word(src.substr(start, i - start));
      if (is_keyword(word))
        count_operator(std::move(word));
      else
        count_operand(std::move(word));
      continue;
    }

    // two-char operators take precedence over their prefixes
    if (i + 1 < n) {
      const std::string_view two = src.substr(i, 2);
      if (two == "<=" || two == ">=" || two == "==" || two == "!=") {
        count_operator(std::string(two));
        i += 2;
        continue;
      }
    }

    // bracket pairs count once, at the opening token
    if (c == '(' || c == '[' || c == '{') {
      count_operator(c == '(' ? "()" : c == '[' ? "[]" : "{}");
      ++i;
      continue;
    }
    if (c == ')' || c == ']' || c == '}') {
      ++i;
      continue;
    }

    if (is_single_operator(static_cast<char>(c))) {
      count_operator(std::string(1, static_cast<char>(c)));
      ++i;
      continue;
    }

    ++i;  // whitespace and anything unclassified
  }

  report.distinct_operators = operators.size();
  report.distinct_operands = operands.size();
  return report;
}

}  // namespace miner
