#pragma once

#include <cstdint>
#include <string_view>

namespace miner {

// Operator/operand counts from the language-neutral lexer plus the derived
// Halstead quantities. Binary input yields the all-zero report.
struct HalsteadReport {
  std::uint64_t distinct_operators = 0;  // n1
  std::uint64_t distinct_operands = 0;   // n2
  std::uint64_t total_operators = 0;     // N1
  std::uint64_t total_operands = 0;      // N2

  std::uint64_t vocabulary() const { return distinct_operators + distinct_operands; }
  std::uint64_t length() const { return total_operators + total_operands; }
  double volume() const;      // N * log2(n), 0 when n == 0
  double difficulty() const;  // (n1/2) * (N2/n2), 0 when n2 == 0
  double effort() const { return difficulty() * volume(); }
};

HalsteadReport halstead_analyze(std::string_view content);

}  // namespace miner
