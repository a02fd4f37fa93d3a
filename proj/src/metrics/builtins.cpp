#include "miner/metrics/halstead.hpp"
#include "miner/metrics/metric.hpp"

namespace miner {

Json loc_blob(std::string_view content) {
  std::uint64_t lines = 0;
  for (const char c : content)
    if (c == '\n') ++lines;
  return lines;
}

Json halstead_blob(std::string_view content) {
  const HalsteadReport r = halstead_analyze(content);
  Json out;
  out["distinct_operators"] = r.distinct_operators;
  out["distinct_operands"] = r.distinct_operands;
  out["total_operators"] = r.total_operators;
  out["total_operands"] = r.total_operands;
  out["vocabulary"] = r.vocabulary();
  out["length"] = r.length();
  out["volume"] = r.volume();
  out["difficulty"] = r.difficulty();
  out["effort"] = r.effort();
  return out;
}

// Compute-heavy on purpose: 10k mixing rounds over the content make
// per-commit work dominate scheduling overhead in the scaling benchmark.
Json busy_blob(std::string_view content) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int round = 0; round < 10000; ++round) {
    for (const char c : content) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    h += 0x9e3779b97f4a7c15ULL;
  }
  return h & 0x1fffffffffffffULL;  // keep it inside JSON's exact-integer range
}

void register_builtin_metrics(MetricRegistry& registry) {
  registry.add_blob({.name = "loc", .kind = {MetricScope::blob, false}, .cacheable = true},
                    loc_blob);
  registry.add_blob({.name = "diffloc", .kind = {MetricScope::blob, true}, .cacheable = true},
                    loc_blob);
  registry.add_blob({.name = "halstead", .kind = {MetricScope::blob, false}, .cacheable = true},
                    halstead_blob);
  registry.add_blob({.name = "diffhalstead", .kind = {MetricScope::blob, true}, .cacheable = true},
                    halstead_blob);
  // pure like the rest; scaling benchmarks disable the cache instead
  registry.add_blob({.name = "busy", .kind = {MetricScope::blob, false}, .cacheable = true},
                    busy_blob);
}

}  // namespace miner
