#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "miner/git/repository.hpp"

namespace miner {

// Every metric value is a JSON value; ordered_json keeps object keys in
// insertion order so serialized records are deterministic.
using Json = nlohmann::ordered_json;

enum class MetricScope { blob, tree, dir };

const char* metric_scope_name(MetricScope scope);

struct MetricKind {
  MetricScope scope = MetricScope::blob;
  bool diff_only = false;  // restrict to the blobs touched by the commit
};

struct MetricDescriptor {
  std::string name;  // unique, lowercase [a-z0-9_]
  MetricKind kind;
  bool cacheable = false;  // pure function of its input content set
};

using BlobMetricFn = std::function<Json(std::string_view content)>;
using TreeMetricFn = std::function<Json(const std::vector<BlobEntry>& listing)>;
using DirMetricFn = std::function<Json(const std::filesystem::path& dir)>;

struct RegisteredMetric {
  MetricDescriptor descriptor;
  BlobMetricFn blob;
  TreeMetricFn tree;
  DirMetricFn dir;
};

// Built once before a run, read-only afterwards.
class MetricRegistry {
 public:
  void add_blob(MetricDescriptor descriptor, BlobMetricFn fn);
  void add_tree(MetricDescriptor descriptor, TreeMetricFn fn);
  void add_dir(MetricDescriptor descriptor, DirMetricFn fn);

  const RegisteredMetric& resolve(const std::string& name) const;  // unknown_metric_name
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;  // sorted

 private:
  void insert(MetricDescriptor descriptor, RegisteredMetric metric);
  std::map<std::string, RegisteredMetric> metrics_;
};

// The built-in set: loc/diffloc, halstead/diffhalstead, and the busy
// benchmarking metric.
void register_builtin_metrics(MetricRegistry& registry);

Json loc_blob(std::string_view content);
Json halstead_blob(std::string_view content);
Json busy_blob(std::string_view content);

}  // namespace miner
