#include "miner/metrics/metric.hpp"

#include "miner/error.hpp"

namespace miner {

const char* metric_scope_name(MetricScope scope) {
  switch (scope) {
    case MetricScope::blob: return "blob";
    case MetricScope::tree: return "tree";
    case MetricScope::dir: return "dir";
  }
  return "?";
}

namespace {

bool valid_metric_name(const std::string& name) {
  if (name.empty()) return false;
  for (const char c : name)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

}  // namespace

void MetricRegistry::insert(MetricDescriptor descriptor, RegisteredMetric metric) {
  const std::string name = descriptor.name;
  if (!valid_metric_name(name))
    raise(Errc::malformed_manifest, "metric name '" + name + "' must match [a-z0-9_]+");
  metric.descriptor = std::move(descriptor);
  if (!metrics_.emplace(name, std::move(metric)).second)
    raise(Errc::duplicate_metric_name, "metric '" + name + "' is already registered");
}

void MetricRegistry::add_blob(MetricDescriptor descriptor, BlobMetricFn fn) {
  descriptor.kind.scope = MetricScope::blob;
  RegisteredMetric metric;
  metric.blob = std::move(fn);
  insert(std::move(descriptor), std::move(metric));
}

void MetricRegistry::add_tree(MetricDescriptor descriptor, TreeMetricFn fn) {
  descriptor.kind.scope = MetricScope::tree;
  RegisteredMetric metric;
  metric.tree = std::move(fn);
  insert(std::move(descriptor), std::move(metric));
}

void MetricRegistry::add_dir(MetricDescriptor descriptor, DirMetricFn fn) {
  descriptor.kind.scope = MetricScope::dir;
  RegisteredMetric metric;
  metric.dir = std::move(fn);
  insert(std::move(descriptor), std::move(metric));
}

const RegisteredMetric& MetricRegistry::resolve(const std::string& name) const {
  const auto it = metrics_.find(name);
  if (it == metrics_.end()) raise(Errc::unknown_metric_name, "unknown metric '" + name + "'");
  return it->second;
}

bool MetricRegistry::contains(const std::string& name) const { return metrics_.contains(name); }

std::vector<std::string> MetricRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(metrics_.size());
  for (const auto& [name, metric] : metrics_) out.push_back(name);
  return out;
}

}  // namespace miner
