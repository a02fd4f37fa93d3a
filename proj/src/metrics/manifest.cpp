#include "miner/manifest.hpp"

#include <fstream>

#include "miner/error.hpp"
#include "miner/metrics/external.hpp"

namespace miner {

std::vector<MetricDescriptor> load_custom_metrics(const std::filesystem::path& manifest_path,
                                                  MetricRegistry& registry) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) raise(Errc::malformed_manifest, "cannot read manifest " + manifest_path.string());
  Json doc = Json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_array())
    raise(Errc::malformed_manifest, manifest_path.string() + " is not a JSON array");

  std::vector<MetricDescriptor> loaded;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("scope") || !entry["scope"].is_string() || !entry.contains("command") ||
        !entry["command"].is_array() || entry["command"].empty())
      raise(Errc::malformed_manifest, "manifest entries need name, scope and a non-empty command");

    const std::string name = entry["name"].get<std::string>();
    const std::string scope = entry["scope"].get<std::string>();
    if (scope != "blob" && scope != "tree" && scope != "dir")
      raise(Errc::malformed_manifest, "metric '" + name + "': scope must be blob, tree or dir");

    bool diff_only = false;
    if (entry.contains("diff_only")) {
      if (!entry["diff_only"].is_boolean())
        raise(Errc::malformed_manifest, "metric '" + name + "': diff_only must be a boolean");
      diff_only = entry["diff_only"].get<bool>();
    }

    ExternalMetricSpec spec;
    for (const auto& arg : entry["command"]) {
      if (!arg.is_string())
        raise(Errc::malformed_manifest, "metric '" + name + "': command must hold strings");
      spec.command.push_back(arg.get<std::string>());
    }
    if (entry.contains("timeout_seconds")) {
      if (!entry["timeout_seconds"].is_number() || entry["timeout_seconds"].get<double>() <= 0)
        raise(Errc::malformed_manifest, "metric '" + name + "': timeout_seconds must be positive");
      spec.timeout = std::chrono::milliseconds(
          static_cast<std::int64_t>(entry["timeout_seconds"].get<double>() * 1000.0));
    }

    MetricDescriptor descriptor;
    descriptor.name = name;
    descriptor.kind.diff_only = diff_only;
    if (scope == "blob") {
      descriptor.kind.scope = MetricScope::blob;
      descriptor.cacheable = true;
      registry.add_blob(descriptor, make_external_blob_fn(std::move(spec)));
    } else if (scope == "tree") {
      descriptor.kind.scope = MetricScope::tree;
      descriptor.cacheable = false;
      registry.add_tree(descriptor, make_external_tree_fn(std::move(spec)));
    } else {
      descriptor.kind.scope = MetricScope::dir;
      descriptor.cacheable = false;
      registry.add_dir(descriptor, make_external_dir_fn(std::move(spec)));
    }
    loaded.push_back(std::move(descriptor));
  }
  return loaded;
}

}  // namespace miner
