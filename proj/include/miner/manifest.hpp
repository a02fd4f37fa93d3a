#pragma once

#include <filesystem>
#include <vector>

#include "miner/metrics/metric.hpp"

namespace miner {

// Loads a custom-metrics manifest: a JSON array of
//   {"name": str, "scope": "blob"|"tree"|"dir", "diff_only": bool,
//    "command": [argv...], "timeout_seconds"?: number}
// Each entry registers an external-process metric. Blob-scoped entries are
// cacheable (pure functions of content); tree- and dir-scoped entries are
// not, since arbitrary tools may not be. Throws Error(malformed_manifest)
// or Error(duplicate_metric_name).
std::vector<MetricDescriptor> load_custom_metrics(const std::filesystem::path& manifest_path,
                                                  MetricRegistry& registry);

}  // namespace miner
