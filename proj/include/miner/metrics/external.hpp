#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "miner/metrics/metric.hpp"

namespace miner {

// Wire protocol for external metrics: blob scope feeds the content on
// stdin; dir scope appends the absolute directory as the final argument;
// tree scope feeds the blob listing as a JSON array on stdin. In every
// case stdout must hold a single JSON value and the exit status must be 0.
struct ExternalMetricSpec {
  std::vector<std::string> command;  // argv; command[0] must be executable
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
};

inline constexpr std::size_t kExternalStdoutCap = 64ull << 20;  // 64 MiB

Json run_external_blob_metric(const ExternalMetricSpec& spec, std::string_view content);
Json run_external_tree_metric(const ExternalMetricSpec& spec,
                              const std::vector<BlobEntry>& listing);
Json run_external_dir_metric(const ExternalMetricSpec& spec, const std::filesystem::path& dir);

// Binds an ExternalMetricSpec to the registry function shape for its scope.
BlobMetricFn make_external_blob_fn(ExternalMetricSpec spec);
TreeMetricFn make_external_tree_fn(ExternalMetricSpec spec);
DirMetricFn make_external_dir_fn(ExternalMetricSpec spec);

}  // namespace miner
