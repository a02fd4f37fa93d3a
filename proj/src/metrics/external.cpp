#include "miner/metrics/external.hpp"

#include "miner/error.hpp"
#include "miner/util/subprocess.hpp"

namespace miner {
namespace {

Json run_and_parse(const ExternalMetricSpec& spec, const std::vector<std::string>& argv,
                   std::string_view stdin_data) {
  RunOptions options;
  options.timeout = spec.timeout;
  options.max_stdout_bytes = kExternalStdoutCap;
  const ProcessResult proc = run_process(argv, stdin_data, options);

  if (proc.timed_out)
    raise(Errc::metric_timeout, "'" + argv[0] + "' exceeded " +
                                    std::to_string(spec.timeout.count()) + " ms and was killed");
  if (proc.exit_code != 0) {
    std::string err = proc.err;
    if (err.size() > 2000) err.resize(2000);
    raise(Errc::nonzero_exit,
          "'" + argv[0] + "' exited with " + std::to_string(proc.exit_code) + ": " + err);
  }
  if (proc.stdout_truncated)
    raise(Errc::invalid_json_output, "'" + argv[0] + "' produced more than 64 MiB of output");

  Json value = Json::parse(proc.out, nullptr, false);
  if (value.is_discarded())
    raise(Errc::invalid_json_output, "'" + argv[0] + "' did not print a JSON value");
  return value;
}

}  // namespace

Json run_external_blob_metric(const ExternalMetricSpec& spec, std::string_view content) {
  if (spec.command.empty()) raise(Errc::spawn_failure, "empty external metric command");
  return run_and_parse(spec, spec.command, content);
}

Json run_external_tree_metric(const ExternalMetricSpec& spec,
                              const std::vector<BlobEntry>& listing) {
  if (spec.command.empty()) raise(Errc::spawn_failure, "empty external metric command");
  Json array = Json::array();
  for (const auto& entry : listing) {
    Json item;
    item["id"] = entry.id.hex();
    item["path"] = entry.path;
    item["size_bytes"] = entry.size_bytes;
    item["is_binary"] = entry.is_binary;
    array.push_back(std::move(item));
  }
  return run_and_parse(spec, spec.command,
                       array.dump(-1, ' ', false, Json::error_handler_t::replace));
}

Json run_external_dir_metric(const ExternalMetricSpec& spec, const std::filesystem::path& dir) {
  if (spec.command.empty()) raise(Errc::spawn_failure, "empty external metric command");
  std::vector<std::string> argv = spec.command;
  argv.push_back(std::filesystem::absolute(dir).string());
  return run_and_parse(spec, argv, {});
}

BlobMetricFn make_external_blob_fn(ExternalMetricSpec spec) {
  return [spec = std::move(spec)](std::string_view content) {
    return run_external_blob_metric(spec, content);
  };
}

TreeMetricFn make_external_tree_fn(ExternalMetricSpec spec) {
  return [spec = std::move(spec)](const std::vector<BlobEntry>& listing) {
    return run_external_tree_metric(spec, listing);
  };
}

DirMetricFn make_external_dir_fn(ExternalMetricSpec spec) {
  return [spec = std::move(spec)](const std::filesystem::path& dir) {
    return run_external_dir_metric(spec, dir);
  };
}

}  // namespace miner
