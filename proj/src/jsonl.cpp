#include "miner/jsonl.hpp"

namespace miner {

Json record_to_json(const CommitRecord& record) {
  Json out;
  Json commit;
  commit["id"] = record.id.hex();
  if (record.commit) {
    const CommitInfo& info = *record.commit;
    commit["author"] = info.author.name;
    commit["email"] = info.author.email;
    commit["authored_at"] = info.author.when.seconds;
    commit["committer"] = info.committer.name;
    commit["committer_email"] = info.committer.email;
    commit["committed_at"] = info.committer.when.seconds;
    commit["message"] = info.message;
  }
  out["commit"] = std::move(commit);

  Json metrics = Json::array();
  for (const auto& m : record.commit_metrics) {
    Json entry;
    entry["name"] = m.name;
    entry["value"] = m.value;
    metrics.push_back(std::move(entry));
  }
  out["metrics"] = std::move(metrics);

  Json blobs = Json::array();
  for (const auto& blob : record.blobs) {
    Json b;
    b["id"] = blob.id.hex();
    b["path"] = blob.path;
    Json results = Json::array();
    for (const auto& m : blob.metrics) {
      Json entry;
      entry["name"] = m.name;
      entry["value"] = m.value;
      entry["cached"] = m.cached;
      results.push_back(std::move(entry));
    }
    b["metrics"] = std::move(results);
    blobs.push_back(std::move(b));
  }
  out["blobs"] = std::move(blobs);

  if (record.error) {
    Json error;
    error["stage"] = record.error->stage;
    error["message"] = record.error->message;
    out["error"] = std::move(error);
  }
  return out;
}

std::string record_to_jsonl(const CommitRecord& record) {
  return record_to_json(record).dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace miner
