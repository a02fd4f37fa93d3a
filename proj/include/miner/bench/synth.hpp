#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "miner/git/repository.hpp"

namespace miner {

enum class TouchPattern {
  round_robin,      // commit i rewrites one file with fresh content
  single_hot_file,  // commit i rewrites file 0 with fresh content
  all_files,        // commit i rewrites every file; 90% of touches reuse a
                    // previously seen version of the file (same blob id)
};

TouchPattern touch_pattern_from_name(const std::string& name);  // malformed_manifest on bad name
const char* touch_pattern_name(TouchPattern pattern);

struct SynthRepoSpec {
  std::uint64_t commits = 1;
  std::uint64_t files = 1;
  TouchPattern pattern = TouchPattern::round_robin;
  std::uint64_t bytes_per_change = 256;
  std::uint64_t seed = 1;
};

struct LedgerTouch {
  std::string path;
  ObjectId blob_id;
};

struct LedgerCommit {
  ObjectId id;
  std::vector<LedgerTouch> touched;
};

// What the generator did, for oracle checks: every commit with its touched
// paths and blob ids, root first. Also written as a sidecar JSON file at
// "<dest>.ledger.json".
struct SynthLedger {
  std::vector<LedgerCommit> commits;  // history order, root first
  std::uint64_t distinct_blobs() const;
};

struct SynthRepo {
  Repository repo;
  SynthLedger ledger;
};

// Generates a bare repository with exactly spec.commits commits on "main"
// by streaming to git fast-import. Deterministic for a fixed spec.
SynthRepo generate_repo(const SynthRepoSpec& spec, const std::filesystem::path& dest);

}  // namespace miner
