#pragma once

#include <string>

#include "miner/engine/analyze.hpp"

namespace miner {

// One commit record as a single JSON object. Key order is fixed:
//   {"commit": {...}, "metrics": [...], "blobs": [...], "error": {...}?}
// Timestamps are integer unix seconds; invalid UTF-8 in messages or paths
// is replaced, never propagated.
Json record_to_json(const CommitRecord& record);

// Compact single-line serialization, newline not included.
std::string record_to_jsonl(const CommitRecord& record);

}  // namespace miner
