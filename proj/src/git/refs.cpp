#include "refs.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "miner/error.hpp"

namespace miner {
namespace {

namespace fs = std::filesystem;

std::string trim_right(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace

RefStore::RefStore(fs::path git_dir) : git_dir_(std::move(git_dir)) {}

std::optional<std::string> RefStore::read_ref_file(const std::string& refname) const {
  std::ifstream in(git_dir_ / refname, std::ios::binary);
  if (!in) return std::nullopt;
  std::string line;
  std::getline(in, line);
  return trim_right(line);
}

std::vector<RefEntry> RefStore::packed_refs() const {
  std::vector<RefEntry> out;
  std::ifstream in(git_dir_ / "packed-refs", std::ios::binary);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim_right(line);
    if (line.empty() || line[0] == '#' || line[0] == '^') continue;  // ^ lines are peel hints
    if (line.size() < 42 || line[40] != ' ') continue;
    auto id = ObjectId::try_from_hex(std::string_view(line).substr(0, 40));
    if (!id) continue;
    out.push_back(RefEntry{line.substr(41), *id});
  }
  return out;
}

std::optional<ObjectId> RefStore::resolve_depth(const std::string& refname, int depth) const {
  if (depth > 10) return std::nullopt;
  if (auto content = read_ref_file(refname)) {
    if (content->rfind("ref: ", 0) == 0) return resolve_depth(content->substr(5), depth + 1);
    return ObjectId::try_from_hex(*content);
  }
  for (const auto& entry : packed_refs())
    if (entry.name == refname) return entry.target;
  return std::nullopt;
}

std::optional<ObjectId> RefStore::resolve(const std::string& refname) const {
  return resolve_depth(refname, 0);
}

std::vector<RefEntry> RefStore::list(const std::string& prefix) const {
  std::map<std::string, ObjectId> merged;
  const std::string dir_prefix = prefix + "/";
  for (const auto& entry : packed_refs()) {
    if (entry.name.rfind(dir_prefix, 0) == 0) merged[entry.name] = entry.target;
  }

  const fs::path root = git_dir_ / prefix;
  std::error_code ec;
  if (fs::is_directory(root, ec)) {
    for (auto it = fs::recursive_directory_iterator(root, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) break;
      if (!it->is_regular_file(ec)) continue;
      const std::string name =
          prefix + "/" + fs::relative(it->path(), root, ec).generic_string();
      if (auto content = read_ref_file(name)) {
        // Symbolic refs (e.g. refs/remotes/origin/HEAD) are aliases, not
        // branches; they are skipped in listings.
        if (content->rfind("ref: ", 0) == 0) continue;
        if (auto id = ObjectId::try_from_hex(*content)) merged[name] = *id;
      }
    }
  }

  std::vector<RefEntry> out;
  out.reserve(merged.size());
  for (auto& [name, id] : merged) out.push_back(RefEntry{name, id});
  return out;
}

}  // namespace miner
