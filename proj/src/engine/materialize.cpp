#include "miner/engine/materialize.hpp"

#include <sys/stat.h>

#include <cctype>
#include <fstream>
#include <unordered_set>

#include "miner/engine/diff.hpp"
#include "miner/error.hpp"

namespace miner {
namespace {

namespace fs = std::filesystem;

bool dir_missing_or_empty(const fs::path& p) {
  std::error_code ec;
  if (!fs::exists(p, ec)) return true;
  return fs::is_directory(p, ec) && fs::directory_iterator(p, ec) == fs::directory_iterator();
}

std::string ascii_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// A probe file tells us whether dest's filesystem folds case.
bool filesystem_folds_case(const fs::path& dir) {
  const fs::path probe = dir / ".case_probe_lower";
  std::ofstream(probe).put('x');
  std::error_code ec;
  const bool folds = fs::exists(dir / ".CASE_PROBE_LOWER", ec);
  fs::remove(probe, ec);
  return folds;
}

}  // namespace

fs::path materialize(const Repository& repo, const CommitInfo& commit, MaterializeSubset subset,
                     const fs::path& dest) {
  if (!dir_missing_or_empty(dest))
    raise(Errc::io_failure, "materialize destination " + dest.string() + " is not empty");
  std::error_code ec;
  fs::create_directories(dest, ec);
  if (ec) raise(Errc::io_failure, "cannot create " + dest.string());

  const bool folds_case = filesystem_folds_case(dest);
  std::unordered_set<std::string> seen;

  const auto write_one = [&](const TreeBlobRef& ref) {
    const std::string key = folds_case ? ascii_lower(ref.path) : ref.path;
    if (!seen.insert(key).second)
      raise(Errc::path_collision,
            "entry '" + ref.path + "' collides with another entry on this filesystem");

    const fs::path target = dest / fs::path(ref.path);
    std::error_code ioec;
    fs::create_directories(target.parent_path(), ioec);
    const std::string content = repo.read_blob(ref.id);
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_failure, "cannot write " + target.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) raise(Errc::io_failure, "short write to " + target.string());
    if ((ref.mode & 0111) != 0) ::chmod(target.c_str(), 0755);
  };

  if (subset == MaterializeSubset::full_tree)
    repo.for_each_blob(commit.tree_id, write_one);
  else
    for_each_touched_blob(repo, commit, write_one);
  return dest;
}

}  // namespace miner
