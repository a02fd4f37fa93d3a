#include "miner/git/repository.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "miner/error.hpp"
#include "miner/util/subprocess.hpp"
#include "refs.hpp"

namespace miner {
namespace {

namespace fs = std::filesystem;

bool dir_empty(const fs::path& p) {
  std::error_code ec;
  return fs::directory_iterator(p, ec) == fs::directory_iterator();
}

bool looks_like_git_dir(const fs::path& p) {
  std::error_code ec;
  return fs::exists(p / "HEAD", ec) && fs::is_directory(p / "objects", ec) &&
         fs::is_directory(p / "refs", ec);
}

// SHA-256 repositories carry "objectformat = sha256" in their config; the
// reader only speaks SHA-1 and rejects them up front.
bool config_declares_sha256(const fs::path& git_dir) {
  std::ifstream in(git_dir / "config", std::ios::binary);
  if (!in) return false;
  std::string line;
  while (std::getline(in, line)) {
    std::string folded;
    for (char c : line)
      if (c != ' ' && c != '\t') folded += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (folded.rfind("objectformat=sha256", 0) == 0) return true;
  }
  return false;
}

Signature parse_signature(std::string_view line) {
  // "Name <email> 1234567890 +0130"
  Signature sig;
  const std::size_t lt = line.find('<');
  const std::size_t gt = line.find('>', lt == std::string_view::npos ? 0 : lt);
  if (lt == std::string_view::npos || gt == std::string_view::npos) {
    sig.name = std::string(line);
    return sig;
  }
  sig.name = std::string(line.substr(0, lt));
  while (!sig.name.empty() && sig.name.back() == ' ') sig.name.pop_back();
  sig.email = std::string(line.substr(lt + 1, gt - lt - 1));

  std::istringstream rest{std::string(line.substr(gt + 1))};
  long long seconds = 0;
  std::string tz;
  if (rest >> seconds >> tz) {
    sig.when.seconds = seconds;
    if (tz.size() == 5 && (tz[0] == '+' || tz[0] == '-')) {
      const int hours = (tz[1] - '0') * 10 + (tz[2] - '0');
      const int minutes = (tz[3] - '0') * 10 + (tz[4] - '0');
      sig.when.tz_offset_minutes = (tz[0] == '-' ? -1 : 1) * (hours * 60 + minutes);
    }
  }
  return sig;
}

}  // namespace

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::destination_not_empty: return "destination-not-empty";
    case Errc::remote_unreachable: return "remote-unreachable";
    case Errc::not_a_git_repository: return "not-a-git-repository";
    case Errc::object_not_found: return "object-not-found";
    case Errc::object_not_a_commit: return "object-not-a-commit";
    case Errc::object_not_a_blob: return "object-not-a-blob";
    case Errc::object_not_a_tree: return "object-not-a-tree";
    case Errc::corrupt_object: return "corrupt-object";
    case Errc::unknown_branch: return "unknown-branch";
    case Errc::spawn_failure: return "spawn-failure";
    case Errc::nonzero_exit: return "nonzero-exit";
    case Errc::invalid_json_output: return "invalid-json-output";
    case Errc::metric_timeout: return "timeout";
    case Errc::duplicate_metric_name: return "duplicate-name";
    case Errc::unknown_metric_name: return "unknown-metric";
    case Errc::malformed_manifest: return "malformed-manifest";
    case Errc::io_failure: return "io-failure";
    case Errc::path_collision: return "path-collision";
  }
  return "error";
}

struct Repository::Impl {
  fs::path git_dir;
  ObjectDatabase odb;
  RefStore refs;

  explicit Impl(fs::path dir) : git_dir(dir), odb(dir / "objects"), refs(dir) {}
};

Repository::Repository(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Repository Repository::open(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) raise(Errc::not_a_git_repository, path.string() + " does not exist");

  fs::path git_dir = path;
  if (!looks_like_git_dir(git_dir)) {
    const fs::path dot_git = path / ".git";
    if (fs::is_directory(dot_git, ec) && looks_like_git_dir(dot_git)) {
      git_dir = dot_git;
    } else if (fs::is_regular_file(dot_git, ec)) {
      // worktree-style redirect: "gitdir: <path>"
      std::ifstream in(dot_git);
      std::string line;
      std::getline(in, line);
      if (line.rfind("gitdir: ", 0) == 0) {
        fs::path target = line.substr(8);
        if (target.is_relative()) target = path / target;
        if (looks_like_git_dir(target)) git_dir = target;
      }
    }
  }
  if (!looks_like_git_dir(git_dir))
    raise(Errc::not_a_git_repository, path.string() + " is not a git repository");
  if (config_declares_sha256(git_dir))
    raise(Errc::not_a_git_repository, path.string() + " uses SHA-256 objects (unsupported)");
  return Repository(std::make_shared<Impl>(git_dir));
}

Repository Repository::clone_bare(const std::string& url, const fs::path& dest) {
  std::error_code ec;
  if (fs::exists(dest, ec) && (!fs::is_directory(dest, ec) || !dir_empty(dest)))
    raise(Errc::destination_not_empty, "destination " + dest.string() + " is not empty");

  // The git binary handles every transport; a mirror clone carries all
  // remote refs so whole-repository evaluations stay possible.
  const ProcessResult proc = run_process(
      {"git", "clone", "--quiet", "--mirror", url, dest.string()});
  if (proc.exit_code != 0) {
    std::string detail = proc.err;
    if (detail.size() > 500) detail.resize(500);
    fs::remove_all(dest, ec);  // git leaves partial directories behind
    if (detail.find("not appear to be a git repository") != std::string::npos ||
        detail.find("does not exist") != std::string::npos)
      raise(Errc::not_a_git_repository, "clone failed: " + detail);
    raise(Errc::remote_unreachable, "clone failed: " + detail);
  }
  return open(dest);
}

const fs::path& Repository::git_dir() const { return impl_->git_dir; }

bool Repository::contains(const ObjectId& id) const { return impl_->odb.contains(id); }

ObjectHeader Repository::object_header(const ObjectId& id) const {
  return impl_->odb.read_header(id);
}

CommitInfo Repository::read_commit(const ObjectId& id) const {
  const RawObject obj = impl_->odb.read(id);
  if (obj.type != ObjectType::commit)
    raise(Errc::object_not_a_commit, id.hex() + " is a " + object_type_name(obj.type));

  CommitInfo info;
  info.id = id;
  std::size_t pos = 0;
  const std::string& data = obj.data;
  while (pos < data.size()) {
    const std::size_t eol = data.find('\n', pos);
    const std::string_view line(data.data() + pos, (eol == std::string::npos ? data.size() : eol) - pos);
    pos = eol == std::string::npos ? data.size() : eol + 1;
    if (line.empty()) break;  // header/message separator
    if (line[0] == ' ') continue;  // continuation (gpgsig etc.)
    const std::size_t sp = line.find(' ');
    if (sp == std::string_view::npos) continue;
    const std::string_view key = line.substr(0, sp);
    const std::string_view value = line.substr(sp + 1);
    if (key == "tree") {
      info.tree_id = ObjectId::from_hex(value);
    } else if (key == "parent") {
      info.parent_ids.push_back(ObjectId::from_hex(value));
    } else if (key == "author") {
      info.author = parse_signature(value);
    } else if (key == "committer") {
      info.committer = parse_signature(value);
    }
  }
  info.message = data.substr(pos);
  return info;
}

std::string Repository::read_blob(const ObjectId& id) const {
  RawObject obj = impl_->odb.read(id);
  if (obj.type != ObjectType::blob)
    raise(Errc::object_not_a_blob, id.hex() + " is a " + object_type_name(obj.type));
  return std::move(obj.data);
}

std::vector<Repository::TreeEntry> Repository::read_tree(const ObjectId& tree_id) const {
  const RawObject obj = impl_->odb.read(tree_id);
  if (obj.type != ObjectType::tree)
    raise(Errc::object_not_a_tree, tree_id.hex() + " is a " + object_type_name(obj.type));

  std::vector<TreeEntry> entries;
  const std::string& data = obj.data;
  std::size_t pos = 0;
  while (pos < data.size()) {
    const std::size_t sp = data.find(' ', pos);
    const std::size_t nul = data.find('\0', sp);
    if (sp == std::string::npos || nul == std::string::npos || nul + 20 > data.size())
      raise(Errc::corrupt_object, "malformed tree " + tree_id.hex());
    TreeEntry entry;
    entry.mode = static_cast<std::uint32_t>(std::stoul(data.substr(pos, sp - pos), nullptr, 8));
    entry.name = data.substr(sp + 1, nul - sp - 1);
    entry.id = ObjectId::from_raw(reinterpret_cast<const unsigned char*>(data.data()) + nul + 1);
    entries.push_back(std::move(entry));
    pos = nul + 21;
  }
  return entries;
}

void Repository::for_each_blob(const ObjectId& tree_id,
                               const std::function<void(const TreeBlobRef&)>& fn) const {
  std::vector<TreeBlobRef> out;
  std::function<void(const ObjectId&, const std::string&)> walk =
      [&](const ObjectId& id, const std::string& prefix) {
        for (const auto& entry : read_tree(id)) {
          const std::uint32_t kind = entry.mode & 0170000;
          if (kind == 0040000) {
            walk(entry.id, prefix + entry.name + "/");
          } else if (kind == 0100000) {
            out.push_back(TreeBlobRef{entry.id, prefix + entry.name, entry.mode});
          }
          // 0120000 symlinks and 0160000 gitlinks carry no analyzable content
        }
      };
  walk(tree_id, "");

  // Stored tree order flattens to byte-ascending paths for well-formed
  // trees; sorting pins the contract even for odd ones.
  std::sort(out.begin(), out.end(),
            [](const TreeBlobRef& a, const TreeBlobRef& b) { return a.path < b.path; });
  for (const auto& ref : out) fn(ref);
}

std::vector<BlobEntry> Repository::list_tree(const ObjectId& tree_id) const {
  std::vector<BlobEntry> entries;
  for_each_blob(tree_id, [&](const TreeBlobRef& ref) {
    BlobEntry entry;
    entry.id = ref.id;
    entry.path = ref.path;
    const std::string content = read_blob(ref.id);
    entry.size_bytes = content.size();
    entry.is_binary = blob_looks_binary(content);
    entries.push_back(std::move(entry));
  });
  return entries;
}

bool Repository::blob_looks_binary(std::string_view content) {
  const std::size_t scan = std::min<std::size_t>(content.size(), 8000);
  return content.substr(0, scan).find('\0') != std::string_view::npos;
}

std::optional<ObjectId> Repository::resolve_ref(const std::string& refname) const {
  return impl_->refs.resolve(refname);
}

std::vector<RefEntry> Repository::list_refs(const std::string& prefix) const {
  return impl_->refs.list(prefix);
}

ObjectId Repository::peel_to_commit(const ObjectId& id) const {
  ObjectId current = id;
  for (int i = 0; i < 16; ++i) {
    const RawObject obj = impl_->odb.read(current);
    if (obj.type == ObjectType::commit) return current;
    if (obj.type != ObjectType::tag)
      raise(Errc::object_not_a_commit,
            current.hex() + " is a " + object_type_name(obj.type) + ", not a commit");
    // tag objects start with "object <hex>\n"
    if (obj.data.rfind("object ", 0) != 0 || obj.data.size() < 47)
      raise(Errc::corrupt_object, "malformed tag " + current.hex());
    current = ObjectId::from_hex(std::string_view(obj.data).substr(7, 40));
  }
  raise(Errc::corrupt_object, "tag chain too deep at " + id.hex());
}

}  // namespace miner
