#include "miner/bench/synth.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "miner/error.hpp"
#include "miner/util/subprocess.hpp"

namespace miner {
namespace {

namespace fs = std::filesystem;

// splitmix64: deterministic, seedable, good enough for content variety
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Text lines carrying a unique serial, padded out to the requested size.
std::string fresh_content(std::uint64_t serial, Rng& rng, std::uint64_t size) {
  std::string out;
  out.reserve(size + 32);
  out += "serial " + hex64(serial) + "\n";
  while (out.size() < size) out += "line " + hex64(rng.next()) + "\n";
  return out;
}

}  // namespace

TouchPattern touch_pattern_from_name(const std::string& name) {
  if (name == "round_robin") return TouchPattern::round_robin;
  if (name == "single_hot_file") return TouchPattern::single_hot_file;
  if (name == "all_files") return TouchPattern::all_files;
  raise(Errc::malformed_manifest, "unknown touch pattern '" + name + "'");
}

const char* touch_pattern_name(TouchPattern pattern) {
  switch (pattern) {
    case TouchPattern::round_robin: return "round_robin";
    case TouchPattern::single_hot_file: return "single_hot_file";
    case TouchPattern::all_files: return "all_files";
  }
  return "?";
}

std::uint64_t SynthLedger::distinct_blobs() const {
  std::set<ObjectId> ids;
  for (const auto& commit : commits)
    for (const auto& touch : commit.touched) ids.insert(touch.blob_id);
  return ids.size();
}

SynthRepo generate_repo(const SynthRepoSpec& spec, const fs::path& dest) {
  if (spec.commits == 0 || spec.files == 0)
    raise(Errc::io_failure, "synthetic repo needs at least one commit and one file");
  std::error_code ec;
  if (fs::exists(dest, ec) && !fs::is_empty(dest, ec))
    raise(Errc::destination_not_empty, dest.string() + " is not empty");

  if (run_process({"git", "init", "--quiet", "--bare", dest.string()}).exit_code != 0)
    raise(Errc::io_failure, "git init failed for " + dest.string());
  run_process({"git", "--git-dir", dest.string(), "symbolic-ref", "HEAD", "refs/heads/main"});

  Rng rng{spec.seed * 0x9e3779b97f4a7c15ULL + 1};
  std::uint64_t next_mark = 1;
  std::uint64_t serial = 0;

  const auto file_path = [&](std::uint64_t f) { return "src/file" + std::to_string(f) + ".txt"; };

  // Per file: the marks of every content version seen so far, and which
  // version is current. Reusing an old mark reuses its blob id.
  std::vector<std::vector<std::uint64_t>> versions(spec.files);
  std::vector<std::size_t> current(spec.files, 0);

  std::ostringstream stream;
  std::vector<std::uint64_t> commit_marks;
  // touched per commit as (file, mark)
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> touched_marks;

  const auto emit_blob = [&](const std::string& content) {
    const std::uint64_t mark = next_mark++;
    stream << "blob\nmark :" << mark << "\ndata " << content.size() << "\n" << content << "\n";
    return mark;
  };
  const auto fresh_version = [&](std::uint64_t f) {
    const std::uint64_t mark = emit_blob(fresh_content(serial++, rng, spec.bytes_per_change));
    versions[f].push_back(mark);
    current[f] = versions[f].size() - 1;
    return mark;
  };

  for (std::uint64_t i = 0; i < spec.commits; ++i) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> touches;
    if (i == 0) {
      for (std::uint64_t f = 0; f < spec.files; ++f) touches.emplace_back(f, fresh_version(f));
    } else {
      switch (spec.pattern) {
        case TouchPattern::round_robin: {
          const std::uint64_t f = (i - 1) % spec.files;
          touches.emplace_back(f, fresh_version(f));
          break;
        }
        case TouchPattern::single_hot_file:
          touches.emplace_back(0, fresh_version(0));
          break;
        case TouchPattern::all_files:
          for (std::uint64_t f = 0; f < spec.files; ++f) {
            const bool reuse = versions[f].size() > 1 && rng.below(10) < 9;
            if (reuse) {
              // any previously seen version other than the current one, so
              // the file really changes while its blob id repeats
              std::size_t pick = rng.below(versions[f].size() - 1);
              if (pick >= current[f]) ++pick;
              current[f] = pick;
              touches.emplace_back(f, versions[f][pick]);
            } else {
              touches.emplace_back(f, fresh_version(f));
            }
          }
          break;
      }
    }

    const std::uint64_t commit_mark = next_mark++;
    commit_marks.push_back(commit_mark);
    const std::string message = "change " + std::to_string(i) + "\n";
    const std::int64_t when = 1600000000LL + static_cast<std::int64_t>(i) * 60;
    stream << "commit refs/heads/main\nmark :" << commit_mark << "\n"
           << "author Bench Bot <bench@example.invalid> " << when << " +0000\n"
           << "committer Bench Bot <bench@example.invalid> " << when << " +0000\n"
           << "data " << message.size() << "\n"
           << message;
    if (i > 0) stream << "from :" << commit_marks[i - 1] << "\n";
    for (const auto& [f, mark] : touches)
      stream << "M 100644 :" << mark << " " << file_path(f) << "\n";
    stream << "\n";
    touched_marks.push_back(std::move(touches));
  }
  stream << "done\n";

  const fs::path marks_file = dest / "fast-import-marks";
  const ProcessResult proc = run_process(
      {"git", "--git-dir", dest.string(), "fast-import", "--quiet", "--done",
       "--export-marks=" + marks_file.string()},
      stream.str());
  if (proc.exit_code != 0)
    raise(Errc::io_failure, "git fast-import failed: " + proc.err.substr(0, 500));

  // marks file: ":<mark> <sha1>" per line
  std::unordered_map<std::uint64_t, ObjectId> mark_to_id;
  {
    std::ifstream marks(marks_file);
    std::string line;
    while (std::getline(marks, line)) {
      const auto sp = line.find(' ');
      if (line.empty() || line[0] != ':' || sp == std::string::npos) continue;
      const auto id = ObjectId::try_from_hex(std::string_view(line).substr(sp + 1, 40));
      if (id) mark_to_id.emplace(std::stoull(line.substr(1, sp - 1)), *id);
    }
    fs::remove(marks_file, ec);
  }

  SynthLedger ledger;
  for (std::uint64_t i = 0; i < spec.commits; ++i) {
    LedgerCommit lc;
    lc.id = mark_to_id.at(commit_marks[i]);
    for (const auto& [f, mark] : touched_marks[i])
      lc.touched.push_back(LedgerTouch{file_path(f), mark_to_id.at(mark)});
    ledger.commits.push_back(std::move(lc));
  }

  nlohmann::ordered_json sidecar;
  sidecar["spec"] = {{"commits", spec.commits},
                     {"files", spec.files},
                     {"pattern", touch_pattern_name(spec.pattern)},
                     {"bytes_per_change", spec.bytes_per_change},
                     {"seed", spec.seed}};
  sidecar["branch"] = "main";
  auto& commits_json = sidecar["commits"] = nlohmann::ordered_json::array();
  for (const auto& lc : ledger.commits) {
    nlohmann::ordered_json cj;
    cj["id"] = lc.id.hex();
    auto& touched = cj["touched"] = nlohmann::ordered_json::array();
    for (const auto& t : lc.touched) touched.push_back({{"path", t.path}, {"blob", t.blob_id.hex()}});
    commits_json.push_back(std::move(cj));
  }
  sidecar["distinct_blobs"] = ledger.distinct_blobs();
  std::ofstream sidecar_out(dest.string() + ".ledger.json");
  sidecar_out << sidecar.dump(2) << "\n";

  return SynthRepo{Repository::open(dest), std::move(ledger)};
}

}  // namespace miner
