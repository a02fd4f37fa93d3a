#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "miner/error.hpp"
#include "miner/git/repository.hpp"
#include "support/fixtures.hpp"

using namespace miner;
using namespace testsupport;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an Error");
}

// Byte-wise snapshot of every regular file under root.
std::map<std::string, std::string> snapshot_dir(const fs::path& root) {
  std::map<std::string, std::string> snap;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    snap.emplace(fs::relative(entry.path(), root).generic_string(), std::move(content));
  }
  return snap;
}

}  // namespace

TEST_CASE("object id validation") {
  const std::string good = "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391";
  CHECK(ObjectId::from_hex(good).hex() == good);
  CHECK(!ObjectId::try_from_hex("abc"));
  CHECK(!ObjectId::try_from_hex(good + "0"));                          // 41 chars
  CHECK(!ObjectId::try_from_hex("E69DE29BB2D1D6434B8B29AE775AD8C2E48C5391"));  // uppercase
  CHECK(!ObjectId::try_from_hex("g69de29bb2d1d6434b8b29ae775ad8c2e48c5391"));  // bad alphabet
  CHECK(ObjectId::from_hex(good) == ObjectId::from_hex(good));
  CHECK(ObjectId::from_hex(good) != ObjectId());
}

TEST_CASE("open validates repository layout") {
  TempDir tmp;
  FixtureRepo fixture(tmp / "work");
  fixture.write("a.txt", "hello\n");
  fixture.commit("one");

  SUBCASE("plain working clone resolves to its .git database") {
    const Repository repo = Repository::open(fixture.dir());
    CHECK(repo.git_dir() == fixture.dir() / ".git");
  }
  SUBCASE("empty directory is rejected") {
    fs::create_directories(tmp / "empty");
    CHECK(code_of([&] { Repository::open(tmp / "empty"); }) == Errc::not_a_git_repository);
  }
  SUBCASE("missing path is rejected") {
    CHECK(code_of([&] { Repository::open(tmp / "nope"); }) == Errc::not_a_git_repository);
  }
  SUBCASE("sha256 repositories are rejected") {
    git({"init", "--quiet", "--object-format=sha256", (tmp / "s256").string()}, tmp.path());
    CHECK(code_of([&] { Repository::open(tmp / "s256"); }) == Errc::not_a_git_repository);
  }
  SUBCASE("opening never writes") {
    const auto before = snapshot_dir(fixture.dir());
    const Repository repo = Repository::open(fixture.dir());
    const auto head = ObjectId::from_hex(fixture.run({"rev-parse", "HEAD"}));
    const CommitInfo commit = repo.read_commit(head);
    for (const auto& entry : repo.list_tree(commit.tree_id)) repo.read_blob(entry.id);
    CHECK(snapshot_dir(fixture.dir()) == before);
  }
}

TEST_CASE("clone_bare") {
  TempDir tmp;
  FixtureRepo fixture(tmp / "origin");
  fixture.write("a.txt", "hello\n");
  const std::string head = fixture.commit("one");

  SUBCASE("local clone is bare") {
    const Repository repo = Repository::clone_bare(fixture.dir().string(), tmp / "a.git");
    CHECK(fs::exists(tmp / "a.git" / "HEAD"));
    CHECK(fs::is_directory(tmp / "a.git" / "objects"));
    CHECK(!fs::exists(tmp / "a.git" / "a.txt"));  // no working tree
    REQUIRE(repo.resolve_ref("refs/heads/main").has_value());
    CHECK(repo.resolve_ref("refs/heads/main")->hex() == head);
  }
  SUBCASE("non-empty destination is rejected") {
    fs::create_directories(tmp / "busy");
    write_file(tmp / "busy" / "x", "x");
    CHECK(code_of([&] { Repository::clone_bare(fixture.dir().string(), tmp / "busy"); }) ==
          Errc::destination_not_empty);
  }
  SUBCASE("unreachable remote") {
    CHECK(code_of([&] {
            Repository::clone_bare("https://invalid.invalid/x.git", tmp / "dst");
          }) == Errc::remote_unreachable);
    CHECK_THROWS_AS(Repository::clone_bare((tmp / "missing-src").string(), tmp / "dst2"), Error);
  }
}

TEST_CASE("read_commit") {
  TempDir tmp;
  FixtureRepo fixture(tmp / "work");
  fixture.write("a.txt", "1\n");
  const std::string root = fixture.commit("root");
  fixture.write("a.txt", "2\n");
  const std::string second = fixture.commit("second");
  // merge commit with explicit parent order (second, side)
  fixture.run({"checkout", "--quiet", "-b", "side", root});
  fixture.write("b.txt", "3\n");
  const std::string side = fixture.commit("side");
  fixture.run({"checkout", "--quiet", "main"});
  fixture.run({"merge", "--quiet", "--no-ff", "-m", "merge", "side"});
  const std::string merge = fixture.run({"rev-parse", "HEAD"});

  const Repository repo = Repository::open(fixture.dir());

  SUBCASE("root commit has no parents") {
    const CommitInfo info = repo.read_commit(ObjectId::from_hex(root));
    CHECK(info.parent_ids.empty());
    CHECK(info.message == "root\n");
    CHECK(info.author.name == "Fixture");
    CHECK(info.author.email == "fixture@example.invalid");
    CHECK(info.committer.when.seconds > 0);
  }
  SUBCASE("merge parents keep git order") {
    const CommitInfo info = repo.read_commit(ObjectId::from_hex(merge));
    REQUIRE(info.parent_ids.size() == 2);
    CHECK(info.parent_ids[0].hex() == second);
    CHECK(info.parent_ids[1].hex() == side);
  }
  SUBCASE("fields match git show oracle") {
    const CommitInfo info = repo.read_commit(ObjectId::from_hex(second));
    CHECK(info.tree_id.hex() == fixture.run({"rev-parse", second + "^{tree}"}));
    CHECK(std::to_string(info.committer.when.seconds) ==
          fixture.run({"show", "-s", "--format=%ct", second}));
    CHECK(std::to_string(info.author.when.seconds) ==
          fixture.run({"show", "-s", "--format=%at", second}));
  }
  SUBCASE("non-commit id is rejected") {
    const std::string blob = fixture.run({"rev-parse", second + ":a.txt"});
    CHECK(code_of([&] { repo.read_commit(ObjectId::from_hex(blob)); }) ==
          Errc::object_not_a_commit);
  }
  SUBCASE("missing object") {
    CHECK(code_of([&] {
            repo.read_commit(ObjectId::from_hex("0123456789012345678901234567890123456789"));
          }) == Errc::object_not_found);
  }
}

TEST_CASE("read_blob") {
  TempDir tmp;
  FixtureRepo fixture(tmp / "work");
  fixture.write("a.txt", "a\n");
  const std::string head = fixture.commit("one");
  const Repository repo = Repository::open(fixture.dir());

  SUBCASE("empty blob id per git hash-object oracle") {
    const std::string empty_id = fixture.run({"hash-object", "-w", "--stdin"});
    CHECK(empty_id == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(repo.read_blob(ObjectId::from_hex(empty_id)).empty());
  }
  SUBCASE("content bytes") {
    const std::string id = fixture.run({"rev-parse", "HEAD:a.txt"});
    const std::string content = repo.read_blob(ObjectId::from_hex(id));
    REQUIRE(content.size() == 2);
    CHECK(content[0] == 0x61);
    CHECK(content[1] == 0x0a);
  }
  SUBCASE("tree id is rejected") {
    const std::string tree = fixture.run({"rev-parse", head + "^{tree}"});
    CHECK(code_of([&] { repo.read_blob(ObjectId::from_hex(tree)); }) == Errc::object_not_a_blob);
  }
}

TEST_CASE("list_tree") {
  TempDir tmp;
  FixtureRepo fixture(tmp / "work");
  const Repository repo = Repository::open(fixture.dir());

  SUBCASE("empty tree lists nothing") {
    const std::string empty_tree = fixture.run({"mktree"});
    CHECK(empty_tree == "4b825dc642cb6eb9a060e54bf8d69288fbee4904");
    CHECK(repo.list_tree(ObjectId::from_hex(empty_tree)).empty());
  }

  SUBCASE("flat and nested paths") {
    fixture.write("a.txt", "A\n");
    fixture.write("src/b.txt", "B\n");
    const std::string head = fixture.commit("two files");
    const auto tree = ObjectId::from_hex(fixture.run({"rev-parse", head + "^{tree}"}));
    const auto entries = repo.list_tree(tree);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].path == "a.txt");
    CHECK(entries[1].path == "src/b.txt");
    CHECK(entries[0].id.hex() == fixture.run({"rev-parse", head + ":a.txt"}));
    CHECK(entries[1].id.hex() == fixture.run({"rev-parse", head + ":src/b.txt"}));
  }

  SUBCASE("three-level fixture matches git ls-tree -r oracle") {
    fixture.write("top.txt", "t\n");
    fixture.write("one/mid.txt", "m\n");
    fixture.write("one/two/deep.txt", "d\n");
    fixture.write("one/two/three/deepest.bin", std::string("\x00\x01\x02", 3));
    fixture.write("zebra.txt", "z\n");
    const std::string head = fixture.commit("nested");
    const auto tree = ObjectId::from_hex(fixture.run({"rev-parse", head + "^{tree}"}));

    const auto entries = repo.list_tree(tree);
    std::vector<std::string> got;
    for (const auto& e : entries) got.push_back(e.path);
    const auto expected = split_lines(fixture.run({"ls-tree", "-r", "--name-only", head}));
    CHECK(got == expected);
    CHECK(std::is_sorted(got.begin(), got.end()));

    // round trip: size_bytes equals content length; binary detection
    for (const auto& e : entries) {
      CHECK(repo.read_blob(e.id).size() == e.size_bytes);
      CHECK(e.is_binary == (e.path == "one/two/three/deepest.bin"));
    }
  }

  SUBCASE("symlinks and gitlinks are excluded") {
    fixture.write("real.txt", "r\n");
    fixture.run({"add", "-A", "."});
    // symlink entry (mode 120000) added via update-index, no fs symlink needed
    const std::string link_blob = fixture.run({"hash-object", "-w", "--stdin"});
    fixture.run({"update-index", "--add", "--cacheinfo", "120000," + link_blob + ",link"});
    // gitlink entry (mode 160000) pointing at an arbitrary commit-shaped id
    fixture.run({"update-index", "--add", "--cacheinfo",
                 "160000,1111111111111111111111111111111111111111,submod"});
    const std::string tree = fixture.run({"write-tree"});
    const auto entries = repo.list_tree(ObjectId::from_hex(tree));
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].path == "real.txt");
  }

  SUBCASE("blob id is rejected") {
    fixture.write("a.txt", "A\n");
    const std::string head = fixture.commit("one");
    const std::string blob = fixture.run({"rev-parse", head + ":a.txt"});
    CHECK(code_of([&] { repo.list_tree(ObjectId::from_hex(blob)); }) == Errc::object_not_a_tree);
  }
}

TEST_CASE("packed objects and packed refs read identically") {
  TempDir tmp;
  FixtureRepo fixture(tmp / "work");
  std::string content;
  for (int i = 0; i < 40; ++i) {
    content += "line " + std::to_string(i) + " of a file that keeps growing\n";
    fixture.write("grow.txt", content);
    fixture.write("other.txt", "rev " + std::to_string(i) + "\n");
    fixture.commit("c" + std::to_string(i));
  }
  const Repository before = Repository::open(fixture.dir());
  const auto head = ObjectId::from_hex(fixture.run({"rev-parse", "HEAD"}));

  const auto read_everything = [&](const Repository& repo) {
    std::vector<std::pair<std::string, std::string>> reads;
    ObjectId cursor = head;
    for (;;) {
      const CommitInfo info = repo.read_commit(cursor);
      for (const auto& e : repo.list_tree(info.tree_id))
        reads.emplace_back(e.path + "@" + cursor.hex(), repo.read_blob(e.id));
      if (info.parent_ids.empty()) break;
      cursor = info.parent_ids[0];
    }
    return reads;
  };
  const auto loose_reads = read_everything(before);

  fixture.run({"repack", "-adfq", "--depth=50", "--window=50"});
  fixture.run({"pack-refs", "--all"});
  CHECK(!fs::exists(fixture.dir() / ".git/refs/heads/main"));  // now packed

  const Repository after = Repository::open(fixture.dir());
  REQUIRE(after.resolve_ref("refs/heads/main").has_value());
  CHECK(after.resolve_ref("refs/heads/main")->hex() == head.hex());
  CHECK(read_everything(after) == loose_reads);

  SUBCASE("ref-delta packs read the same") {
    fixture.run({"-c", "repack.usedeltabaseoffset=false", "repack", "-adfq", "--depth=50",
                 "--window=50"});
    CHECK(read_everything(Repository::open(fixture.dir())) == loose_reads);
  }

  SUBCASE("objects spread over several packs read the same") {
    fixture.write("extra.txt", "added after the first repack\n");
    fixture.commit("extra");
    fixture.run({"repack", "-q", "-d"});  // second pack holding only new objects
    std::size_t packs = 0;
    for (const auto& e : fs::directory_iterator(fixture.dir() / ".git/objects/pack"))
      if (e.path().extension() == ".pack") ++packs;
    CHECK(packs >= 2);
    const Repository multi = Repository::open(fixture.dir());
    const auto tip = ObjectId::from_hex(fixture.run({"rev-parse", "HEAD"}));
    const CommitInfo extra = multi.read_commit(tip);
    CHECK(extra.parent_ids[0] == head);
    CHECK(multi.list_tree(extra.tree_id).size() == 3);
  }
}

TEST_CASE("repository reads leave the repository byte-identical") {
  TempDir tmp;
  FixtureRepo fixture(tmp / "work");
  fixture.write("a.txt", "a\n");
  fixture.write("b/c.txt", "c\n");
  fixture.commit("one");
  const fs::path bare = tmp / "bare.git";
  Repository::clone_bare(fixture.dir().string(), bare);

  const auto before = snapshot_dir(bare);
  const Repository repo = Repository::open(bare);
  const auto tip = repo.peel_to_commit(*repo.resolve_ref("refs/heads/main"));
  const CommitInfo info = repo.read_commit(tip);
  for (const auto& entry : repo.list_tree(info.tree_id)) repo.read_blob(entry.id);
  repo.list_refs("refs/heads");
  repo.contains(tip);
  repo.object_header(info.tree_id);
  CHECK(snapshot_dir(bare) == before);
}
