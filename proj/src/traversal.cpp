#include "miner/traversal.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "miner/error.hpp"

namespace miner {
namespace {

struct Node {
  std::int64_t date = 0;
  std::vector<ObjectId> parents;      // the parents the walk follows
  std::uint32_t walked_children = 0;  // in-degree within the walked subgraph
};

using NodeMap = std::unordered_map<ObjectId, Node, ObjectIdHash>;

// Pop order: newest committed_at first, ties by ascending id. Raw byte
// order and hex order coincide.
struct ReadyOrder {
  bool operator()(const std::pair<std::int64_t, ObjectId>& a,
                  const std::pair<std::int64_t, ObjectId>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  }
};

using ReadyQueue =
    std::priority_queue<std::pair<std::int64_t, ObjectId>,
                        std::vector<std::pair<std::int64_t, ObjectId>>, ReadyOrder>;

// Loads the subgraph reachable from tip along the parent links the walk
// follows (all parents, or only the first).
void collect(const Repository& repo, const ObjectId& tip, bool first_parent, NodeMap& nodes) {
  std::vector<ObjectId> stack{tip};
  while (!stack.empty()) {
    const ObjectId id = stack.back();
    stack.pop_back();
    if (nodes.contains(id)) continue;

    const CommitInfo info = repo.read_commit(id);
    Node& node = nodes[id];
    node.date = info.committer.when.seconds;
    if (!info.parent_ids.empty()) {
      if (first_parent) {
        node.parents.push_back(info.parent_ids[0]);
      } else {
        for (const auto& p : info.parent_ids)
          if (std::find(node.parents.begin(), node.parents.end(), p) == node.parents.end())
            node.parents.push_back(p);
      }
    }
    for (const auto& p : node.parents) stack.push_back(p);
  }
}

void count_children(NodeMap& nodes) {
  for (auto& [id, node] : nodes) (void)id, node.walked_children = 0;
  for (const auto& [id, node] : nodes)
    for (const auto& p : node.parents) nodes.at(p).walked_children++;
}

// Kahn's algorithm over child->parent edges: a commit becomes ready once
// every walked child has been emitted.
void emit_topo(NodeMap& nodes, const std::function<bool(const ObjectId&)>& emit) {
  count_children(nodes);
  ReadyQueue ready;
  for (const auto& [id, node] : nodes)
    if (node.walked_children == 0) ready.push({node.date, id});
  while (!ready.empty()) {
    const ObjectId id = ready.top().second;
    ready.pop();
    if (!emit(id)) return;
    for (const auto& p : nodes.at(id).parents)
      if (--nodes.at(p).walked_children == 0) ready.push({nodes.at(p).date, p});
  }
}

// Date-order traversal from one tip, the shape of git's default walk.
void emit_date_order(const NodeMap& nodes, const ObjectId& tip,
                     const std::function<bool(const ObjectId&)>& emit) {
  std::unordered_set<ObjectId, ObjectIdHash> seen{tip};
  ReadyQueue frontier;
  frontier.push({nodes.at(tip).date, tip});
  while (!frontier.empty()) {
    const ObjectId id = frontier.top().second;
    frontier.pop();
    if (!emit(id)) return;
    for (const auto& p : nodes.at(id).parents)
      if (seen.insert(p).second) frontier.push({nodes.at(p).date, p});
  }
}

}  // namespace

std::vector<std::string> list_branches(const Repository& repo, bool include_local,
                                       bool include_remote) {
  std::vector<std::string> out;
  if (include_local) {
    for (const auto& ref : repo.list_refs("refs/heads"))
      out.push_back(ref.name.substr(std::string("refs/heads/").size()));
  }
  if (include_remote) {
    for (const auto& ref : repo.list_refs("refs/remotes"))
      out.push_back(ref.name.substr(std::string("refs/remotes/").size()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ObjectId resolve_branch(const Repository& repo, const std::string& name) {
  std::optional<ObjectId> target;
  if (name.rfind("refs/", 0) == 0 || name == "HEAD") target = repo.resolve_ref(name);
  if (!target) target = repo.resolve_ref("refs/heads/" + name);
  if (!target) target = repo.resolve_ref("refs/remotes/" + name);
  if (!target) target = repo.resolve_ref("refs/tags/" + name);
  if (!target) {
    if (auto id = ObjectId::try_from_hex(name); id && repo.contains(*id)) target = id;
  }
  if (!target) raise(Errc::unknown_branch, "unknown branch '" + name + "'");
  try {
    return repo.peel_to_commit(*target);
  } catch (const Error&) {
    raise(Errc::unknown_branch, "branch '" + name + "' does not point to a commit");
  }
}

std::vector<ObjectId> walk_commits(const Repository& repo, std::span<const std::string> branches,
                                   const WalkOptions& opts) {
  std::vector<ObjectId> tips;
  tips.reserve(branches.size());
  for (const auto& name : branches) tips.push_back(resolve_branch(repo, name));

  std::vector<ObjectId> out;
  std::unordered_set<ObjectId, ObjectIdHash> emitted;
  const auto limit_reached = [&] { return opts.limit && out.size() >= *opts.limit; };
  const auto emit = [&](const ObjectId& id) {
    if (!opts.dedup || emitted.insert(id).second) out.push_back(id);
    return !limit_reached();
  };

  if (opts.topo_order && opts.dedup) {
    // One union subgraph across all branches, sorted as a whole.
    NodeMap nodes;
    for (const auto& tip : tips) collect(repo, tip, opts.first_parent, nodes);
    emit_topo(nodes, emit);
  } else {
    // Branches walked in input order; dedup (when on) filters re-emits.
    for (const auto& tip : tips) {
      if (limit_reached()) break;
      NodeMap nodes;
      collect(repo, tip, opts.first_parent, nodes);
      if (opts.topo_order)
        emit_topo(nodes, emit);
      else
        emit_date_order(nodes, tip, emit);
    }
  }

  if (opts.limit && out.size() > *opts.limit) out.resize(*opts.limit);
  return out;
}

}  // namespace miner
