#include "psdbg/calculus/proof_tree.hpp"

#include <algorithm>

#include "psdbg/error.hpp"

namespace psdbg::calculus {

std::string toString(const RuleArgument& arg) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return logic::toString(v);
        }
      },
      arg);
}

ProofTree::ProofTree(logic::Signature signature, logic::Sequent root)
    : signature_(std::move(signature)) {
  ProofNode node;
  node.id = 0;
  node.sequent = std::move(root);
  nodes_.push_back(std::move(node));
}

const ProofNode& ProofTree::node(NodeId id) const {
  if (id >= nodes_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "no proof node " + std::to_string(id));
  }
  return nodes_[id];
}

std::vector<NodeId> ProofTree::openLeaves() const {
  std::vector<NodeId> out;
  for (const ProofNode& n : nodes_) {
    if (n.isOpenLeaf()) out.push_back(n.id);
  }
  return out;
}

std::vector<NodeId> ProofTree::leavesUnder(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    const ProofNode& n = node(cur);
    if (n.children.empty()) {
      out.push_back(cur);
      continue;
    }
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<NodeId> ProofTree::openLeavesUnder(NodeId id) const {
  std::vector<NodeId> out;
  for (NodeId leaf : leavesUnder(id)) {
    if (nodes_[leaf].isOpenLeaf()) out.push_back(leaf);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ProofTree::isAncestorOrSelf(NodeId ancestor, NodeId id) const {
  std::optional<NodeId> cur = id;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = node(*cur).parent;
  }
  return false;
}

void ProofTree::requireOpenLeaf(NodeId id) const {
  const ProofNode& n = node(id);
  if (!n.isLeaf()) {
    throw Error(ErrorCode::NotALeaf, "node " + std::to_string(id) + " is not a leaf");
  }
  if (n.closed) {
    throw Error(ErrorCode::GoalAlreadyClosed, "node " + std::to_string(id) + " is closed");
  }
}

std::vector<NodeId> ProofTree::expand(NodeId id, RuleApplication app, std::vector<Premise> premises) {
  requireOpenLeaf(id);
  std::vector<NodeId> created;
  for (Premise& p : premises) {
    ProofNode child;
    child.id = nodes_.size();
    child.sequent = std::move(p.sequent);
    child.parent = id;
    child.branchLabel = std::move(p.label);
    created.push_back(child.id);
    nodes_.push_back(std::move(child));
  }
  ProofNode& n = nodes_[id];
  app.producedNodes = created;
  n.ruleApplied = std::move(app);
  n.children = created;
  if (created.empty()) propagateClosed(id);
  return created;
}

void ProofTree::propagateClosed(NodeId id) {
  nodes_[id].closed = true;
  std::optional<NodeId> parent = nodes_[id].parent;
  while (parent) {
    ProofNode& p = nodes_[*parent];
    bool all = std::all_of(p.children.begin(), p.children.end(),
                           [this](NodeId c) { return nodes_[c].closed; });
    if (!all || p.closed) break;
    p.closed = true;
    parent = p.parent;
  }
}

std::string serialize(const ProofTree& tree) {
  std::string out = "sig consts";
  for (const auto& c : tree.signature().constants()) out += " " + c;
  out += " funs";
  for (const auto& [f, a] : tree.signature().functions()) out += " " + f + "/" + std::to_string(a);
  out += " preds";
  for (const auto& [p, a] : tree.signature().predicates()) out += " " + p + "/" + std::to_string(a);
  out += "\n";
  for (const ProofNode& n : tree.nodes()) {
    out += std::to_string(n.id) + " [" + logic::toString(n.sequent) + "]";
    if (n.parent) out += " parent=" + std::to_string(*n.parent);
    if (n.branchLabel) out += " label=" + *n.branchLabel;
    if (n.closed) out += " closed";
    if (n.ruleApplied) {
      out += " rule=" + n.ruleApplied->ruleName;
      if (n.ruleApplied->position) out += "@" + logic::toString(*n.ruleApplied->position);
      for (const auto& [k, v] : n.ruleApplied->arguments) out += " " + k + "=" + toString(v);
      out += " ->";
      for (NodeId c : n.children) out += " " + std::to_string(c);
    }
    out += "\n";
  }
  return out;
}

}  // namespace psdbg::calculus
