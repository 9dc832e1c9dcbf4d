#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "psdbg/logic/position.hpp"
#include "psdbg/logic/signature.hpp"
#include "psdbg/logic/syntax.hpp"

namespace psdbg::calculus {

using NodeId = std::size_t;

using RuleArgument = std::variant<logic::Term, logic::Formula, std::int64_t, std::string>;

std::string toString(const RuleArgument& arg);

struct RuleApplication {
  std::string ruleName;
  std::optional<logic::FormulaPosition> position;
  std::map<std::string, RuleArgument> arguments;
  std::vector<NodeId> producedNodes;

  friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

struct ProofNode {
  NodeId id = 0;
  logic::Sequent sequent;
  std::optional<RuleApplication> ruleApplied;
  std::vector<NodeId> children;
  std::optional<NodeId> parent;
  bool closed = false;
  std::optional<std::string> branchLabel;

  bool isLeaf() const { return children.empty(); }
  bool isOpenLeaf() const { return isLeaf() && !closed; }

  friend bool operator==(const ProofNode&, const ProofNode&) = default;
};

/// One premise produced by a rule: the child's sequent and its branch label.
struct Premise {
  logic::Sequent sequent;
  std::optional<std::string> label;
};

/// The explicit proof object. Node ids are indices and grow in creation
/// order. The tree owns the signature so that fresh constants introduced
/// during proof search are part of its value.
class ProofTree {
 public:
  ProofTree(logic::Signature signature, logic::Sequent root);

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const ProofNode& node(NodeId id) const;
  const std::vector<ProofNode>& nodes() const { return nodes_; }

  const logic::Signature& signature() const { return signature_; }
  logic::Signature& signature() { return signature_; }

  bool isOpenLeaf(NodeId id) const { return id < nodes_.size() && nodes_[id].isOpenLeaf(); }
  bool isClosed() const { return nodes_.front().closed; }

  /// Open leaves in id order.
  std::vector<NodeId> openLeaves() const;
  std::vector<NodeId> openLeavesUnder(NodeId id) const;
  /// All leaves of the subtree in left-to-right order.
  std::vector<NodeId> leavesUnder(NodeId id) const;
  bool isAncestorOrSelf(NodeId ancestor, NodeId id) const;

  /// Throws NotALeaf / GoalAlreadyClosed unless `id` is an open leaf.
  void requireOpenLeaf(NodeId id) const;

  /// Records a rule application on an open leaf. An empty premise list
  /// closes the node; closure propagates to ancestors. Returns the new ids.
  std::vector<NodeId> expand(NodeId id, RuleApplication app, std::vector<Premise> premises);

  friend bool operator==(const ProofTree&, const ProofTree&) = default;

 private:
  void propagateClosed(NodeId id);

  logic::Signature signature_;
  std::vector<ProofNode> nodes_;
};

/// Canonical text rendering of every node, used for digests and dumps.
std::string serialize(const ProofTree& tree);

}  // namespace psdbg::calculus
