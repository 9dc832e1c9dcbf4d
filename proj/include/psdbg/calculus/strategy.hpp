#pragma once

#include <vector>

#include "psdbg/calculus/proof_tree.hpp"

namespace psdbg::calculus {

struct StrategyResult {
  std::vector<NodeId> closedLeaves;
  std::vector<NodeId> openLeaves;
  int stepsUsed = 0;
  NodeId subtreeRoot = 0;
};

/// Which rule classes a saturation run may use. `auto` enables all of
/// them; `simplify` only decomposes.
struct StrategyOptions {
  int budget = 1000;
  int instLimit = 2;
  bool closing = true;
  bool branchLeft = true;   // orLeft, impLeft
  bool branchRight = true;  // andRight
  bool instantiate = true;  // allLeft, exRight
};

/// Deterministic saturation of the subtree below `id`. Per leaf, in order:
/// closing rules; notLeft/notRight/andLeft/orRight/impRight; allRight/exLeft
/// with fresh constants; andRight/orLeft/impLeft on the leftmost eligible
/// formula; then one round of allLeft/exRight over every ground term of the
/// goal, at most `instLimit` rounds per quantified formula and branch.
/// One rule application costs one unit of budget.
StrategyResult saturate(ProofTree& tree, NodeId id, const StrategyOptions& options);

StrategyResult autoStrategy(ProofTree& tree, NodeId id, int budget, int instLimit);

/// Non-closing decomposition: non-branching rules, fresh-constant rules,
/// and case splits on antecedent disjunctions and implications.
StrategyResult simplify(ProofTree& tree, NodeId id, int budget);

/// Runs autoStrategy; unless the node ends up closed the tree is restored
/// to its exact prior value and false is returned.
bool tryClose(ProofTree& tree, NodeId id, int budget, int instLimit);

}  // namespace psdbg::calculus
