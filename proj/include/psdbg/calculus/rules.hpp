#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psdbg/calculus/proof_tree.hpp"

namespace psdbg::calculus {

/// The fixed rule inventory, sorted by name. See docs/calculus.md.
const std::vector<std::string>& ruleNames();
bool isRule(std::string_view name);

/// Arguments a rule cannot be applied without.
std::vector<std::string> requiredArguments(std::string_view rule);

/// Applies `app` to the open leaf `id`. Without a position, the rule acts on
/// the leftmost eligible formula. Returns the new open leaves, in order;
/// closing rules return an empty list.
std::vector<NodeId> applyRule(ProofTree& tree, NodeId id, const RuleApplication& app);

/// Replaces the unique top-level quantifier binding `var` (an existential
/// in the succedent or a universal in the antecedent) by its instance.
NodeId instantiate(ProofTree& tree, NodeId id, const std::string& var, const logic::Term& witness);

struct RuleInfo {
  std::string name;
  std::vector<std::string> requiredArguments;

  friend bool operator==(const RuleInfo&, const RuleInfo&) = default;
};

/// Rules applicable to the leaf, at `position` if given, sorted by name.
std::vector<RuleInfo> applicableRules(const ProofTree& tree, NodeId id,
                                      const std::optional<logic::FormulaPosition>& position);

/// Top-level positions where `rule` can act on `s` (empty for cut).
std::vector<logic::FormulaPosition> eligiblePositions(std::string_view rule, const logic::Sequent& s);

}  // namespace psdbg::calculus
