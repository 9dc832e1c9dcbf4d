#include "psdbg/calculus/strategy.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "psdbg/calculus/rules.hpp"
#include "psdbg/logic/substitution.hpp"

namespace psdbg::calculus {

using logic::Formula;
using logic::FormulaPosition;
using logic::Sequent;
using logic::Side;
using logic::Term;

namespace {

using RoundCounter = std::map<std::string, int>;

struct Step {
  std::string rule;
  FormulaPosition position;
};

std::optional<Step> firstEligible(const Sequent& s, std::initializer_list<const char*> rules) {
  // Leftmost formula wins; antecedent before succedent.
  std::optional<Step> best;
  auto key = [](const FormulaPosition& p) {
    return std::make_pair(p.side == Side::Antecedent ? 0 : 1, p.index);
  };
  for (const char* rule : rules) {
    auto eligible = eligiblePositions(rule, s);
    if (eligible.empty()) continue;
    if (!best || key(eligible.front()) < key(best->position)) {
      best = Step{rule, eligible.front()};
    }
  }
  return best;
}

std::string roundKey(Side side, const Formula& f) {
  return std::string(logic::toString(side)) + "|" + logic::toString(f);
}

class Saturation {
 public:
  Saturation(ProofTree& tree, const StrategyOptions& options) : tree_(tree), options_(options) {}

  int run(NodeId start) {
    std::vector<NodeId> work{start};
    rounds_[start] = {};
    while (!work.empty() && steps_ < options_.budget) {
      NodeId leaf = work.back();
      work.pop_back();
      if (!tree_.isOpenLeaf(leaf)) continue;
      std::vector<NodeId> next = expand(leaf);
      for (auto it = next.rbegin(); it != next.rend(); ++it) work.push_back(*it);
    }
    return steps_;
  }

 private:
  std::vector<NodeId> apply(NodeId leaf, RuleApplication app) {
    ++steps_;
    RoundCounter inherited = rounds_[leaf];
    std::vector<NodeId> children = applyRule(tree_, leaf, app);
    for (NodeId c : children) rounds_[c] = inherited;
    return children;
  }

  std::vector<NodeId> applyAt(NodeId leaf, const Step& step) {
    RuleApplication app;
    app.ruleName = step.rule;
    app.position = step.position;
    return apply(leaf, std::move(app));
  }

  // Applies the highest-priority rule; returns the leaves to continue with.
  std::vector<NodeId> expand(NodeId leaf) {
    const Sequent& s = tree_.node(leaf).sequent;
    if (options_.closing) {
      if (auto step = firstEligible(s, {"closeTrue", "closeFalse", "eqClose", "closeAxiom"})) {
        return applyAt(leaf, *step);
      }
    }
    if (auto step = firstEligible(s, {"notLeft", "notRight", "andLeft", "orRight", "impRight"})) {
      return applyAt(leaf, *step);
    }
    if (auto step = firstEligible(s, {"allRight", "exLeft"})) return applyAt(leaf, *step);
    {
      std::vector<const char*> branching;
      if (options_.branchRight) branching.push_back("andRight");
      if (options_.branchLeft) {
        branching.push_back("orLeft");
        branching.push_back("impLeft");
      }
      std::optional<Step> best;
      for (const char* rule : branching) {
        auto candidate = firstEligible(s, {rule});
        if (!candidate) continue;
        auto key = [](const Step& st) {
          return std::make_pair(st.position.side == Side::Antecedent ? 0 : 1, st.position.index);
        };
        if (!best || key(*candidate) < key(*best)) best = candidate;
      }
      if (best) return applyAt(leaf, *best);
    }
    if (options_.instantiate) return instantiationRound(leaf);
    return {};
  }

  std::vector<NodeId> instantiationRound(NodeId leaf) {
    while (true) {
      const Sequent& s = tree_.node(leaf).sequent;
      auto target = nextQuantifier(leaf, s);
      if (!target) return {};
      const Side side = target->side;
      const Formula quantified = s.side(side)[target->index];
      const std::string key = roundKey(side, quantified);

      std::vector<Term> pool = logic::groundTerms(s);
      if (pool.empty()) {
        pool.push_back(Term::constant(logic::freshConstant(tree_.signature(), "c")));
      }
      NodeId cur = leaf;
      bool progressed = false;
      for (const Term& t : pool) {
        if (steps_ >= options_.budget) break;
        const Sequent& now = tree_.node(cur).sequent;
        Formula instance = logic::substitute(quantified.body(), quantified.name(), t);
        const auto& list = now.side(side);
        if (std::find(list.begin(), list.end(), instance) != list.end()) continue;
        auto pos = std::find(list.begin(), list.end(), quantified) - list.begin();
        RuleApplication app;
        app.ruleName = side == Side::Antecedent ? "allLeft" : "exRight";
        app.position = FormulaPosition{side, static_cast<std::size_t>(pos), {}};
        app.arguments.insert_or_assign("with", t);
        cur = apply(cur, std::move(app)).front();
        progressed = true;
      }
      rounds_[cur][key] += 1;
      if (progressed) return {cur};
      // Every instance was already present; the round is spent, try the
      // next quantified formula on the same leaf.
    }
  }

  std::optional<FormulaPosition> nextQuantifier(NodeId leaf, const Sequent& s) {
    const RoundCounter& used = rounds_[leaf];
    for (Side side : {Side::Antecedent, Side::Succedent}) {
      const auto kind = side == Side::Antecedent ? Formula::Kind::Forall : Formula::Kind::Exists;
      const auto& list = s.side(side);
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].kind() != kind) continue;
        auto it = used.find(roundKey(side, list[i]));
        if ((it == used.end() ? 0 : it->second) < options_.instLimit) {
          return FormulaPosition{side, i, {}};
        }
      }
    }
    return std::nullopt;
  }

  ProofTree& tree_;
  const StrategyOptions& options_;
  std::map<NodeId, RoundCounter> rounds_;
  int steps_ = 0;
};

StrategyResult collect(const ProofTree& tree, NodeId id, int steps) {
  StrategyResult result;
  result.subtreeRoot = id;
  result.stepsUsed = steps;
  for (NodeId leaf : tree.leavesUnder(id)) {
    (tree.node(leaf).closed ? result.closedLeaves : result.openLeaves).push_back(leaf);
  }
  return result;
}

}  // namespace

StrategyResult saturate(ProofTree& tree, NodeId id, const StrategyOptions& options) {
  tree.requireOpenLeaf(id);
  int steps = options.budget <= 0 ? 0 : Saturation(tree, options).run(id);
  return collect(tree, id, steps);
}

StrategyResult autoStrategy(ProofTree& tree, NodeId id, int budget, int instLimit) {
  StrategyOptions options;
  options.budget = budget;
  options.instLimit = instLimit;
  return saturate(tree, id, options);
}

StrategyResult simplify(ProofTree& tree, NodeId id, int budget) {
  StrategyOptions options;
  options.budget = budget;
  options.closing = false;
  options.branchRight = false;
  options.instantiate = false;
  return saturate(tree, id, options);
}

bool tryClose(ProofTree& tree, NodeId id, int budget, int instLimit) {
  ProofTree saved = tree;
  autoStrategy(tree, id, budget, instLimit);
  if (tree.node(id).closed) return true;
  tree = std::move(saved);
  return false;
}

}  // namespace psdbg::calculus
