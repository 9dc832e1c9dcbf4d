#include "psdbg/kps/validate.hpp"

#include "psdbg/logic/parser.hpp"
#include "psdbg/matcher/pattern.hpp"

namespace psdbg::kps {

namespace {

using Names = std::set<std::string, std::less<>>;

SourceLocation literalOrigin(const SourceSpan& span) { return {span.beginLine, span.beginColumn + 1}; }

class Validator {
 public:
  Validator(const ScriptFile& file, const Names& commands, const logic::Signature* sig)
      : file_(file), commands_(commands), sig_(sig) {}

  std::vector<Diagnostic> run() {
    Names called;
    for (const Statement* s : file_.allStatements())
      if (s->kind == Statement::Kind::ScriptCall) called.insert(s->name);
    for (const Script& script : file_.scripts) {
      // Callees see their caller's variables, which is not decidable here.
      checkVars_ = !called.count(script.name);
      Names defined;
      for (const Parameter& p : script.params) defined.insert(p.name);
      block(script.body, defined);
    }
    return std::move(out_);
  }

 private:
  void report(Diagnostic::Severity sev, std::string msg, const SourceSpan& span) {
    out_.push_back(Diagnostic{sev, std::move(msg), span});
  }

  void block(const Block& b, Names& defined) {
    for (const Statement& s : b) statement(s, defined);
  }

  void statement(const Statement& s, Names& defined) {
    switch (s.kind) {
      case Statement::Kind::Command:
        if (!commands_.count(s.name)) {
          report(Diagnostic::Severity::Warning, "unknown command '" + s.name + "'", s.span);
        }
        for (const Argument& a : s.args) {
          // A bare name in argument position may stand for a string.
          if (a.value.kind != Expr::Kind::VarRef) expr(a.value, defined);
          literals(a.value);
        }
        break;
      case Statement::Kind::Assignment:
        expr(s.value, defined);
        literals(s.value);
        defined.insert(s.name);
        break;
      case Statement::Kind::ScriptCall: {
        const Script* callee = file_.find(s.name);
        if (!callee) {
          report(Diagnostic::Severity::Error, "call to undefined script '" + s.name + "'", s.span);
        } else {
          for (const Argument& a : s.args) {
            bool known = false;
            for (const Parameter& p : callee->params) known = known || p.name == a.name;
            if (!known) {
              report(Diagnostic::Severity::Error,
                     "script '" + s.name + "' has no parameter '" + a.name + "'", a.value.span);
            }
          }
          for (const Parameter& p : callee->params) {
            if (!p.defaultValue && !s.arg(p.name)) {
              report(Diagnostic::Severity::Error,
                     "missing argument '" + p.name + "' for script '" + s.name + "'", s.span);
            }
          }
        }
        for (const Argument& a : s.args) {
          expr(a.value, defined);
          literals(a.value);
        }
        break;
      }
      case Statement::Kind::Foreach:
      case Statement::Kind::TheOnly: block(s.body, defined); break;
      case Statement::Kind::Cases:
        for (const CaseBranch& c : s.cases) {
          Names inner = defined;
          try {
            auto p = matcher::parsePattern(c.pattern, sig_, literalOrigin(c.patternSpan));
            for (const auto& [name, kind] : p.schemaVars) inner.insert(name);
          } catch (const Error& e) {
            report(Diagnostic::Severity::Error, "bad case pattern: " + e.message(), c.patternSpan);
          }
          block(c.body, inner);
          for (const auto& n : inner) defined.insert(n);
        }
        if (s.defaultBlock) block(*s.defaultBlock, defined);
        break;
    }
  }

  void expr(const Expr& e, const Names& defined) {
    if (e.kind == Expr::Kind::VarRef && checkVars_ && !defined.count(e.text) &&
        !builtinVariables().count(e.text) && e.text.rfind("prover.", 0) != 0) {
      report(Diagnostic::Severity::Warning, "variable '" + e.text + "' may be undefined", e.span);
    }
    for (const Expr& o : e.operands) expr(o, defined);
  }

  void literals(const Expr& e) {
    if (e.kind == Expr::Kind::TermLit) {
      try {
        if (e.text.find("==>") != std::string::npos) {
          matcher::parsePattern(e.text, sig_, literalOrigin(e.span));
        } else if (sig_) {
          logic::parseTermOrFormula(e.text, *sig_, literalOrigin(e.span));
        }
      } catch (const Error& err) {
        report(Diagnostic::Severity::Error, "bad literal: " + err.message(), e.span);
      }
    }
    for (const Expr& o : e.operands) literals(o);
  }

  const ScriptFile& file_;
  const Names& commands_;
  const logic::Signature* sig_;
  bool checkVars_ = true;
  std::vector<Diagnostic> out_;
};

}  // namespace

const std::set<std::string, std::less<>>& builtinVariables() {
  static const Names names = {"openGoals", "currentLine"};
  return names;
}

std::string toString(const Diagnostic& d) {
  return std::to_string(d.span.beginLine) + ":" + std::to_string(d.span.beginColumn) + ": " +
         (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ") + d.message;
}

std::vector<Diagnostic> validate(const ScriptFile& file, const Names& knownCommands, const logic::Signature& sig) {
  return Validator(file, knownCommands, &sig).run();
}

std::vector<Diagnostic> validate(const ScriptFile& file, const Names& knownCommands) {
  return Validator(file, knownCommands, nullptr).run();
}

bool hasErrors(const std::vector<Diagnostic>& diagnostics) {
  for (const Diagnostic& d : diagnostics)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

}  // namespace psdbg::kps
