#pragma once

#include <set>
#include <string>
#include <vector>

#include "psdbg/kps/ast.hpp"
#include "psdbg/logic/signature.hpp"

namespace psdbg::kps {

struct Diagnostic {
  enum class Severity { Warning, Error };

  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string toString(const Diagnostic& d);

/// Variables readable in every context.
const std::set<std::string, std::less<>>& builtinVariables();

/// Static checks. Unknown commands and undefined variables are warnings;
/// unknown scripts and malformed term or pattern literals are errors.
std::vector<Diagnostic> validate(const ScriptFile& file, const std::set<std::string, std::less<>>& knownCommands,
                                 const logic::Signature& sig);

/// Without a signature, term literals are not checked and patterns are
/// parsed symbol-free.
std::vector<Diagnostic> validate(const ScriptFile& file, const std::set<std::string, std::less<>>& knownCommands);

bool hasErrors(const std::vector<Diagnostic>& diagnostics);

}  // namespace psdbg::kps
