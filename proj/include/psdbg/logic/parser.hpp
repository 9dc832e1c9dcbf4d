#pragma once

#include <string_view>
#include <variant>

#include "psdbg/error.hpp"
#include "psdbg/logic/signature.hpp"
#include "psdbg/logic/syntax.hpp"

namespace psdbg::logic {

/// Parses a `.sqp` problem file:
///
///     file := decl* "conjecture" formula ";"
///     decl := "const" IDENT ";" | "fun" IDENT "/" NAT ";"
///           | "pred" IDENT ["/" NAT] ";" | "assume" formula ";"
Problem parseProblem(std::string_view text);

/// Connectives bind `!` > `&` > `|` > `->`; `->` is right-associative and
/// a quantifier body extends as far right as possible. An identifier bound
/// by an enclosing quantifier is a variable, otherwise it must be declared.
Formula parseFormula(std::string_view text, const Signature& sig, SourceLocation origin = {1, 1});
Term parseTerm(std::string_view text, const Signature& sig, SourceLocation origin = {1, 1});
/// `A, B ==> C`; either side may be empty.
Sequent parseSequent(std::string_view text, const Signature& sig, SourceLocation origin = {1, 1});

/// Term literal in a script: a formula if the text parses as one,
/// otherwise a term.
std::variant<Term, Formula> parseTermOrFormula(std::string_view text, const Signature& sig,
                                               SourceLocation origin = {1, 1});

}  // namespace psdbg::logic
