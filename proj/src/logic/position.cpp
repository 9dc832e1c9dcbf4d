#include "psdbg/logic/position.hpp"

#include <charconv>
#include <optional>

#include "psdbg/error.hpp"

namespace psdbg::logic {

namespace {

[[noreturn]] void invalid(const FormulaPosition& pos) {
  throw Error(ErrorCode::InvalidPosition, "position " + toString(pos) + " does not resolve");
}

}  // namespace

const Formula& topFormula(const Sequent& s, const FormulaPosition& pos) {
  const auto& list = s.side(pos.side);
  if (pos.index >= list.size()) invalid(pos);
  return list[pos.index];
}

Subexpression resolve(const Sequent& s, const FormulaPosition& pos) {
  Subexpression cur = topFormula(s, pos);
  for (std::size_t step : pos.innerPath) {
    if (const auto* f = std::get_if<Formula>(&cur)) {
      if (!f->terms().empty()) {
        if (step >= f->terms().size()) invalid(pos);
        cur = f->terms()[step];
      } else {
        if (step >= f->children().size()) invalid(pos);
        cur = f->children()[step];
      }
    } else {
      const Term& t = std::get<Term>(cur);
      if (step >= t.args().size()) invalid(pos);
      cur = t.args()[step];
    }
  }
  return cur;
}

namespace {

void enumerateTerm(const Term& t, FormulaPosition& pos, std::vector<FormulaPosition>& out) {
  out.push_back(pos);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    pos.innerPath.push_back(i);
    enumerateTerm(t.args()[i], pos, out);
    pos.innerPath.pop_back();
  }
}

void enumerateFormula(const Formula& f, FormulaPosition& pos, std::vector<FormulaPosition>& out) {
  out.push_back(pos);
  for (std::size_t i = 0; i < f.terms().size(); ++i) {
    pos.innerPath.push_back(i);
    enumerateTerm(f.terms()[i], pos, out);
    pos.innerPath.pop_back();
  }
  for (std::size_t i = 0; i < f.children().size(); ++i) {
    pos.innerPath.push_back(i);
    enumerateFormula(f.children()[i], pos, out);
    pos.innerPath.pop_back();
  }
}

}  // namespace

std::vector<FormulaPosition> enumeratePositions(const Sequent& s) {
  std::vector<FormulaPosition> out;
  for (Side side : {Side::Antecedent, Side::Succedent}) {
    const auto& list = s.side(side);
    for (std::size_t i = 0; i < list.size(); ++i) {
      FormulaPosition pos{side, i, {}};
      enumerateFormula(list[i], pos, out);
    }
  }
  return out;
}

std::optional<FormulaPosition> locate(const Sequent& s, const void* identity) {
  for (const FormulaPosition& pos : enumeratePositions(s)) {
    Subexpression sub = resolve(s, pos);
    const void* id = std::visit([](const auto& x) { return x.identity(); }, sub);
    if (id == identity) return pos;
  }
  return std::nullopt;
}

namespace {

Term replaceInTerm(const Term& t, const std::vector<std::size_t>& path, std::size_t depth,
                   const Term& replacement) {
  if (depth == path.size()) return replacement;
  std::size_t step = path[depth];
  if (step >= t.args().size()) {
    throw Error(ErrorCode::InvalidPosition, "inner path leaves the term");
  }
  std::vector<Term> args = t.args();
  args[step] = replaceInTerm(args[step], path, depth + 1, replacement);
  return Term::application(t.name(), std::move(args));
}

Formula replaceInFormula(const Formula& f, const std::vector<std::size_t>& path, std::size_t depth,
                         const Term& replacement) {
  if (depth == path.size()) {
    throw Error(ErrorCode::InvalidPosition, "inner path ends at a formula, not a term");
  }
  std::size_t step = path[depth];
  if (!f.terms().empty()) {
    if (step >= f.terms().size()) throw Error(ErrorCode::InvalidPosition, "inner path out of range");
    std::vector<Term> terms = f.terms();
    terms[step] = replaceInTerm(terms[step], path, depth + 1, replacement);
    if (f.kind() == Formula::Kind::Equality) return Formula::equality(terms[0], terms[1]);
    return Formula::atom(f.name(), std::move(terms));
  }
  if (step >= f.children().size()) {
    throw Error(ErrorCode::InvalidPosition, "inner path out of range");
  }
  Formula child = replaceInFormula(f.children()[step], path, depth + 1, replacement);
  switch (f.kind()) {
    case Formula::Kind::Not: return Formula::negation(child);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return Formula::quantifier(f.kind(), f.name(), child);
    default:
      return step == 0 ? Formula::binary(f.kind(), child, f.right())
                       : Formula::binary(f.kind(), f.left(), child);
  }
}

}  // namespace

Formula replaceTerm(const Formula& f, const std::vector<std::size_t>& path, const Term& replacement) {
  return replaceInFormula(f, path, 0, replacement);
}

std::string toString(const FormulaPosition& pos) {
  std::string out(toString(pos.side));
  out += ':';
  out += std::to_string(pos.index);
  if (!pos.innerPath.empty()) {
    out += ':';
    for (std::size_t i = 0; i < pos.innerPath.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(pos.innerPath[i]);
    }
  }
  return out;
}

namespace {

std::size_t parseIndex(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidPosition, "malformed position '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

FormulaPosition parsePosition(std::string_view text) {
  FormulaPosition pos;
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidPosition, "malformed position '" + std::string(text) + "'");
  }
  std::string_view side = text.substr(0, colon);
  if (side == "ante") {
    pos.side = Side::Antecedent;
  } else if (side == "succ") {
    pos.side = Side::Succedent;
  } else {
    throw Error(ErrorCode::InvalidPosition, "position side must be 'ante' or 'succ'");
  }
  std::string_view rest = text.substr(colon + 1);
  auto colon2 = rest.find(':');
  pos.index = parseIndex(rest.substr(0, colon2), text);
  if (colon2 != std::string_view::npos) {
    std::string_view path = rest.substr(colon2 + 1);
    while (true) {
      auto dot = path.find('.');
      pos.innerPath.push_back(parseIndex(path.substr(0, dot), text));
      if (dot == std::string_view::npos) break;
      path = path.substr(dot + 1);
    }
  }
  return pos;
}

}  // namespace psdbg::logic
