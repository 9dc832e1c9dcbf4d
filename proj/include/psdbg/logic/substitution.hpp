#pragma once

#include <string>

#include "psdbg/logic/syntax.hpp"

namespace psdbg::logic {

Term substitute(const Term& t, const std::string& var, const Term& replacement);

/// Replaces the free occurrences of `var` in `f` by `replacement`. A binder
/// that would capture a free variable of `replacement` is renamed to the
/// first unused name among var1, var2, ...
Formula substitute(const Formula& f, const std::string& var, const Term& replacement);

}  // namespace psdbg::logic
