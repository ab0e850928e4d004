// Conjunctions of linear constraints over the rationals.
#pragma once

#include <optional>
#include <vector>

#include "foalt/logic.hpp"

namespace foalt {

enum class LinOp : std::uint8_t { Lt, Le, Eq, Ne };

struct LinConstraint {
    Term term;  // term op 0
    LinOp op;
};

using RealModel = std::map<Var, Rational, VarLess>;

// Fourier-Motzkin with equality substitution. Disequalities are resolved by
// committing to one side at a time. Returns a model when satisfiable.
std::optional<RealModel> solveLinear(const std::vector<LinConstraint>& cs);

}  // namespace foalt
