#pragma once

#include "pkl/matrix.hpp"

#include <vector>

namespace pkl {

/// Outcome of an exact feasibility problem {x >= 0 : A x = b}.
/// Exactly one of the two payloads is meaningful (Farkas alternative).
struct FeasibilityResult {
    bool feasible = false;
    std::vector<Rational> x;       ///< A x = b, x >= 0
    std::vector<Rational> farkas;  ///< y with A^T y >= 0 and b^T y < 0
};

/// Phase-one exact simplex with Bland's rule.
FeasibilityResult nonnegative_solution(const RationalMatrix& a, const std::vector<Rational>& b);

/// Re-checks either payload of a FeasibilityResult against (A, b).
bool verify_feasibility(const RationalMatrix& a, const std::vector<Rational>& b,
                        const FeasibilityResult& result);

}  // namespace pkl
