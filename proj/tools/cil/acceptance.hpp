#pragma once

// The acceptance suite: eight numbered end-to-end checks with pinned
// tolerances. Each prints exactly one "criterion N: PASS/FAIL ..." line.
// run_acceptance returns the number of failed criteria.

#include <iosfwd>
#include <vector>

#include <cil/abelian_group.hpp>

namespace cil::acceptance {

inline constexpr int kCriteria = 8;

bool run_criterion(int n, std::ostream& out);
int run_acceptance(const std::vector<int>& criteria, std::ostream& out);

// Independent invariant-factor oracle: classic gcd elimination with a
// divisibility fold, no transform tracking. Returns the full normalized
// diagonal (including 1s and 0s) of the canonical diagonal form.
std::vector<bigint> reference_invariant_diagonal(IntMatrix m);

}  // namespace cil::acceptance
