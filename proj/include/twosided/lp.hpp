#pragma once

#include <vector>

#include "twosided/rational.hpp"

namespace twosided {

/// maximize c.x subject to A x <= b, x >= 0, with b >= 0 so the origin is feasible.
struct LinearProgram {
  std::vector<Rat> objective;
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;

  /// Appends a constraint row; coefficients beyond the given ones are zero.
  void add_row(std::vector<Rat> coeffs, Rat bound);
};

struct LpSolution {
  Rat value;
  std::vector<Rat> x;
  int pivots = 0;
};

/// Exact primal simplex with Bland's rule. Throws when the program is unbounded.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace twosided
