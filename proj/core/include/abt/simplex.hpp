#pragma once

#include <vector>

namespace abt {

struct LpResult {
  std::vector<double> x;
  double value = 0.0;
};

/// Minimizes c.x subject to A x = b, x >= 0 with a dense two-phase simplex.
/// Dantzig pricing with a Bland fallback against cycling. Throws
/// std::runtime_error when the program is infeasible or unbounded.
LpResult solve_equality_lp(std::vector<std::vector<double>> A, std::vector<double> b,
                           std::vector<double> c);

}  // namespace abt
