#pragma once

#include <optional>
#include <vector>

#include "abt/anisotropy.hpp"
#include "abt/geometry.hpp"

namespace abt {

/// Witness that a normed space fails a hypermetric inequality: points P_i and
/// integer coefficients x_i with sum x_i = 1 whose weighted pairwise-distance
/// form sum_{i<j} x_i x_j d(P_i, P_j) is strictly positive.
struct HypermetricCertificate {
  std::vector<VecN> points;
  std::vector<int> coefficients;
  double value = 0.0;
};

struct HypermetricBudget {
  int max_points = 7;      // a
  int coeff_bound = 2;     // |x_i| <= B
  double violation_tol = 1e-9;
  int threads = 0;         // 0 = hardware concurrency
};

/// Exhaustive search over all point subsets of the grid (up to max_points)
/// and all nonzero integer coefficient vectors bounded by coeff_bound that
/// sum to 1. Returns the first violation in lexicographic enumeration order
/// (point indices ascending, coefficients -B..-1,1..B at each point),
/// independently of the thread count. An empty result means no violation was
/// found within this finite budget; it is NOT a proof of hypermetricity.
std::optional<HypermetricCertificate> hypermetric_search(const Anisotropy& norm,
                                                         const std::vector<VecN>& grid,
                                                         HypermetricBudget budget = {});

/// Integer lattice {-radius..radius}^dim in lexicographic order.
std::vector<VecN> lattice_grid(int dim, int radius = 1);

}  // namespace abt
