#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace abt {

/// Multiplicity-cost function H: even, H(0) = 0, subadditive, non-decreasing
/// on the positive axis for the kinds the solver accepts. Subadditivity makes
/// joint transport of mass along a shared edge cheaper than separate routes.
class BranchingFunction {
 public:
  enum class Kind { Power, AffineJump, Tabulated };

  /// H(y) = |y|^alpha, alpha in (0,1].
  static BranchingFunction power(double alpha);

  /// H(0) = 0, H(y) = a + b|y| otherwise; a >= 0 is a fixed cost per unit
  /// length, b >= 0 a slope.
  static BranchingFunction affine_jump(double a, double b);

  /// Piecewise-linear interpolation of (multiplicity, cost) knots; the first
  /// knot (0, 0) is implied and prepended if missing. Beyond the last knot the
  /// final segment is extended.
  static BranchingFunction tabulated(std::vector<std::pair<double, double>> knots);

  /// Evaluates H(|y|). Throws std::domain_error for non-finite y.
  double operator()(double multiplicity) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double jump() const { return a_; }
  double slope() const { return b_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  std::string describe() const;

 private:
  BranchingFunction() = default;
  Kind kind_ = Kind::Power;
  double alpha_ = 0.5;
  double a_ = 0.0, b_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

/// Sample grid used when validating branching axioms: `points` values evenly
/// spaced on [0, max_value], zero included.
struct BranchingGrid {
  double max_value = 10.0;
  int points = 100;
};

struct BranchingAxiomReport {
  bool even_ok = false;
  bool subadditive_ok = false;
  bool monotone_ok = false;
  /// Finite proxy for H(y)/y -> +inf as y -> 0+: the ratio must be strictly
  /// increasing along y = 1e-1, 1e-2, ..., 1e-8.
  bool derivative_blowup_ok = false;

  double worst_subadditive_violation = 0.0;
  std::array<double, 2> worst_pair{0.0, 0.0};
  double worst_monotone_violation = 0.0;
  BranchingGrid grid;

  bool all_ok() const { return even_ok && subadditive_ok && monotone_ok && derivative_blowup_ok; }
  /// Everything except the blowup proxy; linear H fails only that one.
  bool solver_ok() const { return even_ok && subadditive_ok && monotone_ok; }
};

/// Checks the branching axioms on a finite grid with absolute tolerance
/// `tol` (default 1e-12). Failures are reported, never thrown.
BranchingAxiomReport check_branching_axioms(const BranchingFunction& h, BranchingGrid grid = {},
                                            double tol = 1e-12);

}  // namespace abt
