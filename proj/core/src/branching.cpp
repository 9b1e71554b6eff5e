#include "abt/branching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace abt {

BranchingFunction BranchingFunction::power(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("power: alpha must lie in (0,1]");
  BranchingFunction h;
  h.kind_ = Kind::Power;
  h.alpha_ = alpha;
  return h;
}

BranchingFunction BranchingFunction::affine_jump(double a, double b) {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("affine_jump: coefficients must be >= 0");
  BranchingFunction h;
  h.kind_ = Kind::AffineJump;
  h.a_ = a;
  h.b_ = b;
  return h;
}

BranchingFunction BranchingFunction::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw std::invalid_argument("tabulated: empty knot list");
  std::sort(knots.begin(), knots.end());
  if (knots.front().first < 0.0) throw std::invalid_argument("tabulated: negative multiplicity knot");
  if (knots.front().first > 0.0) knots.insert(knots.begin(), {0.0, 0.0});
  if (knots.front().second != 0.0) throw std::invalid_argument("tabulated: cost at 0 must be 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].first == knots[i - 1].first)
      throw std::invalid_argument("tabulated: duplicate multiplicity knot");
    if (knots[i].second < 0.0) throw std::invalid_argument("tabulated: negative cost");
  }
  BranchingFunction h;
  h.kind_ = Kind::Tabulated;
  h.knots_ = std::move(knots);
  return h;
}

double BranchingFunction::operator()(double multiplicity) const {
  if (!std::isfinite(multiplicity)) throw std::domain_error("branching function: non-finite multiplicity");
  double y = std::fabs(multiplicity);
  if (y == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power:
      return std::pow(y, alpha_);
    case Kind::AffineJump:
      return a_ + b_ * y;
    case Kind::Tabulated: {
      // knots_ sorted and starting at (0,0); extend the last segment beyond
      // the final knot.
      std::size_t hi = 1;
      while (hi + 1 < knots_.size() && knots_[hi].first < y) ++hi;
      const auto& [y0, c0] = knots_[hi - 1];
      const auto& [y1, c1] = knots_[hi];
      double t = (y - y0) / (y1 - y0);
      return c0 + t * (c1 - c0);
    }
  }
  return 0.0;
}

std::string BranchingFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Power: os << "power(alpha=" << alpha_ << ")"; break;
    case Kind::AffineJump: os << "affine_jump(a=" << a_ << ",b=" << b_ << ")"; break;
    case Kind::Tabulated: os << "tabulated(" << knots_.size() << " knots)"; break;
  }
  return os.str();
}

BranchingAxiomReport check_branching_axioms(const BranchingFunction& h, BranchingGrid grid, double tol) {
  BranchingAxiomReport rep;
  rep.grid = grid;
  if (grid.points < 2 || !(grid.max_value > 0.0))
    throw std::invalid_argument("check_branching_axioms: grid must contain at least two points");

  std::vector<double> ys(grid.points);
  for (int i = 0; i < grid.points; ++i) ys[i] = grid.max_value * double(i) / double(grid.points - 1);

  rep.even_ok = true;
  for (double y : ys) {
    if (std::fabs(h(y) - h(-y)) > tol) rep.even_ok = false;
  }

  rep.subadditive_ok = true;
  rep.worst_subadditive_violation = 0.0;
  for (double y1 : ys) {
    for (double y2 : ys) {
      double v = h(y1 + y2) - h(y1) - h(y2);
      if (v > rep.worst_subadditive_violation) {
        rep.worst_subadditive_violation = v;
        rep.worst_pair = {y1, y2};
      }
    }
  }
  if (rep.worst_subadditive_violation > tol) rep.subadditive_ok = false;

  rep.monotone_ok = true;
  rep.worst_monotone_violation = 0.0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    double v = h(ys[i - 1]) - h(ys[i]);
    rep.worst_monotone_violation = std::max(rep.worst_monotone_violation, v);
  }
  if (rep.worst_monotone_violation > tol) rep.monotone_ok = false;

  rep.derivative_blowup_ok = true;
  double prev = -1.0;
  for (int k = 1; k <= 8; ++k) {
    double y = std::pow(10.0, -k);
    double ratio = h(y) / y;
    if (prev >= 0.0 && !(ratio > prev)) rep.derivative_blowup_ok = false;
    prev = ratio;
  }

  return rep;
}

}  // namespace abt
