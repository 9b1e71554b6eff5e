#pragma once

#include <map>
#include <utility>
#include <vector>

#include "abt/anisotropy.hpp"
#include "abt/geometry.hpp"

namespace abt {

/// Builds nested circumscribed polygons P_k around the unit ball C of a
/// planar convex gauge: at depth k the boundary of C is touched at 2^k
/// dyadic ray directions and P_k is the intersection of the supporting
/// half-planes there. Supporting lines are cached by reduced dyadic angle,
/// so a dyadic point shared with a coarser depth reuses the same half-plane
/// and the polygons are nested by construction: C subset P_k subset P_{k-1}.
class BodyApproximator {
 public:
  /// `gauge` must be planar and convex (the caller is expected to have run
  /// check_convexity for functional representations).
  explicit BodyApproximator(Anisotropy gauge);

  /// Circumscribed polygon at depth k, 2 <= k <= 16. Cached.
  const SymmetricPolygon& polygon_at(int depth);

  const Anisotropy& gauge() const { return gauge_; }

 private:
  struct KeptNormal {
    double angle;  // dyadic ray angle in [0, pi)
    Vec2 normal;
    int depth_introduced;
  };

  Vec2 supporting_normal(double angle) const;
  void extend_to(int depth);
  SymmetricPolygon build_polygon() const;

  Anisotropy gauge_;
  // reduced dyadic key (level, odd index) -> supporting normal
  std::map<std::pair<int, int>, Vec2> cache_;
  std::vector<KeptNormal> kept_;  // sorted by angle, near-duplicates dropped
  int built_depth_ = 0;
  std::map<int, SymmetricPolygon> polygons_;
  std::vector<Vec2> boundary_grid_;  // containment repair grid (functional gauges)
};

/// One-shot convenience wrapper around BodyApproximator.
SymmetricPolygon approximate_body(const Anisotropy& gauge, int depth);

}  // namespace abt
