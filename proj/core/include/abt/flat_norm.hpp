#pragma once

#include <array>
#include <map>
#include <vector>

#include "abt/currents.hpp"
#include "abt/geometry.hpp"

namespace abt {

/// Flat distance between two 0-currents: the exact optimum of transporting
/// weight between the atoms of S - T along straight segments (cost = length
/// per unit) or paying mass directly (cost 1 per unit). For 0-current
/// differences this discrete program computes the flat norm exactly, since an
/// optimal filling is a 1-current supported on segments between the atoms.
double flat_distance_zero(const ZeroCurrent& s, const ZeroCurrent& t);

/// Conforming planar triangulation used by the 1-current flat-distance bound.
struct TriangleMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;  // CCW node indices

  // Derived structure, filled by finish().
  std::vector<std::pair<int, int>> edges;  // ordered (lower index, higher index)
  std::map<std::pair<int, int>, int> edge_index;
  std::vector<double> edge_length;
  std::vector<double> triangle_area;

  void finish();

  /// Uniform grid of nx x ny square cells of side `cell`, each split along
  /// its north-east diagonal (so a global diagonal through the cell corners
  /// is a union of mesh edges).
  static TriangleMesh grid(Vec2 origin, double cell, int nx, int ny);

  int node_at(Vec2 p, double tol = 1e-9) const;  // -1 if absent
};

/// Upper bound for the flat distance between two planar 1-currents: the
/// optimal value of min M(R) + M(S) over mesh 1-chains R and 2-chains S with
/// P - Q = R + boundary(S). Requires every edge of P and Q to decompose into
/// mesh edges; throws SemanticError otherwise. Converges to the flat distance
/// under mesh refinement (no rate claimed).
double flat_distance_one_upper(const PolyhedralOneCurrent& p, const PolyhedralOneCurrent& q,
                               const TriangleMesh& mesh);

}  // namespace abt
