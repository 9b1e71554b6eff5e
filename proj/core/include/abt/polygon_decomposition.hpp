#pragma once

#include <utility>
#include <vector>

#include "abt/anisotropy.hpp"
#include "abt/geometry.hpp"

namespace abt {

/// Decomposition of a polygon norm into projection costs: for every boundary
/// point u of the polygon, sum_i weights[i] * |<u, directions[i]>| == 1.
/// directions[i] is the 90-degree rotation of vertex i (not normalized), and
/// sum_i weights[i] * |directions[i]| <= 8 / inradius_bound.
struct PolygonDecomposition {
  std::vector<double> weights;    // N positive scalars
  std::vector<Vec2> directions;   // N rotated vertices, original frame
  double inradius_bound = 0.0;

  double reconstruct(Vec2 u) const;
  /// sum_i weights[i] * |v_i| = total mass of the associated direction measure.
  double total_vertex_mass() const;
};

/// Edge-line normals of the polygon: <n_i, u> = 1 on edge i, n_{i+N} = -n_i
/// exactly. Thin accessor over the values precomputed by SymmetricPolygon.
std::vector<Vec2> edge_normals(const SymmetricPolygon& polygon);

/// Rotates the polygon so that no vertex lies on a coordinate axis and no
/// edge is axis-parallel. Returns the rotated polygon and the angle used
/// (0 when the input is already generic).
std::pair<SymmetricPolygon, double> rotate_generic(const SymmetricPolygon& polygon);

/// Computes the decomposition weights from consecutive differences of the
/// edge normals (2 w_k lambda_k = n_k - n_{k-1}). Applies rotate_generic
/// internally and maps the result back to the original frame. Verifies the
/// reconstruction identity at every vertex and at 1000 random boundary
/// points; throws DegeneracyError when a check fails, naming the edge pair.
PolygonDecomposition polygon_decompose(const SymmetricPolygon& polygon,
                                       double reconstruction_tol = 1e-9,
                                       double parallel_tol = 1e-8);

}  // namespace abt
