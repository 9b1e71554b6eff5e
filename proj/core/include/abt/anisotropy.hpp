#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "abt/geometry.hpp"

namespace abt {

/// Centrally symmetric strictly convex polygon with the origin strictly
/// inside, vertices in counterclockwise order. Serves as the unit ball of a
/// planar norm; the edge-line normals n_i with <n_i, u> = 1 on edge i are
/// precomputed and satisfy n_{i+N} = -n_i exactly.
class SymmetricPolygon {
 public:
  /// Builds from all 2N vertices; requires v_{i+N} == -v_i exactly.
  static SymmetricPolygon from_vertices(std::vector<Vec2> vertices);

  /// Builds from the first N vertices; the antipodal half is generated by
  /// exact negation.
  static SymmetricPolygon from_half(std::vector<Vec2> half);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  int half_count() const { return int(vertices_.size() / 2); }

  /// Edge i runs from vertex i to vertex i+1 (cyclically); the returned
  /// normal n_i satisfies <n_i, v> = 1 on that edge's line.
  const std::vector<Vec2>& edge_line_normals() const { return normals_; }

  /// Minkowski gauge of the polygon: the norm whose unit ball is this
  /// polygon. Exactly 1 on the boundary up to roundoff.
  double gauge(Vec2 v) const;

  /// Largest r with B(0,r) contained in the polygon.
  double inradius() const;
  /// max |v_i|.
  double circumradius() const;

  SymmetricPolygon rotated(double angle) const;

 private:
  SymmetricPolygon() = default;
  void validate_and_finish();
  std::vector<Vec2> vertices_;
  std::vector<Vec2> normals_;
};

/// Direction-cost function sigma on unoriented lines through the origin:
/// sigma(u) = sigma(-u) > 0. Induces the positively 1-homogeneous gauge
/// G(v) = |v| sigma(v/|v|), G(0) = 0, which is a norm iff sigma is convex.
class Anisotropy {
 public:
  enum class Kind { Constant, Polygonal, Functional };

  /// sigma == c in every direction: G = c * Euclidean norm.
  static Anisotropy constant(double c, int dim = 2);

  /// Planar gauge with the given polygon as unit ball. Convex by construction.
  static Anisotropy polygonal(SymmetricPolygon ball);

  /// Arbitrary direction cost; `cost` receives a unit vector canonicalized by
  /// sign (first nonzero coordinate positive) and must return a value > 0.
  /// `sample_resolution` controls the direction grids used by sampled checks.
  static Anisotropy functional(int dim, std::function<double(std::span<const double>)> cost,
                               int sample_resolution = 360, std::string label = "functional");

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  double constant_value() const { return c_; }
  int sample_resolution() const { return sample_resolution_; }
  const SymmetricPolygon& ball() const;
  const std::string& label() const { return label_; }

  /// sigma evaluated on the line spanned by u (u need not be unit).
  double direction_cost(std::span<const double> u) const;
  double direction_cost(Vec2 u) const;

  /// The induced gauge G(v); 0 at 0.
  double norm(std::span<const double> v) const;
  double norm(Vec2 v) const;

  /// min over unit directions of sigma; exact for constant and polygonal,
  /// sampled for functional representations.
  double min_direction_cost() const;

  /// Deterministic unit-direction sample covering S^{dim-1}, used by the
  /// convexity check and the mass-bound constant.
  std::vector<VecN> sample_directions() const;

 private:
  Anisotropy() = default;
  Kind kind_ = Kind::Constant;
  int dim_ = 2;
  double c_ = 1.0;
  std::shared_ptr<const SymmetricPolygon> ball_;
  std::function<double(std::span<const double>)> cost_;
  int sample_resolution_ = 360;
  std::string label_ = "constant";
};

struct ConvexityReport {
  bool convex = false;
  /// max over sampled pairs of G(u+w) - G(u) - G(w).
  double worst_defect = 0.0;
  VecN worst_u, worst_w;
};

/// Samples the triangle inequality of the induced gauge over pairs of grid
/// directions. Polygonal and constant representations short-circuit to true.
ConvexityReport check_convexity(const Anisotropy& sigma, double tol = 1e-9);

}  // namespace abt
