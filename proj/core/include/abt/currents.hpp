#pragma once

#include <optional>
#include <vector>

#include "abt/anisotropy.hpp"
#include "abt/branching.hpp"
#include "abt/direction_measure.hpp"
#include "abt/geometry.hpp"

namespace abt {

/// Finite sum of weighted point atoms.
struct ZeroCurrent {
  struct Atom {
    VecN point;
    double weight;
  };
  int dim = 2;
  std::vector<Atom> atoms;

  static ZeroCurrent planar(std::vector<std::pair<Vec2, double>> atoms);
};

/// Snaps points with absolute tolerance `snap_tol`, merges equal points by
/// summing weights, drops weights below `weight_tol`, sorts atoms
/// lexicographically.
ZeroCurrent canonicalize(const ZeroCurrent& s, double snap_tol = 1e-9, double weight_tol = 1e-12);

double mass(const ZeroCurrent& s);
double h_mass(const ZeroCurrent& s, const BranchingFunction& h);

/// Oriented segment with a real multiplicity.
struct OrientedEdge {
  VecN a, b;
  double theta;
};

/// Finite sum of oriented segments with real multiplicities; the competitor
/// class of the transport solver. The edge list is a representation: two
/// lists describing the same multiplicity function denote the same current,
/// and canonicalize() computes the unique canonical representative.
struct PolyhedralOneCurrent {
  int dim = 2;
  std::vector<OrientedEdge> edges;

  static PolyhedralOneCurrent planar(std::vector<std::tuple<Vec2, Vec2, double>> edges);
  void add_edge(VecN a, VecN b, double theta);
  void add_edge(Vec2 a, Vec2 b, double theta);
  bool empty() const { return edges.empty(); }
};

/// Canonical form: endpoints snapped (absolute tolerance `snap_tol`),
/// collinear overlaps subdivided at all mutual endpoints and merged so that
/// distinct canonical edges have disjoint relative interiors, orientations
/// normalized (lexicographically smaller endpoint first), zero multiplicities
/// dropped, edges sorted. Mass and boundary of the underlying current are
/// preserved; the map is idempotent. Throws on zero-length edges.
PolyhedralOneCurrent canonicalize(const PolyhedralOneCurrent& p, double snap_tol = 1e-9,
                                  double weight_tol = 1e-12);

/// Signed endpoint atoms, sum_e theta_e (delta_b - delta_a), canonicalized.
ZeroCurrent boundary(const PolyhedralOneCurrent& p);

/// Plain mass: sum |theta_e| length(e) over canonical edges.
double mass(const PolyhedralOneCurrent& p);

/// Anisotropic H-mass: sum H(|theta_e|) G_sigma(b_e - a_e) over canonical
/// edges. Overlaps are merged before H is applied (H is nonlinear).
double h_mass(const PolyhedralOneCurrent& p, const BranchingFunction& h, const Anisotropy& sigma);

/// Fiber of the projection onto the line spanned by `direction` at offset y:
/// the affine hyperplane <x, direction> = offset.
struct SliceSpec {
  VecN direction;  // unit
  double offset;
};

/// Zero-current of signed transversal crossings; the sign of an atom follows
/// the sign of <b_e - a_e, direction>. Throws DegeneracyError when an edge
/// lies inside the fiber (the formula holds for a.e. offset only).
ZeroCurrent slice(const PolyhedralOneCurrent& p, const SliceSpec& s);

/// Closed-form evaluation of the slicing identity for a planar current and a
/// direction measure mu: sum_atoms m sum_e H(|theta_e|) |<b_e - a_e, omega>|.
/// Equals h_mass under the gauge mu represents, up to the measure's
/// reconstruction error; an empty measure yields 0.
double h_mass_via_slicing(const PolyhedralOneCurrent& p, const BranchingFunction& h,
                          const DirectionMeasure& mu);

/// A nontrivial cyclic subcurrent of p, or nothing when the support digraph
/// (edges oriented by the sign of theta) is acyclic. The returned cycle uses
/// a subset of p's canonical edges with uniform |theta| = min |theta_e| along
/// the cycle and matching signs, so its boundary vanishes. Ties between
/// cycles are broken by the lexicographically smallest vertex set.
std::optional<PolyhedralOneCurrent> find_cycle(const PolyhedralOneCurrent& p);

/// Iteratively subtracts cycles at the largest feasible multiplicity until
/// the current is acyclic. Requires h non-decreasing on the positive axis;
/// the boundary is preserved atomwise and the H-mass never increases.
PolyhedralOneCurrent remove_cycles(const PolyhedralOneCurrent& p, const BranchingFunction& h,
                                   const Anisotropy& sigma);

/// Largest |theta_e| over canonical edges (0 for the empty current).
double max_multiplicity(const PolyhedralOneCurrent& p);

}  // namespace abt
