#pragma once

#include <vector>

#include "abt/anisotropy.hpp"
#include "abt/geometry.hpp"

namespace abt {

/// Finite positive measure on unit directions representing a planar norm
/// integral-geometrically: reconstruct(u) = sum_j mass_j |<u, omega_j>|
/// matches the represented norm up to `reconstruction_error` on unit vectors.
/// Directions are folded onto the upper half-circle (the integrand is even),
/// atoms sorted by angle.
struct DirectionMeasure {
  struct Atom {
    Vec2 omega;   // unit direction, upper half-circle
    double mass;  // > 0
  };

  std::vector<Atom> atoms;
  /// Uniform reconstruction error measured on a 720-direction grid against
  /// the gauge the measure was built from; 0 (up to roundoff) for exact
  /// polygonal decompositions.
  double reconstruction_error = 0.0;

  double reconstruct(Vec2 u) const;
  double total_mass() const;
};

/// Builds the representing measure of a planar convex gauge. Polygonal
/// gauges return their exact decomposition (depth ignored); other gauges are
/// approximated by the depth-k circumscribed polygon and inherit its
/// decomposition, with the measured uniform error reported.
DirectionMeasure representing_measure(const Anisotropy& gauge, int depth = 12);

}  // namespace abt
