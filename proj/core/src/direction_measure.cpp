#include "abt/direction_measure.hpp"

#include <algorithm>
#include <cmath>

#include "abt/body_approximation.hpp"
#include "abt/errors.hpp"
#include "abt/polygon_decomposition.hpp"

namespace abt {

double DirectionMeasure::reconstruct(Vec2 u) const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.mass * std::fabs(dot(u, a.omega));
  return s;
}

double DirectionMeasure::total_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.mass;
  return s;
}

namespace {

// Fold a direction onto the upper half-circle: y > 0, or y == 0 and x > 0.
Vec2 fold(Vec2 u) {
  if (u.y < 0.0 || (u.y == 0.0 && u.x < 0.0)) return -u;
  return u;
}

DirectionMeasure measure_from_decomposition(const PolygonDecomposition& dec) {
  struct Raw {
    double angle;
    Vec2 omega;
    double mass;
  };
  std::vector<Raw> raw;
  raw.reserve(dec.weights.size());
  for (std::size_t i = 0; i < dec.weights.size(); ++i) {
    double len = norm(dec.directions[i]);
    Vec2 omega = fold(dec.directions[i] / len);
    raw.push_back({std::atan2(omega.y, omega.x), omega, dec.weights[i] * len});
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.angle < b.angle; });
  DirectionMeasure mu;
  for (const Raw& r : raw) {
    if (!mu.atoms.empty()) {
      const Vec2 prev = mu.atoms.back().omega;
      if (norm(prev - r.omega) <= 1e-12) {
        mu.atoms.back().mass += r.mass;  // folded antipodes merge
        continue;
      }
    }
    mu.atoms.push_back({r.omega, r.mass});
  }
  return mu;
}

// Uniform reconstruction-error bound. The error oscillates on the angular
// scale of the decomposition's facets, so the sampling must resolve them;
// a small safety factor covers the residual between-sample variation.
double measure_error_against(const DirectionMeasure& mu, const Anisotropy& gauge) {
  const int samples = std::max<int>(1440, 16 * int(mu.atoms.size()));
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Vec2 u = unit_dir(M_PI * double(i) / double(samples));
    worst = std::max(worst, std::fabs(mu.reconstruct(u) - gauge.norm(u)));
  }
  return 1.1 * worst + 1e-15;
}

}  // namespace

DirectionMeasure representing_measure(const Anisotropy& gauge, int depth) {
  if (gauge.dim() != 2)
    throw SemanticError("representing_measure: constructive measures exist in the plane only");

  DirectionMeasure mu;
  if (gauge.kind() == Anisotropy::Kind::Polygonal) {
    mu = measure_from_decomposition(polygon_decompose(gauge.ball()));
  } else {
    BodyApproximator approx(gauge);
    mu = measure_from_decomposition(polygon_decompose(approx.polygon_at(depth)));
  }
  mu.reconstruction_error = measure_error_against(mu, gauge);
  return mu;
}

}  // namespace abt
