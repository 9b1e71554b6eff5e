#include "abt/body_approximation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abt/errors.hpp"

namespace abt {

namespace {

// Reduce j / 2^k to lowest terms; level 0 covers j = 0.
std::pair<int, int> reduced_key(int depth, int j) {
  int level = depth;
  while (j % 2 == 0 && level > 0) {
    j /= 2;
    level -= 1;
    if (j == 0) {
      level = 0;
      break;
    }
  }
  return {level, j};
}

}  // namespace

BodyApproximator::BodyApproximator(Anisotropy gauge) : gauge_(std::move(gauge)) {
  if (gauge_.dim() != 2)
    throw std::invalid_argument("BodyApproximator: planar gauges only");
  if (gauge_.kind() == Anisotropy::Kind::Functional) {
    // Dense boundary sample; computed supporting lines are pushed outward so
    // that at least these boundary points stay inside every half-plane.
    const int m = 4096;
    boundary_grid_.reserve(m);
    for (int i = 0; i < m; ++i) {
      Vec2 d = unit_dir(2.0 * M_PI * double(i) / double(m));
      boundary_grid_.push_back(d / gauge_.norm(d));
    }
  }
}

Vec2 BodyApproximator::supporting_normal(double angle) const {
  Vec2 d = unit_dir(angle);
  double g = gauge_.norm(d);
  Vec2 q = d / g;  // boundary point of C along the ray

  switch (gauge_.kind()) {
    case Anisotropy::Kind::Constant:
      // Disc of radius 1/c: the tangent at q has normal c*d.
      return d * gauge_.constant_value();

    case Anisotropy::Kind::Polygonal: {
      const SymmetricPolygon& ball = gauge_.ball();
      const auto& normals = ball.edge_line_normals();
      // Supporting edges at q are the ones whose normal attains the gauge.
      double best = 0.0;
      for (Vec2 n : normals) best = std::max(best, dot(n, d));
      std::vector<Vec2> active;
      for (Vec2 n : normals) {
        if (dot(n, d) >= best * (1.0 - 1e-12)) active.push_back(n);
      }
      if (active.size() == 1) return active[0];
      // Ray hits a vertex of C: take the supporting line whose normal bisects
      // the adjacent edge normals.
      Vec2 z{0, 0};
      for (Vec2 n : active) z = z + normalized(n);
      double s = dot(z, q);
      if (s <= 0.0) throw DegeneracyError("BodyApproximator: invalid bisector normal");
      return z / s;
    }

    case Anisotropy::Kind::Functional: {
      // Boundary curve rho(phi) = 1/sigma(phi); the tangent at q is
      // rho' d + rho d_perp, the outward normal its clockwise rotation.
      const double h = 1e-7;
      auto rho = [&](double phi) { return 1.0 / gauge_.norm(unit_dir(phi)); };
      double r = 1.0 / g;
      double drho = (rho(angle + h) - rho(angle - h)) / (2.0 * h);
      Vec2 tangent = d * drho + rot90(d) * r;
      Vec2 m{tangent.y, -tangent.x};
      if (dot(m, d) <= 0.0) m = -m;
      Vec2 n = m / dot(m, q);
      // Containment repair: scale down so every sampled boundary point stays
      // inside the half-plane.
      double worst = 1.0;
      for (Vec2 b : boundary_grid_) worst = std::max(worst, dot(n, b));
      return n / worst;
    }
  }
  throw std::logic_error("unreachable");
}

void BodyApproximator::extend_to(int depth) {
  for (int k = std::max(2, built_depth_ + 1); k <= depth; ++k) {
    const int half = 1 << (k - 1);
    for (int j = 0; j < half; ++j) {
      auto key = reduced_key(k, j);
      if (cache_.count(key)) continue;  // dyadic point shared with a coarser depth
      double angle = 2.0 * M_PI * double(j) / double(1 << k);
      Vec2 n = supporting_normal(angle);
      cache_[key] = n;
      // Insert into the kept list unless it duplicates an angular neighbor.
      KeptNormal kn{angle, n, k};
      auto pos = std::lower_bound(kept_.begin(), kept_.end(), angle,
                                  [](const KeptNormal& a, double v) { return a.angle < v; });
      bool dup = false;
      auto near = [&](const KeptNormal& other) {
        double scale = norm(other.normal) + norm(n);
        return norm(other.normal - n) <= 1e-9 * scale;
      };
      if (pos != kept_.begin() && near(*(pos - 1))) dup = true;
      if (pos != kept_.end() && near(*pos)) dup = true;
      if (!dup) kept_.insert(pos, kn);
    }
    built_depth_ = k;
    polygons_.emplace(k, build_polygon());
  }
}

SymmetricPolygon BodyApproximator::build_polygon() const {
  const int m = int(kept_.size());
  if (m < 2) throw DegeneracyError("BodyApproximator: fewer than two distinct supporting lines");
  // Dual vertices: consecutive supporting lines intersect; the wrap pairs the
  // last normal with the negation of the first.
  std::vector<Vec2> half;
  half.reserve(m);
  double scale = 0.0;
  for (const auto& kn : kept_) scale = std::max(scale, norm(kn.normal));
  for (int i = 0; i < m; ++i) {
    Vec2 n1 = kept_[i].normal;
    Vec2 n2 = (i + 1 < m) ? kept_[i + 1].normal : -kept_[0].normal;
    double det = cross(n1, n2);
    if (det <= 0.0) throw DegeneracyError("BodyApproximator: supporting lines out of order");
    half.push_back({(n2.y - n1.y) / det, (n1.x - n2.x) / det});
  }
  // Drop exact duplicates and non-strict turns (several supporting lines can
  // meet at one vertex of C).
  std::vector<Vec2> full = half;
  for (Vec2 v : half) full.push_back(-v);
  std::vector<Vec2> filtered;
  const int fm = int(full.size());
  double vscale = 0.0;
  for (Vec2 v : full) vscale = std::max(vscale, norm(v));
  for (int i = 0; i < fm; ++i) {
    Vec2 prev = full[(i + fm - 1) % fm];
    Vec2 v = full[i];
    if (norm(v - prev) <= 1e-12 * vscale) continue;
    filtered.push_back(v);
  }
  // Strict-convexity pass: remove collinear middles.
  std::vector<Vec2> verts;
  const int gm = int(filtered.size());
  for (int i = 0; i < gm; ++i) {
    Vec2 a = filtered[(i + gm - 1) % gm];
    Vec2 b = filtered[i];
    Vec2 c = filtered[(i + 1) % gm];
    if (cross(b - a, c - b) <= 1e-16 * vscale * vscale) continue;
    verts.push_back(b);
  }
  if (verts.size() % 2 != 0 || verts.size() < 4)
    throw DegeneracyError("BodyApproximator: vertex filtering broke symmetry");
  const int vn = int(verts.size() / 2);
  for (int i = 0; i < vn; ++i) {
    Vec2 a = verts[i], b = verts[i + vn];
    if (std::fabs(a.x + b.x) > 1e-9 * vscale || std::fabs(a.y + b.y) > 1e-9 * vscale)
      throw DegeneracyError("BodyApproximator: vertex filtering broke symmetry");
  }
  // Rebuild the second half by exact negation so the polygon invariant holds
  // bitwise.
  return SymmetricPolygon::from_half(std::vector<Vec2>(verts.begin(), verts.begin() + vn));
}

const SymmetricPolygon& BodyApproximator::polygon_at(int depth) {
  if (depth < 2 || depth > 16)
    throw std::invalid_argument("BodyApproximator: depth must lie in [2, 16]");
  extend_to(depth);
  return polygons_.at(depth);
}

SymmetricPolygon approximate_body(const Anisotropy& gauge, int depth) {
  BodyApproximator approx(gauge);
  return approx.polygon_at(depth);
}

}  // namespace abt
