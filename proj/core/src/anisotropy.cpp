#include "abt/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abt/errors.hpp"

namespace abt {

SymmetricPolygon SymmetricPolygon::from_vertices(std::vector<Vec2> vertices) {
  SymmetricPolygon p;
  p.vertices_ = std::move(vertices);
  if (p.vertices_.size() < 4 || p.vertices_.size() % 2 != 0)
    throw std::invalid_argument("SymmetricPolygon: need an even vertex count >= 4");
  const int n = int(p.vertices_.size() / 2);
  for (int i = 0; i < n; ++i) {
    Vec2 a = p.vertices_[i], b = p.vertices_[i + n];
    if (!(b.x == -a.x && b.y == -a.y))
      throw std::invalid_argument("SymmetricPolygon: central symmetry must hold exactly");
  }
  p.validate_and_finish();
  return p;
}

SymmetricPolygon SymmetricPolygon::from_half(std::vector<Vec2> half) {
  if (half.size() < 2) throw std::invalid_argument("SymmetricPolygon: need at least two half vertices");
  std::vector<Vec2> all = half;
  all.reserve(half.size() * 2);
  for (Vec2 v : half) all.push_back(-v);
  SymmetricPolygon p;
  p.vertices_ = std::move(all);
  p.validate_and_finish();
  return p;
}

void SymmetricPolygon::validate_and_finish() {
  const int m = int(vertices_.size());
  const int n = m / 2;
  for (int i = 0; i < m; ++i) {
    Vec2 a = vertices_[i];
    Vec2 b = vertices_[(i + 1) % m];
    Vec2 c = vertices_[(i + 2) % m];
    if (cross(b - a, c - b) <= 0.0)
      throw std::invalid_argument("SymmetricPolygon: vertices must be strictly convex counterclockwise");
    if (cross(a, b) <= 0.0)
      throw std::invalid_argument("SymmetricPolygon: origin must lie strictly inside");
  }
  // Edge-line normals: solve <n, v_i> = <n, v_{i+1}> = 1; the determinant is
  // cross(v_i, v_{i+1}) > 0. The second half is the exact negation of the
  // first, matching the exact symmetry of the vertices.
  normals_.resize(m);
  for (int i = 0; i < n; ++i) {
    Vec2 a = vertices_[i];
    Vec2 b = vertices_[(i + 1) % m];
    double det = cross(a, b);
    if (det <= 0.0) throw DegeneracyError("SymmetricPolygon: degenerate edge");
    Vec2 nrm{(b.y - a.y) / det, (a.x - b.x) / det};
    double r1 = std::fabs(dot(nrm, a) - 1.0);
    double r2 = std::fabs(dot(nrm, b) - 1.0);
    if (r1 > 1e-12 || r2 > 1e-12) throw DegeneracyError("SymmetricPolygon: edge normal residual too large");
    normals_[i] = nrm;
    normals_[i + n] = -nrm;
  }
}

double SymmetricPolygon::gauge(Vec2 v) const {
  const int n = half_count();
  double best = 0.0;
  for (int i = 0; i < n; ++i) best = std::max(best, std::fabs(dot(normals_[i], v)));
  return best;
}

double SymmetricPolygon::inradius() const {
  const int n = half_count();
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) r = std::min(r, 1.0 / norm(normals_[i]));
  return r;
}

double SymmetricPolygon::circumradius() const {
  double r = 0.0;
  for (Vec2 v : vertices_) r = std::max(r, norm(v));
  return r;
}

SymmetricPolygon SymmetricPolygon::rotated(double angle) const {
  const int n = half_count();
  std::vector<Vec2> half(vertices_.begin(), vertices_.begin() + n);
  for (Vec2& v : half) v = rotate(v, angle);
  return from_half(std::move(half));
}

namespace {

// Canonicalize the sign of a direction: first nonzero coordinate positive.
// Anisotropies live on unoriented lines, so sigma(u) = sigma(-u) holds by
// construction.
VecN canonical_unit(std::span<const double> u) {
  double n = norm(u);
  if (n == 0.0) throw std::invalid_argument("Anisotropy: zero direction");
  VecN c(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) c[i] = u[i] / n;
  for (double x : c) {
    if (x > 0.0) break;
    if (x < 0.0) {
      for (double& y : c) y = -y;
      break;
    }
  }
  return c;
}

}  // namespace

Anisotropy Anisotropy::constant(double c, int dim) {
  if (!(c > 0.0)) throw std::invalid_argument("Anisotropy::constant: c must be > 0");
  if (dim < 2) throw std::invalid_argument("Anisotropy: dim must be >= 2");
  Anisotropy s;
  s.kind_ = Kind::Constant;
  s.dim_ = dim;
  s.c_ = c;
  s.label_ = "constant";
  return s;
}

Anisotropy Anisotropy::polygonal(SymmetricPolygon ball) {
  Anisotropy s;
  s.kind_ = Kind::Polygonal;
  s.dim_ = 2;
  s.ball_ = std::make_shared<SymmetricPolygon>(std::move(ball));
  s.label_ = "polygonal";
  return s;
}

Anisotropy Anisotropy::functional(int dim, std::function<double(std::span<const double>)> cost,
                                  int sample_resolution, std::string label) {
  if (dim < 2) throw std::invalid_argument("Anisotropy: dim must be >= 2");
  if (!cost) throw std::invalid_argument("Anisotropy::functional: empty cost");
  Anisotropy s;
  s.kind_ = Kind::Functional;
  s.dim_ = dim;
  s.cost_ = std::move(cost);
  s.sample_resolution_ = std::max(16, sample_resolution);
  s.label_ = std::move(label);
  return s;
}

const SymmetricPolygon& Anisotropy::ball() const {
  if (kind_ != Kind::Polygonal) throw std::logic_error("Anisotropy: not polygonal");
  return *ball_;
}

double Anisotropy::direction_cost(std::span<const double> u) const {
  if (int(u.size()) != dim_) throw std::invalid_argument("Anisotropy: dimension mismatch");
  switch (kind_) {
    case Kind::Constant:
      canonical_unit(u);  // rejects zero input
      return c_;
    case Kind::Polygonal: {
      VecN c = canonical_unit(u);
      return ball_->gauge({c[0], c[1]});
    }
    case Kind::Functional: {
      VecN c = canonical_unit(u);
      double v = cost_(c);
      if (!(v > 0.0)) throw SemanticError("Anisotropy: direction cost must be strictly positive");
      return v;
    }
  }
  return 0.0;
}

double Anisotropy::direction_cost(Vec2 u) const {
  const double buf[2] = {u.x, u.y};
  return direction_cost(std::span<const double>(buf, 2));
}

double Anisotropy::norm(std::span<const double> v) const {
  if (int(v.size()) != dim_) throw std::invalid_argument("Anisotropy: dimension mismatch");
  double n = abt::norm(v);
  if (n == 0.0) return 0.0;
  if (kind_ == Kind::Polygonal) return ball_->gauge({v[0], v[1]});
  if (kind_ == Kind::Constant) return c_ * n;
  return n * direction_cost(v);
}

double Anisotropy::norm(Vec2 v) const {
  const double buf[2] = {v.x, v.y};
  return norm(std::span<const double>(buf, 2));
}

double Anisotropy::min_direction_cost() const {
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::Polygonal:
      // min of the gauge over unit Euclidean directions = 1 / circumradius.
      return 1.0 / ball_->circumradius();
    case Kind::Functional: {
      double best = std::numeric_limits<double>::infinity();
      for (const VecN& u : sample_directions()) best = std::min(best, direction_cost(u));
      return best;
    }
  }
  return 1.0;
}

std::vector<VecN> Anisotropy::sample_directions() const {
  std::vector<VecN> dirs;
  if (dim_ == 2) {
    int m = sample_resolution_;
    dirs.reserve(m);
    for (int i = 0; i < m; ++i) {
      double phi = M_PI * double(i) / double(m);  // half circle: unoriented lines
      dirs.push_back({std::cos(phi), std::sin(phi)});
    }
    return dirs;
  }
  // dim >= 3: axes, diagonal sign patterns, and a seeded pseudo-random cover.
  for (int i = 0; i < dim_; ++i) {
    VecN e(dim_, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  int patterns = 1 << (dim_ - 1);
  for (int mask = 0; mask < patterns; ++mask) {
    VecN u(dim_);
    u[0] = 1.0;
    for (int i = 1; i < dim_; ++i) u[i] = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
    double n = abt::norm(u);
    for (double& x : u) x /= n;
    dirs.push_back(u);
  }
  Rng rng(0x5eedULL);
  int want = std::max(64, sample_resolution_);
  while (int(dirs.size()) < want) {
    VecN u(dim_);
    for (double& x : u) {
      // Box-Muller from deterministic uniforms.
      double a = rng.uniform(1e-12, 1.0), b = rng.uniform();
      x = std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * b);
    }
    double n = abt::norm(u);
    if (n < 1e-9) continue;
    for (double& x : u) x /= n;
    dirs.push_back(u);
  }
  return dirs;
}

ConvexityReport check_convexity(const Anisotropy& sigma, double tol) {
  ConvexityReport rep;
  if (sigma.kind() != Anisotropy::Kind::Functional) {
    rep.convex = true;  // exact norms by construction
    return rep;
  }
  std::vector<VecN> dirs = sigma.sample_directions();
  rep.worst_defect = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i; j < dirs.size(); ++j) {
      // Directions are stored on unoriented lines, so both sign combinations
      // of the pair have to be exercised.
      for (VecN s : {add(dirs[i], dirs[j]), sub(dirs[i], dirs[j])}) {
        if (norm(s) < 1e-12) continue;
        double defect = sigma.norm(s) - sigma.norm(dirs[i]) - sigma.norm(dirs[j]);
        if (defect > rep.worst_defect) {
          rep.worst_defect = defect;
          rep.worst_u = dirs[i];
          rep.worst_w = dirs[j];
        }
      }
    }
  }
  rep.convex = rep.worst_defect <= tol;
  return rep;
}

}  // namespace abt
