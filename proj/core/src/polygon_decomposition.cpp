#include "abt/polygon_decomposition.hpp"

#include <cmath>
#include <sstream>

#include "abt/errors.hpp"

namespace abt {

double PolygonDecomposition::reconstruct(Vec2 u) const {
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * std::fabs(dot(u, directions[i]));
  return s;
}

double PolygonDecomposition::total_vertex_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * norm(directions[i]);
  return s;
}

std::vector<Vec2> edge_normals(const SymmetricPolygon& polygon) {
  return polygon.edge_line_normals();
}

namespace {

bool is_generic(const SymmetricPolygon& p, double tol) {
  const auto& vs = p.vertices();
  const int m = int(vs.size());
  for (int i = 0; i < m; ++i) {
    Vec2 v = vs[i];
    double n = norm(v);
    if (std::fabs(v.x) <= tol * n || std::fabs(v.y) <= tol * n) return false;
    Vec2 e = vs[(i + 1) % m] - v;
    double ne = norm(e);
    if (std::fabs(e.x) <= tol * ne || std::fabs(e.y) <= tol * ne) return false;
  }
  return true;
}

}  // namespace

std::pair<SymmetricPolygon, double> rotate_generic(const SymmetricPolygon& polygon) {
  constexpr double kTol = 1e-9;
  if (is_generic(polygon, kTol)) return {polygon, 0.0};
  // Deterministic sweep of irrational-looking angles; a finite vertex set
  // excludes only finitely many rotations.
  for (int k = 1; k <= 4096; ++k) {
    double angle = double(k) * 0.2406059228249452;  // golden angle / pi-ish step
    SymmetricPolygon r = polygon.rotated(angle);
    if (is_generic(r, kTol)) return {r, angle};
  }
  throw DegeneracyError("rotate_generic: no generic rotation found");
}

PolygonDecomposition polygon_decompose(const SymmetricPolygon& polygon, double reconstruction_tol,
                                       double parallel_tol) {
  auto [rot, angle] = rotate_generic(polygon);
  const auto& normals = rot.edge_line_normals();
  const auto& rot_vertices = rot.vertices();
  const auto& orig_vertices = polygon.vertices();
  const int n = rot.half_count();

  PolygonDecomposition dec;
  dec.weights.resize(n);
  dec.directions.resize(n);
  dec.inradius_bound = polygon.inradius();

  for (int k = 0; k < n; ++k) {
    // Paper indexing with n_0 = -n_N translates to m_{-1} = -m_{N-1} here.
    Vec2 prev = (k == 0) ? -normals[n - 1] : normals[k - 1];
    Vec2 diff = normals[k] - prev;
    Vec2 w = rot90(rot_vertices[k]);
    double nd = norm(diff), nw = norm(w);
    if (nd == 0.0) throw DegeneracyError("polygon_decompose: coincident edge normals");
    // diff must be a positive multiple of w.
    if (std::fabs(cross(diff, w)) > parallel_tol * nd * nw || dot(diff, w) <= 0.0) {
      std::ostringstream os;
      os << "polygon_decompose: normal difference not parallel to rotated vertex at edge pair ("
         << (k == 0 ? n - 1 : k - 1) << ", " << k << ")";
      throw DegeneracyError(os.str());
    }
    dec.weights[k] = nd / (2.0 * nw);
    dec.directions[k] = rot90(orig_vertices[k]);  // weights are rotation invariants
  }

  // Reconstruction identity on every vertex and on random boundary points.
  auto check = [&](Vec2 u, const char* what) {
    double r = dec.reconstruct(u);
    if (std::fabs(r - 1.0) > reconstruction_tol) {
      std::ostringstream os;
      os << "polygon_decompose: reconstruction error " << std::fabs(r - 1.0) << " at " << what;
      throw DegeneracyError(os.str());
    }
  };
  const int m = int(orig_vertices.size());
  for (Vec2 v : orig_vertices) check(v, "vertex");
  Rng rng(0x9e3779b9ULL);
  for (int t = 0; t < 1000; ++t) {
    int i = int(rng.below(std::uint64_t(m)));
    double s = rng.uniform();
    Vec2 u = orig_vertices[i] + (orig_vertices[(i + 1) % m] - orig_vertices[i]) * s;
    check(u, "boundary sample");
  }

  if (dec.total_vertex_mass() > 8.0 / dec.inradius_bound + reconstruction_tol)
    throw DegeneracyError("polygon_decompose: weight bound 8/r violated");

  (void)angle;
  return dec;
}

}  // namespace abt
