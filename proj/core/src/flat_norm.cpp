#include "abt/flat_norm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "abt/errors.hpp"
#include "abt/simplex.hpp"

namespace abt {

double flat_distance_zero(const ZeroCurrent& s, const ZeroCurrent& t) {
  if (s.dim != t.dim) throw std::invalid_argument("flat_distance_zero: dimension mismatch");
  ZeroCurrent diff;
  diff.dim = s.dim;
  diff.atoms = s.atoms;
  for (const auto& a : t.atoms) diff.atoms.push_back({a.point, -a.weight});
  diff = canonicalize(diff);

  std::vector<ZeroCurrent::Atom> pos, neg;
  for (const auto& a : diff.atoms) {
    if (a.weight > 0.0)
      pos.push_back(a);
    else
      neg.push_back({a.point, -a.weight});
  }
  if (pos.empty() && neg.empty()) return 0.0;

  // Transportation program with paid leftovers:
  //   min sum c_ij f_ij + sum u_i + sum w_j
  //   s.t. sum_j f_ij + u_i = a_i,  sum_i f_ij + w_j = b_j,  all vars >= 0.
  const int m = int(pos.size()), n = int(neg.size());
  const int nf = m * n;
  const int nvars = nf + m + n;
  std::vector<std::vector<double>> A(std::size_t(m + n), std::vector<double>(std::size_t(nvars), 0.0));
  std::vector<double> b(std::size_t(m + n), 0.0);
  std::vector<double> c(std::size_t(nvars), 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      int v = i * n + j;
      c[std::size_t(v)] = dist(pos[std::size_t(i)].point, neg[std::size_t(j)].point);
      A[std::size_t(i)][std::size_t(v)] = 1.0;
      A[std::size_t(m + j)][std::size_t(v)] = 1.0;
    }
  }
  for (int i = 0; i < m; ++i) {
    A[std::size_t(i)][std::size_t(nf + i)] = 1.0;
    c[std::size_t(nf + i)] = 1.0;
    b[std::size_t(i)] = pos[std::size_t(i)].weight;
  }
  for (int j = 0; j < n; ++j) {
    A[std::size_t(m + j)][std::size_t(nf + m + j)] = 1.0;
    c[std::size_t(nf + m + j)] = 1.0;
    b[std::size_t(m + j)] = neg[std::size_t(j)].weight;
  }
  return solve_equality_lp(std::move(A), std::move(b), std::move(c)).value;
}

void TriangleMesh::finish() {
  edges.clear();
  edge_index.clear();
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      int u = tri[std::size_t(k)], v = tri[std::size_t((k + 1) % 3)];
      auto key = std::minmax(u, v);
      std::pair<int, int> e{key.first, key.second};
      if (!edge_index.count(e)) {
        edge_index[e] = int(edges.size());
        edges.push_back(e);
      }
    }
  }
  edge_length.resize(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    edge_length[i] = norm(nodes[std::size_t(edges[i].second)] - nodes[std::size_t(edges[i].first)]);
  triangle_area.resize(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    Vec2 a = nodes[std::size_t(triangles[t][0])];
    Vec2 bb = nodes[std::size_t(triangles[t][1])];
    Vec2 cc = nodes[std::size_t(triangles[t][2])];
    double ar = 0.5 * cross(bb - a, cc - a);
    if (ar <= 0.0) throw std::invalid_argument("TriangleMesh: triangles must be CCW");
    triangle_area[t] = ar;
  }
}

TriangleMesh TriangleMesh::grid(Vec2 origin, double cell, int nx, int ny) {
  if (nx < 1 || ny < 1 || !(cell > 0.0)) throw std::invalid_argument("TriangleMesh::grid: bad parameters");
  TriangleMesh mesh;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) mesh.nodes.push_back({origin.x + cell * i, origin.y + cell * j});
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  mesh.finish();
  return mesh;
}

int TriangleMesh::node_at(Vec2 p, double tol) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (norm(nodes[i] - p) <= tol) return int(i);
  }
  return -1;
}

double flat_distance_one_upper(const PolyhedralOneCurrent& p, const PolyhedralOneCurrent& q,
                               const TriangleMesh& mesh) {
  if (p.dim != 2 || q.dim != 2) throw SemanticError("flat_distance_one_upper: planar currents only");
  PolyhedralOneCurrent diff = p;
  for (const auto& e : q.edges) diff.edges.push_back({e.a, e.b, -e.theta});
  diff = canonicalize(diff);

  const int ne = int(mesh.edges.size());
  const int nt = int(mesh.triangles.size());
  std::vector<double> chain(std::size_t(ne), 0.0);

  // Decompose each canonical edge into consecutive mesh edges.
  for (const auto& e : diff.edges) {
    Vec2 a{e.a[0], e.a[1]}, b{e.b[0], e.b[1]};
    Vec2 d = b - a;
    double len = norm(d);
    Vec2 u = d / len;
    struct OnSeg {
      double t;
      int node;
    };
    std::vector<OnSeg> hits;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      Vec2 x = mesh.nodes[i] - a;
      double t = dot(x, u);
      if (t < -1e-9 || t > len + 1e-9) continue;
      if (std::fabs(cross(u, x)) <= 1e-9) hits.push_back({t, int(i)});
    }
    std::sort(hits.begin(), hits.end(), [](const OnSeg& x, const OnSeg& y) { return x.t < y.t; });
    if (hits.empty() || std::fabs(hits.front().t) > 1e-9 || std::fabs(hits.back().t - len) > 1e-9)
      throw SemanticError("flat_distance_one_upper: current endpoint is not a mesh node");
    for (std::size_t k = 0; k + 1 < hits.size(); ++k) {
      int un = hits[k].node, vn = hits[k + 1].node;
      auto key = std::minmax(un, vn);
      auto it = mesh.edge_index.find({key.first, key.second});
      if (it == mesh.edge_index.end()) {
        std::ostringstream os;
        os << "flat_distance_one_upper: segment piece (" << un << "," << vn << ") is not a mesh edge";
        throw SemanticError(os.str());
      }
      chain[std::size_t(it->second)] += (un < vn) ? e.theta : -e.theta;
    }
  }

  // LP variables: r+ (ne), r- (ne), s+ (nt), s- (nt); one equality per edge:
  //   r_e + sum_t inc(e,t) s_t = chain_e.
  const int nvars = 2 * ne + 2 * nt;
  std::vector<std::vector<double>> A(std::size_t(ne), std::vector<double>(std::size_t(nvars), 0.0));
  std::vector<double> rhs(std::size_t(ne), 0.0);
  std::vector<double> cost(std::size_t(nvars), 0.0);
  for (int e = 0; e < ne; ++e) {
    A[std::size_t(e)][std::size_t(e)] = 1.0;
    A[std::size_t(e)][std::size_t(ne + e)] = -1.0;
    cost[std::size_t(e)] = mesh.edge_length[std::size_t(e)];
    cost[std::size_t(ne + e)] = mesh.edge_length[std::size_t(e)];
    rhs[std::size_t(e)] = chain[std::size_t(e)];
  }
  for (int t = 0; t < nt; ++t) {
    cost[std::size_t(2 * ne + t)] = mesh.triangle_area[std::size_t(t)];
    cost[std::size_t(2 * ne + nt + t)] = mesh.triangle_area[std::size_t(t)];
    const auto& tri = mesh.triangles[std::size_t(t)];
    for (int k = 0; k < 3; ++k) {
      int un = tri[std::size_t(k)], vn = tri[std::size_t((k + 1) % 3)];
      auto key = std::minmax(un, vn);
      int e = mesh.edge_index.at({key.first, key.second});
      double inc = (un < vn) ? 1.0 : -1.0;
      A[std::size_t(e)][std::size_t(2 * ne + t)] += inc;
      A[std::size_t(e)][std::size_t(2 * ne + nt + t)] -= inc;
    }
  }
  return solve_equality_lp(std::move(A), std::move(rhs), std::move(cost)).value;
}

}  // namespace abt
