#include "abt/currents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "abt/errors.hpp"

namespace abt {

namespace {

bool lex_positive(const VecN& u) {
  for (double x : u) {
    if (x > 0.0) return true;
    if (x < 0.0) return false;
  }
  return false;
}

// First-come point clustering with absolute tolerance; representatives end up
// pairwise farther than the tolerance apart, which makes the map idempotent.
struct PointSnapper {
  double tol;
  std::vector<VecN> reps;

  int index_of(const VecN& p) {
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (dist(reps[i], p) <= tol) return int(i);
    }
    reps.push_back(p);
    return int(reps.size()) - 1;
  }
};

}  // namespace

ZeroCurrent ZeroCurrent::planar(std::vector<std::pair<Vec2, double>> atoms) {
  ZeroCurrent s;
  s.dim = 2;
  for (auto& [p, w] : atoms) s.atoms.push_back({VecN{p.x, p.y}, w});
  return s;
}

ZeroCurrent canonicalize(const ZeroCurrent& s, double snap_tol, double weight_tol) {
  PointSnapper snapper{snap_tol, {}};
  std::vector<double> weights;
  for (const auto& a : s.atoms) {
    if (int(a.point.size()) != s.dim) throw std::invalid_argument("ZeroCurrent: dimension mismatch");
    int i = snapper.index_of(a.point);
    if (i == int(weights.size())) weights.push_back(0.0);
    weights[std::size_t(i)] += a.weight;
  }
  ZeroCurrent out;
  out.dim = s.dim;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (std::fabs(weights[i]) > weight_tol) out.atoms.push_back({snapper.reps[i], weights[i]});
  }
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const ZeroCurrent::Atom& x, const ZeroCurrent::Atom& y) { return lex_less(x.point, y.point); });
  return out;
}

double mass(const ZeroCurrent& s) {
  double m = 0.0;
  for (const auto& a : canonicalize(s).atoms) m += std::fabs(a.weight);
  return m;
}

double h_mass(const ZeroCurrent& s, const BranchingFunction& h) {
  double m = 0.0;
  for (const auto& a : canonicalize(s).atoms) m += h(a.weight);
  return m;
}

PolyhedralOneCurrent PolyhedralOneCurrent::planar(std::vector<std::tuple<Vec2, Vec2, double>> list) {
  PolyhedralOneCurrent p;
  p.dim = 2;
  for (auto& [a, b, t] : list) p.edges.push_back({VecN{a.x, a.y}, VecN{b.x, b.y}, t});
  return p;
}

void PolyhedralOneCurrent::add_edge(VecN a, VecN b, double theta) {
  edges.push_back({std::move(a), std::move(b), theta});
}

void PolyhedralOneCurrent::add_edge(Vec2 a, Vec2 b, double theta) {
  edges.push_back({VecN{a.x, a.y}, VecN{b.x, b.y}, theta});
}

PolyhedralOneCurrent canonicalize(const PolyhedralOneCurrent& p, double snap_tol, double weight_tol) {
  const int dim = p.dim;
  PointSnapper snapper{snap_tol, {}};

  struct RawEdge {
    int ia, ib;
    double theta;
  };
  std::vector<RawEdge> raw;
  raw.reserve(p.edges.size());
  for (const auto& e : p.edges) {
    if (int(e.a.size()) != dim || int(e.b.size()) != dim)
      throw std::invalid_argument("PolyhedralOneCurrent: dimension mismatch");
    if (dist(e.a, e.b) <= snap_tol)
      throw std::invalid_argument("PolyhedralOneCurrent: degenerate edge (a == b)");
    int ia = snapper.index_of(e.a);
    int ib = snapper.index_of(e.b);
    if (ia == ib) throw std::invalid_argument("PolyhedralOneCurrent: edge collapsed by snapping");
    raw.push_back({ia, ib, e.theta});
  }

  const auto& reps = snapper.reps;
  const int m = int(raw.size());

  // Collinearity grouping: two edges share a supporting line when all four
  // endpoints are within the snap tolerance of the other edge's line.
  auto point_line_dist = [&](const VecN& x, const VecN& p0, const VecN& u) {
    VecN d = sub(x, p0);
    double t = dot(d, u);
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      double r = d[i] - t * u[i];
      s += r * r;
    }
    return std::sqrt(s);
  };
  std::vector<VecN> dirs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    VecN d = sub(reps[std::size_t(raw[i].ib)], reps[std::size_t(raw[i].ia)]);
    double n = norm(d);
    for (double& x : d) x /= n;
    dirs[std::size_t(i)] = std::move(d);
  }
  std::vector<int> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[std::size_t(x)] == x ? x : parent[std::size_t(x)] = find(parent[std::size_t(x)]); };
  for (int i = 0; i < m; ++i) {
    const VecN& pa = reps[std::size_t(raw[i].ia)];
    for (int j = i + 1; j < m; ++j) {
      const VecN& qa = reps[std::size_t(raw[j].ia)];
      const VecN& qb = reps[std::size_t(raw[j].ib)];
      bool same = point_line_dist(qa, pa, dirs[std::size_t(i)]) <= snap_tol &&
                  point_line_dist(qb, pa, dirs[std::size_t(i)]) <= snap_tol &&
                  point_line_dist(pa, qa, dirs[std::size_t(j)]) <= snap_tol &&
                  point_line_dist(reps[std::size_t(raw[i].ib)], qa, dirs[std::size_t(j)]) <= snap_tol;
      if (same) parent[std::size_t(find(i))] = find(j);
    }
  }
  std::map<int, std::vector<int>> groups;  // root -> edge indices, deterministic order
  for (int i = 0; i < m; ++i) groups[find(i)].push_back(i);

  PolyhedralOneCurrent out;
  out.dim = dim;

  for (auto& [root, members] : groups) {
    // Reference frame of the group: the longest member edge, ties by index.
    int ref = members.front();
    double best_len = -1.0;
    for (int i : members) {
      double len = dist(reps[std::size_t(raw[i].ia)], reps[std::size_t(raw[i].ib)]);
      if (len > best_len) {
        best_len = len;
        ref = i;
      }
    }
    VecN origin = reps[std::size_t(raw[ref].ia)];
    VecN u = dirs[std::size_t(ref)];
    if (!lex_positive(u)) {
      for (double& x : u) x = -x;
    }

    // Interval endpoints on the oriented line, one parameter per endpoint rep.
    std::map<int, double> t_of_rep;
    auto t_at = [&](int rep_idx) {
      auto it = t_of_rep.find(rep_idx);
      if (it != t_of_rep.end()) return it->second;
      double t = dot(sub(reps[std::size_t(rep_idx)], origin), u);
      t_of_rep.emplace(rep_idx, t);
      return t;
    };

    struct Breakpoint {
      double t;
      int rep;
    };
    std::map<int, double> delta;  // rep -> multiplicity change at that point
    for (int i : members) {
      double ta = t_at(raw[i].ia), tb = t_at(raw[i].ib);
      double value = raw[i].theta;
      int lo = raw[i].ia, hi = raw[i].ib;
      if (tb < ta) {
        std::swap(lo, hi);
        value = -value;
      }
      delta[lo] += value;
      delta[hi] -= value;
    }
    std::vector<Breakpoint> bps;
    bps.reserve(t_of_rep.size());
    for (auto& [rep_idx, t] : t_of_rep) bps.push_back({t, rep_idx});
    std::sort(bps.begin(), bps.end(), [](const Breakpoint& x, const Breakpoint& y) {
      if (x.t != y.t) return x.t < y.t;
      return x.rep < y.rep;
    });

    double cumulative = 0.0;
    for (std::size_t k = 0; k < bps.size(); ++k) {
      if (k > 0 && std::fabs(cumulative) > weight_tol) {
        VecN a = reps[std::size_t(bps[k - 1].rep)];
        VecN b = reps[std::size_t(bps[k].rep)];
        double theta = cumulative;
        if (lex_less(b, a)) {
          std::swap(a, b);
          theta = -theta;
        }
        out.edges.push_back({std::move(a), std::move(b), theta});
      }
      auto it = delta.find(bps[k].rep);
      if (it != delta.end()) cumulative += it->second;
    }
  }

  std::sort(out.edges.begin(), out.edges.end(), [](const OrientedEdge& x, const OrientedEdge& y) {
    if (x.a != y.a) return lex_less(x.a, y.a);
    return lex_less(x.b, y.b);
  });
  return out;
}

ZeroCurrent boundary(const PolyhedralOneCurrent& p) {
  PolyhedralOneCurrent c = canonicalize(p);
  ZeroCurrent b;
  b.dim = p.dim;
  for (const auto& e : c.edges) {
    b.atoms.push_back({e.b, e.theta});
    b.atoms.push_back({e.a, -e.theta});
  }
  // Canonical endpoints are exact representatives, so atom merging needs no
  // further snapping; keep the default for uniformity.
  return canonicalize(b);
}

double mass(const PolyhedralOneCurrent& p) {
  double m = 0.0;
  for (const auto& e : canonicalize(p).edges) m += std::fabs(e.theta) * dist(e.a, e.b);
  return m;
}

double h_mass(const PolyhedralOneCurrent& p, const BranchingFunction& h, const Anisotropy& sigma) {
  if (sigma.dim() != p.dim) throw std::invalid_argument("h_mass: dimension mismatch");
  double m = 0.0;
  for (const auto& e : canonicalize(p).edges) m += h(e.theta) * sigma.norm(sub(e.b, e.a));
  return m;
}

ZeroCurrent slice(const PolyhedralOneCurrent& p, const SliceSpec& s) {
  if (int(s.direction.size()) != p.dim) throw std::invalid_argument("slice: dimension mismatch");
  VecN d = s.direction;
  double dn = norm(d);
  if (dn == 0.0) throw std::invalid_argument("slice: zero direction");
  for (double& x : d) x /= dn;

  PolyhedralOneCurrent c = canonicalize(p);
  ZeroCurrent result;
  result.dim = p.dim;
  const double y = s.offset;
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    const auto& e = c.edges[i];
    double fa = dot(e.a, d), fb = dot(e.b, d);
    if (std::fabs(fa - y) <= 1e-9 && std::fabs(fb - y) <= 1e-9) {
      std::ostringstream os;
      os << "slice: edge " << i << " lies inside the fiber <x,dir> = " << y;
      throw DegeneracyError(os.str());
    }
    bool below_a = fa < y, below_b = fb < y;
    if (below_a == below_b) continue;
    double t = (y - fa) / (fb - fa);
    VecN point(std::size_t(p.dim));
    for (int k = 0; k < p.dim; ++k) point[std::size_t(k)] = e.a[std::size_t(k)] + t * (e.b[std::size_t(k)] - e.a[std::size_t(k)]);
    double w = below_a ? e.theta : -e.theta;
    result.atoms.push_back({std::move(point), w});
  }
  return canonicalize(result);
}

double h_mass_via_slicing(const PolyhedralOneCurrent& p, const BranchingFunction& h,
                          const DirectionMeasure& mu) {
  if (p.dim != 2) throw SemanticError("h_mass_via_slicing: planar currents only");
  if (mu.atoms.empty()) return 0.0;
  PolyhedralOneCurrent c = canonicalize(p);
  // For each direction atom, the inner integral over offsets contributes the
  // projected length of every edge weighted by H of its multiplicity.
  double total = 0.0;
  for (const auto& atom : mu.atoms) {
    double inner = 0.0;
    for (const auto& e : c.edges) {
      double px = (e.b[0] - e.a[0]) * atom.omega.x + (e.b[1] - e.a[1]) * atom.omega.y;
      inner += h(e.theta) * std::fabs(px);
    }
    total += atom.mass * inner;
  }
  return total;
}

namespace {

struct Digraph {
  int vertex_count = 0;
  // arc = (from, to, canonical edge index)
  struct Arc {
    int from, to, edge;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;  // vertex -> arc indices, sorted by head
};

Digraph build_digraph(const PolyhedralOneCurrent& c) {
  std::map<VecN, int> vertex_id;
  auto id_of = [&](const VecN& v) {
    auto it = vertex_id.find(v);
    if (it != vertex_id.end()) return it->second;
    int id = int(vertex_id.size());
    vertex_id.emplace(v, id);
    return id;
  };
  // Collect vertices in lexicographic order first so ids follow that order.
  std::vector<VecN> pts;
  for (const auto& e : c.edges) {
    pts.push_back(e.a);
    pts.push_back(e.b);
  }
  std::sort(pts.begin(), pts.end(), [](const VecN& x, const VecN& y) { return lex_less(x, y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const auto& v : pts) id_of(v);

  Digraph g;
  g.vertex_count = int(vertex_id.size());
  g.out.resize(std::size_t(g.vertex_count));
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    const auto& e = c.edges[i];
    int ia = id_of(e.a), ib = id_of(e.b);
    if (e.theta > 0.0)
      g.arcs.push_back({ia, ib, int(i)});
    else
      g.arcs.push_back({ib, ia, int(i)});
  }
  for (std::size_t i = 0; i < g.arcs.size(); ++i) g.out[std::size_t(g.arcs[i].from)].push_back(int(i));
  for (auto& lst : g.out) {
    std::sort(lst.begin(), lst.end(), [&](int x, int y) {
      if (g.arcs[std::size_t(x)].to != g.arcs[std::size_t(y)].to) return g.arcs[std::size_t(x)].to < g.arcs[std::size_t(y)].to;
      return g.arcs[std::size_t(x)].edge < g.arcs[std::size_t(y)].edge;
    });
  }
  return g;
}

}  // namespace

std::optional<PolyhedralOneCurrent> find_cycle(const PolyhedralOneCurrent& p) {
  PolyhedralOneCurrent c = canonicalize(p);
  if (c.edges.empty()) return std::nullopt;
  Digraph g = build_digraph(c);

  // Enumerate simple directed cycles rooted at their minimal vertex; keep the
  // lexicographically smallest sorted vertex set (then smallest arc list).
  // Enumeration is capped; past the cap the best cycle so far is returned,
  // which keeps the result deterministic.
  constexpr int kCap = 20000;
  int enumerated = 0;
  std::vector<int> best_key;
  std::vector<int> best_arcs;

  std::vector<int> path_arcs;
  std::vector<char> on_path(std::size_t(g.vertex_count), 0);

  auto consider = [&](const std::vector<int>& arcs) {
    std::vector<int> verts;
    verts.reserve(arcs.size());
    for (int ai : arcs) verts.push_back(g.arcs[std::size_t(ai)].from);
    std::sort(verts.begin(), verts.end());
    if (best_key.empty() || verts < best_key || (verts == best_key && arcs < best_arcs)) {
      best_key = verts;
      best_arcs = arcs;
    }
  };

  std::function<bool(int, int)> dfs = [&](int root, int u) -> bool {
    for (int ai : g.out[std::size_t(u)]) {
      int w = g.arcs[std::size_t(ai)].to;
      if (w == root) {
        path_arcs.push_back(ai);
        consider(path_arcs);
        path_arcs.pop_back();
        if (++enumerated >= kCap) return true;
      } else if (w > root && !on_path[std::size_t(w)]) {
        on_path[std::size_t(w)] = 1;
        path_arcs.push_back(ai);
        bool stop = dfs(root, w);
        path_arcs.pop_back();
        on_path[std::size_t(w)] = 0;
        if (stop) return true;
      }
    }
    return false;
  };

  for (int root = 0; root < g.vertex_count && enumerated < kCap; ++root) {
    on_path[std::size_t(root)] = 1;
    dfs(root, root);
    on_path[std::size_t(root)] = 0;
  }

  if (best_arcs.empty()) return std::nullopt;

  double lambda = std::numeric_limits<double>::infinity();
  for (int ai : best_arcs) lambda = std::min(lambda, std::fabs(c.edges[std::size_t(g.arcs[std::size_t(ai)].edge)].theta));

  PolyhedralOneCurrent cycle;
  cycle.dim = c.dim;
  for (int ai : best_arcs) {
    const auto& e = c.edges[std::size_t(g.arcs[std::size_t(ai)].edge)];
    cycle.edges.push_back({e.a, e.b, e.theta > 0.0 ? lambda : -lambda});
  }
  return cycle;
}

PolyhedralOneCurrent remove_cycles(const PolyhedralOneCurrent& p, const BranchingFunction& h,
                                   const Anisotropy& sigma) {
  PolyhedralOneCurrent cur = canonicalize(p);
  double cost_before = h_mass(cur, h, sigma);
  std::size_t guard = cur.edges.size() + 2;
  while (guard-- > 0) {
    auto cycle = find_cycle(cur);
    if (!cycle) {
      double cost_after = h_mass(cur, h, sigma);
      if (cost_after > cost_before + 1e-9 * (1.0 + std::fabs(cost_before)))
        throw std::logic_error("remove_cycles: H-mass increased");
      return cur;
    }
    PolyhedralOneCurrent next = cur;
    for (auto& e : cycle->edges) next.edges.push_back({e.a, e.b, -e.theta});
    cur = canonicalize(next);
  }
  throw std::logic_error("remove_cycles: did not terminate");
}

double max_multiplicity(const PolyhedralOneCurrent& p) {
  double m = 0.0;
  for (const auto& e : canonicalize(p).edges) m = std::max(m, std::fabs(e.theta));
  return m;
}

}  // namespace abt
