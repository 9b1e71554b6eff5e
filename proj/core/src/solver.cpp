#include "abt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "abt/errors.hpp"
#include "abt/simplex.hpp"

namespace abt {

double TransportProblem::total_source_mass() const {
  double s = 0.0;
  for (const auto& a : sources) s += a.mass;
  return s;
}

double TransportProblem::total_target_mass() const {
  double s = 0.0;
  for (const auto& a : targets) s += a.mass;
  return s;
}

std::vector<VecN> TransportProblem::terminal_points() const {
  std::vector<VecN> pts;
  pts.reserve(sources.size() + targets.size());
  for (const auto& a : sources) pts.push_back(a.point);
  for (const auto& a : targets) pts.push_back(a.point);
  return pts;
}

std::vector<double> TransportProblem::terminal_imbalance() const {
  std::vector<double> b;
  b.reserve(sources.size() + targets.size());
  for (const auto& a : sources) b.push_back(-a.mass);
  for (const auto& a : targets) b.push_back(a.mass);
  return b;
}

void TransportProblem::validate() const {
  if (sources.empty() || targets.empty())
    throw SemanticError("problem: sources and targets must be nonempty");
  for (const auto& a : sources) {
    if (int(a.point.size()) != dim) throw SemanticError("problem: source dimension mismatch");
    if (!(a.mass > 0.0)) throw SemanticError("problem: source masses must be > 0");
  }
  for (const auto& a : targets) {
    if (int(a.point.size()) != dim) throw SemanticError("problem: target dimension mismatch");
    if (!(a.mass > 0.0)) throw SemanticError("problem: target masses must be > 0");
  }
  double ms = total_source_mass(), mt = total_target_mass();
  if (std::fabs(ms - mt) > 1e-12 * std::max(1.0, ms))
    throw SemanticError("problem: source and target masses must balance");
  if (sigma.dim() != dim) throw SemanticError("problem: gauge dimension mismatch");
}

std::string Topology::canonical_key() const {
  std::vector<int> perm(static_cast<std::size_t>(steiner_count));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::vector<std::pair<int, int>> norm_edges;
    norm_edges.reserve(edges.size());
    for (auto [u, v] : edges) {
      int uu = u < terminal_count ? u : terminal_count + perm[std::size_t(u - terminal_count)];
      int vv = v < terminal_count ? v : terminal_count + perm[std::size_t(v - terminal_count)];
      norm_edges.push_back({std::min(uu, vv), std::max(uu, vv)});
    }
    std::sort(norm_edges.begin(), norm_edges.end());
    std::string key;
    for (auto [u, v] : norm_edges) key += std::to_string(u) + "-" + std::to_string(v) + ";";
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

// Full topologies: every terminal a leaf, every Steiner node of degree 3,
// exactly T-2 Steiner nodes. Built by inserting terminals one at a time into
// an existing edge, which enumerates each full topology exactly once.
void full_topologies(int terminals, std::vector<Topology>& out) {
  if (terminals == 2) {
    Topology t;
    t.terminal_count = 2;
    t.steiner_count = 0;
    t.edges = {{0, 1}};
    out.push_back(t);
    return;
  }
  std::vector<std::pair<int, int>> edges = {{0, 1}};
  std::function<void(int)> rec = [&](int next_terminal) {
    if (next_terminal == terminals) {
      Topology t;
      t.terminal_count = terminals;
      t.steiner_count = terminals - 2;
      t.edges = edges;
      out.push_back(t);
      return;
    }
    int s = terminals + (next_terminal - 2);
    const std::size_t count = edges.size();
    for (std::size_t i = 0; i < count; ++i) {
      auto [u, v] = edges[i];
      edges[i] = {u, s};
      edges.push_back({s, v});
      edges.push_back({s, next_terminal});
      rec(next_terminal + 1);
      edges.pop_back();
      edges.pop_back();
      edges[i] = {u, v};
    }
  };
  rec(2);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(std::size_t(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[std::size_t(x)] == x ? x : parent[std::size_t(x)] = find(parent[std::size_t(x)]); }
  void unite(int a, int b) { parent[std::size_t(find(a))] = find(b); }
};

}  // namespace

std::vector<Topology> enumerate_topologies(int terminals, int max_steiner) {
  if (terminals < 2) throw std::invalid_argument("enumerate_topologies: need at least two terminals");
  max_steiner = std::min(max_steiner, terminals - 2);
  if (max_steiner < 0) max_steiner = 0;

  std::vector<Topology> fulls;
  full_topologies(terminals, fulls);

  std::map<std::string, Topology> dedup;
  for (const Topology& full : fulls) {
    const int ne = int(full.edges.size());
    const int nodes = full.node_count();
    for (int mask = 0; mask < (1 << ne); ++mask) {
      UnionFind uf(nodes);
      for (int i = 0; i < ne; ++i) {
        if (mask & (1 << i)) uf.unite(full.edges[std::size_t(i)].first, full.edges[std::size_t(i)].second);
      }
      // Reject subsets that merge two terminals.
      std::vector<int> terminal_of(std::size_t(nodes), -1);
      bool bad = false;
      for (int t = 0; t < terminals && !bad; ++t) {
        int r = uf.find(t);
        if (terminal_of[std::size_t(r)] >= 0) bad = true;
        terminal_of[std::size_t(r)] = t;
      }
      if (bad) continue;

      // Component representatives: the terminal when present, else a fresh
      // Steiner id assigned on first appearance in the surviving edges.
      std::map<int, int> steiner_id;
      std::vector<std::pair<int, int>> edges;
      auto node_id = [&](int x) {
        int r = uf.find(x);
        if (terminal_of[std::size_t(r)] >= 0) return terminal_of[std::size_t(r)];
        auto it = steiner_id.find(r);
        if (it != steiner_id.end()) return it->second;
        int id = terminals + int(steiner_id.size());
        steiner_id.emplace(r, id);
        return id;
      };
      for (int i = 0; i < ne; ++i) {
        if (mask & (1 << i)) continue;
        edges.push_back({node_id(full.edges[std::size_t(i)].first), node_id(full.edges[std::size_t(i)].second)});
      }
      int s = int(steiner_id.size());
      if (s > max_steiner) continue;

      std::vector<int> degree(std::size_t(terminals + s), 0);
      for (auto [u, v] : edges) {
        ++degree[std::size_t(u)];
        ++degree[std::size_t(v)];
      }
      bool ok = true;
      for (int j = terminals; j < terminals + s; ++j) {
        if (degree[std::size_t(j)] < 3) ok = false;
      }
      for (int t = 0; t < terminals; ++t) {
        if (degree[std::size_t(t)] < 1) ok = false;
      }
      if (!ok) continue;

      Topology topo;
      topo.terminal_count = terminals;
      topo.steiner_count = s;
      topo.edges = std::move(edges);
      dedup.emplace(topo.canonical_key(), std::move(topo));
    }
  }
  std::vector<Topology> out;
  out.reserve(dedup.size());
  for (auto& [key, topo] : dedup) out.push_back(std::move(topo));
  return out;
}

std::vector<Topology> enumerate_topologies_pruefer(int terminals, int max_steiner) {
  if (terminals < 2) throw std::invalid_argument("enumerate_topologies_pruefer: need two terminals");
  max_steiner = std::max(0, std::min(max_steiner, terminals - 2));
  std::map<std::string, Topology> dedup;
  for (int s = 0; s <= max_steiner; ++s) {
    const int m = terminals + s;
    const int len = m - 2;
    std::vector<int> seq(std::size_t(std::max(0, len)), 0);
    for (;;) {
      // Decode the sequence into a labeled tree.
      std::vector<int> degree(std::size_t(m), 1);
      for (int a : seq) ++degree[std::size_t(a)];
      std::vector<int> deg = degree;
      std::vector<std::pair<int, int>> edges;
      std::vector<char> used(std::size_t(m), 0);
      for (int a : seq) {
        int leaf = -1;
        for (int j = 0; j < m; ++j) {
          if (!used[std::size_t(j)] && deg[std::size_t(j)] == 1) {
            leaf = j;
            break;
          }
        }
        edges.push_back({leaf, a});
        used[std::size_t(leaf)] = 1;
        --deg[std::size_t(leaf)];
        --deg[std::size_t(a)];
      }
      std::vector<int> rest;
      for (int j = 0; j < m; ++j) {
        if (!used[std::size_t(j)] && deg[std::size_t(j)] == 1) rest.push_back(j);
      }
      if (rest.size() == 2) edges.push_back({rest[0], rest[1]});

      bool ok = true;
      for (int j = terminals; j < m; ++j) {
        if (degree[std::size_t(j)] < 3) ok = false;
      }
      if (ok) {
        Topology topo;
        topo.terminal_count = terminals;
        topo.steiner_count = s;
        topo.edges = edges;
        dedup.emplace(topo.canonical_key(), std::move(topo));
      }

      // Odometer over [0, m)^len.
      int i = len - 1;
      while (i >= 0) {
        if (++seq[std::size_t(i)] < m) break;
        seq[std::size_t(i)] = 0;
        --i;
      }
      if (i < 0) break;
      if (len == 0) break;
    }
  }
  std::vector<Topology> out;
  for (auto& [key, topo] : dedup) out.push_back(std::move(topo));
  return out;
}

std::vector<double> topology_multiplicities(const Topology& topo, const std::vector<double>& imbalance) {
  const int n = topo.node_count();
  if (int(imbalance.size()) != topo.terminal_count)
    throw std::invalid_argument("topology_multiplicities: imbalance size mismatch");
  std::vector<double> residual(std::size_t(n), 0.0);
  for (int t = 0; t < topo.terminal_count; ++t) residual[std::size_t(t)] = imbalance[std::size_t(t)];

  const int ne = int(topo.edges.size());
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));
  for (int e = 0; e < ne; ++e) {
    incident[std::size_t(topo.edges[std::size_t(e)].first)].push_back(e);
    incident[std::size_t(topo.edges[std::size_t(e)].second)].push_back(e);
  }
  std::vector<int> degree(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) degree[std::size_t(v)] = int(incident[std::size_t(v)].size());

  std::vector<double> theta(std::size_t(ne), 0.0);
  std::vector<char> done(std::size_t(ne), 0);
  std::vector<int> leaves;
  for (int v = 0; v < n; ++v) {
    if (degree[std::size_t(v)] == 1) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    int v = leaves.back();
    leaves.pop_back();
    if (degree[std::size_t(v)] != 1) continue;
    int eidx = -1;
    for (int e : incident[std::size_t(v)]) {
      if (!done[std::size_t(e)]) {
        eidx = e;
        break;
      }
    }
    if (eidx < 0) continue;
    auto [a, b] = topo.edges[std::size_t(eidx)];
    // Edge contributes +theta at b and -theta at a.
    double th = (v == b) ? residual[std::size_t(v)] : -residual[std::size_t(v)];
    theta[std::size_t(eidx)] = th;
    residual[std::size_t(b)] -= th;
    residual[std::size_t(a)] += th;
    done[std::size_t(eidx)] = 1;
    --degree[std::size_t(v)];
    int other = (v == b) ? a : b;
    if (--degree[std::size_t(other)] == 1) leaves.push_back(other);
  }
  for (int v = 0; v < n; ++v) {
    if (std::fabs(residual[std::size_t(v)]) > 1e-9)
      throw SemanticError("topology_multiplicities: topology cannot carry the prescribed boundary");
  }
  return theta;
}

// Squared distance between n-dimensional points, used by the IRLS loop.
static double norm2_nd(const VecN& a, const VecN& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

double problem_scale(const TransportProblem& p) {
  double scale = 0.0;
  std::vector<VecN> terminals = p.terminal_points();
  for (const auto& a : terminals) {
    for (const auto& b : terminals) scale = std::max(scale, dist(a, b));
  }
  return scale > 0.0 ? scale : 1.0;
}

struct Objective {
  const Topology* topo;
  const TransportProblem* problem;
  const std::vector<double>* weights;  // H(|theta_e|)

  double eval(const std::vector<VecN>& pos) const {
    double total = 0.0;
    for (std::size_t e = 0; e < topo->edges.size(); ++e) {
      double w = (*weights)[e];
      if (w <= 0.0) continue;
      auto [u, v] = topo->edges[e];
      total += w * problem->sigma.norm(sub(pos[std::size_t(u)], pos[std::size_t(v)]));
    }
    return total;
  }
};

// Neighbor-averaging layout for the free nodes; deterministic.
void init_steiner_positions(const Topology& topo, std::vector<VecN>& pos, int terminal_count) {
  const int n = topo.node_count();
  const int dim = int(pos[0].size());
  VecN centroid(std::size_t(dim), 0.0);
  for (int t = 0; t < terminal_count; ++t) {
    for (int d = 0; d < dim; ++d) centroid[std::size_t(d)] += pos[std::size_t(t)][std::size_t(d)];
  }
  for (int d = 0; d < dim; ++d) centroid[std::size_t(d)] /= double(terminal_count);
  for (int v = terminal_count; v < n; ++v) pos[std::size_t(v)] = centroid;
  for (int sweep = 0; sweep < 60; ++sweep) {
    for (int v = terminal_count; v < n; ++v) {
      VecN avg(std::size_t(dim), 0.0);
      int cnt = 0;
      for (auto [a, b] : topo.edges) {
        int other = -1;
        if (a == v) other = b;
        if (b == v) other = a;
        if (other < 0) continue;
        for (int d = 0; d < dim; ++d) avg[std::size_t(d)] += pos[std::size_t(other)][std::size_t(d)];
        ++cnt;
      }
      if (cnt == 0) continue;
      for (int d = 0; d < dim; ++d) pos[std::size_t(v)][std::size_t(d)] = avg[std::size_t(d)] / double(cnt);
    }
  }
}

// Exact LP for polygonal gauges: minimize sum w_e g_e with
// g_e >= <n_j, x_u - x_v> for every edge-line normal n_j of the unit ball.
void optimize_polygonal_lp(const Topology& topo, const TransportProblem& problem,
                           const std::vector<double>& weights, std::vector<VecN>& pos) {
  const int tcount = topo.terminal_count;
  const auto& normals = problem.sigma.ball().edge_line_normals();
  const int nn = int(normals.size());

  std::vector<int> active_edges;
  std::set<int> active_steiner_set;
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    if (weights[e] <= 0.0) continue;
    active_edges.push_back(int(e));
    auto [u, v] = topo.edges[e];
    if (u >= tcount) active_steiner_set.insert(u);
    if (v >= tcount) active_steiner_set.insert(v);
  }
  if (active_steiner_set.empty()) return;
  std::vector<int> steiner(active_steiner_set.begin(), active_steiner_set.end());
  std::map<int, int> steiner_slot;
  for (std::size_t i = 0; i < steiner.size(); ++i) steiner_slot[steiner[i]] = int(i);

  const int ke = int(active_edges.size());
  const int ks = int(steiner.size());
  const int rows = ke * nn;
  // Variables: g_e (ke), x+ (2 ks), x- (2 ks), slack (rows).
  const int nvars = ke + 4 * ks + rows;
  std::vector<std::vector<double>> A(std::size_t(rows), std::vector<double>(std::size_t(nvars), 0.0));
  std::vector<double> rhs(std::size_t(rows), 0.0);
  std::vector<double> cost(std::size_t(nvars), 0.0);
  for (int ei = 0; ei < ke; ++ei) cost[std::size_t(ei)] = weights[std::size_t(active_edges[std::size_t(ei)])];

  int row = 0;
  for (int ei = 0; ei < ke; ++ei) {
    auto [u, v] = topo.edges[std::size_t(active_edges[std::size_t(ei)])];
    for (int j = 0; j < nn; ++j, ++row) {
      Vec2 n = normals[std::size_t(j)];
      auto add_node = [&](int node, double sgn) {
        if (node >= tcount) {
          int slot = steiner_slot[node];
          A[std::size_t(row)][std::size_t(ke + 2 * slot + 0)] += sgn * n.x;
          A[std::size_t(row)][std::size_t(ke + 2 * slot + 1)] += sgn * n.y;
          A[std::size_t(row)][std::size_t(ke + 2 * ks + 2 * slot + 0)] -= sgn * n.x;
          A[std::size_t(row)][std::size_t(ke + 2 * ks + 2 * slot + 1)] -= sgn * n.y;
        } else {
          rhs[std::size_t(row)] -= sgn * (n.x * pos[std::size_t(node)][0] + n.y * pos[std::size_t(node)][1]);
        }
      };
      add_node(u, +1.0);
      add_node(v, -1.0);
      A[std::size_t(row)][std::size_t(ei)] = -1.0;
      A[std::size_t(row)][std::size_t(ke + 4 * ks + row)] = 1.0;
    }
  }
  LpResult lp = solve_equality_lp(std::move(A), std::move(rhs), std::move(cost));
  for (int i = 0; i < ks; ++i) {
    pos[std::size_t(steiner[std::size_t(i)])] = VecN{
        lp.x[std::size_t(ke + 2 * i + 0)] - lp.x[std::size_t(ke + 2 * ks + 2 * i + 0)],
        lp.x[std::size_t(ke + 2 * i + 1)] - lp.x[std::size_t(ke + 2 * ks + 2 * i + 1)]};
  }
}

// Smoothed IRLS for the Euclidean (constant) gauge: repeatedly solves the
// weighted-Laplacian normal equations while annealing the smoothing length.
void optimize_euclidean_irls(const Topology& topo, const TransportProblem& problem,
                             const std::vector<double>& weights, std::vector<VecN>& pos) {
  const int tcount = topo.terminal_count;
  const int dim = problem.dim;
  std::set<int> active_steiner_set;
  std::vector<int> active_edges;
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    if (weights[e] <= 0.0) continue;
    active_edges.push_back(int(e));
    auto [u, v] = topo.edges[e];
    if (u >= tcount) active_steiner_set.insert(u);
    if (v >= tcount) active_steiner_set.insert(v);
  }
  if (active_steiner_set.empty()) return;
  std::vector<int> steiner(active_steiner_set.begin(), active_steiner_set.end());
  std::map<int, int> slot;
  for (std::size_t i = 0; i < steiner.size(); ++i) slot[steiner[i]] = int(i);
  const int k = int(steiner.size());

  const double scale = problem_scale(problem);
  for (double eps = 1e-2 * scale; eps > 1e-14 * scale; eps *= 0.25) {
    for (int inner = 0; inner < 100; ++inner) {
      std::vector<std::vector<double>> L(std::size_t(k), std::vector<double>(std::size_t(k), 0.0));
      std::vector<VecN> rhs(std::size_t(k), VecN(std::size_t(dim), 0.0));
      for (int e : active_edges) {
        auto [u, v] = topo.edges[std::size_t(e)];
        double len = std::sqrt(norm2_nd(pos[std::size_t(u)], pos[std::size_t(v)]) + eps * eps);
        double omega = weights[std::size_t(e)] / len;
        bool us = u >= tcount, vs = v >= tcount;
        if (us) L[std::size_t(slot[u])][std::size_t(slot[u])] += omega;
        if (vs) L[std::size_t(slot[v])][std::size_t(slot[v])] += omega;
        if (us && vs) {
          L[std::size_t(slot[u])][std::size_t(slot[v])] -= omega;
          L[std::size_t(slot[v])][std::size_t(slot[u])] -= omega;
        } else if (us) {
          for (int d = 0; d < dim; ++d) rhs[std::size_t(slot[u])][std::size_t(d)] += omega * pos[std::size_t(v)][std::size_t(d)];
        } else if (vs) {
          for (int d = 0; d < dim; ++d) rhs[std::size_t(slot[v])][std::size_t(d)] += omega * pos[std::size_t(u)][std::size_t(d)];
        }
      }
      // Gaussian elimination with partial pivoting, shared across coordinates.
      std::vector<std::vector<double>> M = L;
      std::vector<VecN> B = rhs;
      for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r) {
          if (std::fabs(M[std::size_t(r)][std::size_t(col)]) > std::fabs(M[std::size_t(piv)][std::size_t(col)])) piv = r;
        }
        std::swap(M[std::size_t(col)], M[std::size_t(piv)]);
        std::swap(B[std::size_t(col)], B[std::size_t(piv)]);
        double p = M[std::size_t(col)][std::size_t(col)];
        if (std::fabs(p) < 1e-300) continue;
        for (int r = 0; r < k; ++r) {
          if (r == col) continue;
          double f = M[std::size_t(r)][std::size_t(col)] / p;
          if (f == 0.0) continue;
          for (int c2 = col; c2 < k; ++c2) M[std::size_t(r)][std::size_t(c2)] -= f * M[std::size_t(col)][std::size_t(c2)];
          for (int d = 0; d < dim; ++d) B[std::size_t(r)][std::size_t(d)] -= f * B[std::size_t(col)][std::size_t(d)];
        }
      }
      double moved = 0.0;
      for (int i = 0; i < k; ++i) {
        VecN next(std::size_t(dim), 0.0);
        double p = M[std::size_t(i)][std::size_t(i)];
        if (std::fabs(p) < 1e-300) {
          next = pos[std::size_t(steiner[std::size_t(i)])];
        } else {
          for (int d = 0; d < dim; ++d) next[std::size_t(d)] = B[std::size_t(i)][std::size_t(d)] / p;
        }
        moved = std::max(moved, dist(next, pos[std::size_t(steiner[std::size_t(i)])]));
        pos[std::size_t(steiner[std::size_t(i)])] = std::move(next);
      }
      if (moved <= 1e-12 * scale) break;
    }
  }
}

// Spec-style fallback for functional gauges: normalized subgradient steps
// c/sqrt(k) with iterate averaging, then a shrinking compass polish.
void optimize_subgradient(const Topology& topo, const TransportProblem& problem,
                          const std::vector<double>& weights, std::vector<VecN>& pos,
                          const PositionOptions& opts) {
  const int tcount = topo.terminal_count;
  const int dim = problem.dim;
  std::set<int> active;
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    if (weights[e] <= 0.0) continue;
    auto [u, v] = topo.edges[e];
    if (u >= tcount) active.insert(u);
    if (v >= tcount) active.insert(v);
  }
  if (active.empty()) return;
  std::vector<int> steiner(active.begin(), active.end());
  const int nv = int(steiner.size()) * dim;
  const double scale = problem_scale(problem);
  Objective obj{&topo, &problem, &weights};

  auto get = [&](int i) -> double& {
    return pos[std::size_t(steiner[std::size_t(i / dim)])][std::size_t(i % dim)];
  };
  auto f = [&]() { return obj.eval(pos); };

  std::vector<double> best(static_cast<std::size_t>(nv)), avg(static_cast<std::size_t>(nv), 0.0);
  for (int i = 0; i < nv; ++i) best[std::size_t(i)] = get(i);
  double best_f = f();

  const int iters = std::max(200, opts.max_iters);
  int avg_count = 0;
  const double h = 1e-7 * scale;
  for (int k = 1; k <= iters; ++k) {
    std::vector<double> g(static_cast<std::size_t>(nv));
    double gn = 0.0;
    for (int i = 0; i < nv; ++i) {
      double& x = get(i);
      double save = x;
      x = save + h;
      double fp = f();
      x = save - h;
      double fm = f();
      x = save;
      g[std::size_t(i)] = (fp - fm) / (2.0 * h);
      gn += g[std::size_t(i)] * g[std::size_t(i)];
    }
    gn = std::sqrt(gn);
    if (gn < 1e-15) break;
    double step = 0.25 * scale / std::sqrt(double(k));
    for (int i = 0; i < nv; ++i) get(i) -= step * g[std::size_t(i)] / gn;
    double fv = f();
    if (fv < best_f) {
      best_f = fv;
      for (int i = 0; i < nv; ++i) best[std::size_t(i)] = get(i);
    }
    if (k > iters / 2) {
      for (int i = 0; i < nv; ++i) avg[std::size_t(i)] += get(i);
      ++avg_count;
    }
  }
  if (avg_count > 0) {
    std::vector<double> save(static_cast<std::size_t>(nv));
    for (int i = 0; i < nv; ++i) {
      save[std::size_t(i)] = get(i);
      get(i) = avg[std::size_t(i)] / double(avg_count);
    }
    double fv = f();
    if (fv < best_f) {
      best_f = fv;
      for (int i = 0; i < nv; ++i) best[std::size_t(i)] = get(i);
    }
  }
  for (int i = 0; i < nv; ++i) get(i) = best[std::size_t(i)];

  // Compass polish.
  for (double rho = 0.05 * scale; rho > 1e-11 * scale;) {
    bool improved = false;
    for (int i = 0; i < nv && !improved; ++i) {
      for (double sgn : {+1.0, -1.0}) {
        double& x = get(i);
        double save = x;
        x = save + sgn * rho;
        double fv = f();
        if (fv < best_f - 1e-15) {
          best_f = fv;
          improved = true;
          break;
        }
        x = save;
      }
    }
    if (!improved) rho *= 0.5;
  }
}

}  // namespace

PositionResult optimize_positions(const Topology& topo, const TransportProblem& problem,
                                  PositionOptions opts) {
  if (topo.terminal_count != problem.terminal_count())
    throw std::invalid_argument("optimize_positions: terminal count mismatch");
  std::vector<double> theta = topology_multiplicities(topo, problem.terminal_imbalance());
  std::vector<double> weights(theta.size());
  for (std::size_t e = 0; e < theta.size(); ++e) weights[e] = problem.h(theta[e]);

  PositionResult result;
  result.positions = problem.terminal_points();
  result.positions.resize(std::size_t(topo.node_count()), VecN(std::size_t(problem.dim), 0.0));
  if (topo.steiner_count > 0) {
    init_steiner_positions(topo, result.positions, topo.terminal_count);
    switch (problem.sigma.kind()) {
      case Anisotropy::Kind::Polygonal:
        if (problem.sigma.ball().half_count() <= 64) {
          optimize_polygonal_lp(topo, problem, weights, result.positions);
        } else {
          optimize_subgradient(topo, problem, weights, result.positions, opts);
        }
        break;
      case Anisotropy::Kind::Constant:
        optimize_euclidean_irls(topo, problem, weights, result.positions);
        break;
      case Anisotropy::Kind::Functional:
        optimize_subgradient(topo, problem, weights, result.positions, opts);
        break;
    }
  }

  Objective obj{&topo, &problem, &weights};
  result.cost = obj.eval(result.positions);
  for (int s = topo.terminal_count; s < topo.node_count(); ++s) {
    for (auto [u, v] : topo.edges) {
      int other = -1;
      if (u == s) other = v;
      if (v == s) other = u;
      if (other < 0) continue;
      if (dist(result.positions[std::size_t(s)], result.positions[std::size_t(other)]) <= opts.collapse_tol) {
        result.collapsed.push_back(s - topo.terminal_count);
        break;
      }
    }
  }
  return result;
}

std::string Network::encoding() const {
  std::string out;
  char buf[64];
  for (const auto& e : current.edges) {
    for (double x : e.a) {
      std::snprintf(buf, sizeof buf, "%.17g,", x);
      out += buf;
    }
    out += ">";
    for (double x : e.b) {
      std::snprintf(buf, sizeof buf, "%.17g,", x);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ":%.17g;", e.theta);
    out += buf;
  }
  return out;
}

namespace {

Network build_network(const Topology& topo, const std::vector<VecN>& positions,
                      const TransportProblem& problem) {
  std::vector<double> theta = topology_multiplicities(topo, problem.terminal_imbalance());
  PolyhedralOneCurrent raw;
  raw.dim = problem.dim;
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    if (std::fabs(theta[e]) <= 1e-12) continue;
    auto [u, v] = topo.edges[e];
    const VecN& a = positions[std::size_t(u)];
    const VecN& b = positions[std::size_t(v)];
    if (dist(a, b) <= 1e-9) continue;  // coincident endpoints carry no current
    raw.edges.push_back({a, b, theta[e]});
  }
  Network net;
  net.topology = topo;
  net.current = remove_cycles(raw, problem.h, problem.sigma);
  net.cost = h_mass(net.current, problem.h, problem.sigma);
  for (int s = topo.terminal_count; s < topo.node_count(); ++s)
    net.steiner_positions.push_back(positions[std::size_t(s)]);
  double mplus = problem.total_target_mass();
  net.diagnostics.mass_bound_constant = mass_bound_constant(problem.sigma, problem.h, mplus);
  net.diagnostics.max_multiplicity = max_multiplicity(net.current);
  net.diagnostics.linf_bound_ok = net.diagnostics.max_multiplicity <= mplus + 1e-9;
  net.diagnostics.acyclic = !find_cycle(net.current).has_value();
  return net;
}

}  // namespace

Network initial_feasible(const TransportProblem& problem) {
  problem.validate();
  const int ns = int(problem.sources.size());
  const int nt = int(problem.targets.size());

  std::vector<int> src_order(static_cast<std::size_t>(ns)), tgt_order(static_cast<std::size_t>(nt));
  std::iota(src_order.begin(), src_order.end(), 0);
  std::iota(tgt_order.begin(), tgt_order.end(), 0);
  auto by_point = [&](const std::vector<TransportProblem::Atom>& atoms) {
    return [&atoms](int a, int b) {
      if (atoms[std::size_t(a)].point != atoms[std::size_t(b)].point)
        return lex_less(atoms[std::size_t(a)].point, atoms[std::size_t(b)].point);
      return a < b;
    };
  };
  std::sort(src_order.begin(), src_order.end(), by_point(problem.sources));
  std::sort(tgt_order.begin(), tgt_order.end(), by_point(problem.targets));

  // North-west-corner rule over the sorted atom lists.
  std::vector<double> rs(static_cast<std::size_t>(ns)), rt(static_cast<std::size_t>(nt));
  for (int i = 0; i < ns; ++i) rs[std::size_t(i)] = problem.sources[std::size_t(src_order[std::size_t(i)])].mass;
  for (int j = 0; j < nt; ++j) rt[std::size_t(j)] = problem.targets[std::size_t(tgt_order[std::size_t(j)])].mass;

  Topology topo;
  topo.terminal_count = ns + nt;
  topo.steiner_count = 0;
  int i = 0, j = 0;
  while (i < ns && j < nt) {
    topo.edges.push_back({src_order[std::size_t(i)], ns + tgt_order[std::size_t(j)]});
    double m = std::min(rs[std::size_t(i)], rt[std::size_t(j)]);
    rs[std::size_t(i)] -= m;
    rt[std::size_t(j)] -= m;
    bool src_done = rs[std::size_t(i)] <= 1e-15 * (1.0 + m);
    bool tgt_done = rt[std::size_t(j)] <= 1e-15 * (1.0 + m);
    if (src_done && tgt_done) {
      ++i;
      ++j;
    } else if (src_done) {
      ++i;
    } else {
      ++j;
    }
  }

  // Connect matching components into one spanning tree with zero-flow edges.
  UnionFind uf(topo.terminal_count);
  for (auto [u, v] : topo.edges) uf.unite(u, v);
  int root = uf.find(0);
  for (int t = 1; t < topo.terminal_count; ++t) {
    if (uf.find(t) != root) {
      topo.edges.push_back({0, t});
      uf.unite(0, t);
      root = uf.find(0);
    }
  }
  return build_network(topo, problem.terminal_points(), problem);
}

namespace {

// Contract Steiner nodes of degree <= 2 until the topology is well formed.
// Returns false when the topology degenerates.
bool normalize_topology(Topology& topo) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> degree(std::size_t(topo.node_count()), 0);
    for (auto [u, v] : topo.edges) {
      ++degree[std::size_t(u)];
      ++degree[std::size_t(v)];
    }
    for (int s = topo.terminal_count; s < topo.node_count(); ++s) {
      if (degree[std::size_t(s)] >= 3) continue;
      changed = true;
      std::vector<int> nbrs;
      std::vector<std::size_t> eidx;
      for (std::size_t e = 0; e < topo.edges.size(); ++e) {
        auto [u, v] = topo.edges[e];
        if (u == s) {
          nbrs.push_back(v);
          eidx.push_back(e);
        } else if (v == s) {
          nbrs.push_back(u);
          eidx.push_back(e);
        }
      }
      if (degree[std::size_t(s)] == 2) {
        topo.edges[eidx[0]] = {std::min(nbrs[0], nbrs[1]), std::max(nbrs[0], nbrs[1])};
        topo.edges.erase(topo.edges.begin() + long(eidx[1]));
      } else if (degree[std::size_t(s)] == 1) {
        topo.edges.erase(topo.edges.begin() + long(eidx[0]));
      }
      // Remove node s by renumbering the last steiner id onto it.
      int last = topo.node_count() - 1;
      for (auto& [u, v] : topo.edges) {
        if (u == last) u = s;
        if (v == last) v = s;
      }
      --topo.steiner_count;
      break;
    }
  }
  // Validity: connected tree over all terminals.
  const int n = topo.node_count();
  if (int(topo.edges.size()) != n - 1) return false;
  UnionFind uf(n);
  for (auto [u, v] : topo.edges) {
    if (u == v) return false;
    uf.unite(u, v);
  }
  int root = uf.find(0);
  for (int v = 1; v < n; ++v) {
    if (uf.find(v) != root) return false;
  }
  return true;
}

std::vector<Topology> local_moves(const Topology& topo, int max_steiner) {
  std::vector<Topology> moves;
  std::vector<int> degree(std::size_t(topo.node_count()), 0);
  for (auto [u, v] : topo.edges) {
    ++degree[std::size_t(u)];
    ++degree[std::size_t(v)];
  }

  // Reroute a leaf terminal to another node.
  for (int t = 0; t < topo.terminal_count; ++t) {
    if (degree[std::size_t(t)] != 1) continue;
    std::size_t leaf_edge = 0;
    int attach = -1;
    for (std::size_t e = 0; e < topo.edges.size(); ++e) {
      auto [u, v] = topo.edges[e];
      if (u == t) {
        leaf_edge = e;
        attach = v;
      } else if (v == t) {
        leaf_edge = e;
        attach = u;
      }
    }
    for (int w = 0; w < topo.node_count(); ++w) {
      if (w == t || w == attach) continue;
      Topology next = topo;
      next.edges[leaf_edge] = {std::min(t, w), std::max(t, w)};
      if (normalize_topology(next)) moves.push_back(std::move(next));
    }
  }

  // Split an edge with a new Steiner node and reroute a leaf terminal to it.
  if (topo.steiner_count < max_steiner) {
    for (std::size_t e = 0; e < topo.edges.size(); ++e) {
      auto [u, v] = topo.edges[e];
      for (int t = 0; t < topo.terminal_count; ++t) {
        if (degree[std::size_t(t)] != 1 || t == u || t == v) continue;
        Topology next = topo;
        int s = next.node_count();
        ++next.steiner_count;
        next.edges.erase(
            std::remove_if(next.edges.begin(), next.edges.end(),
                           [&](auto ed) { return ed.first == t || ed.second == t; }),
            next.edges.end());
        // The split edge may have been the terminal's own attachment; re-read
        // its endpoints from the original topology.
        auto split = topo.edges[e];
        if (split.first != t && split.second != t) {
          next.edges.erase(std::remove(next.edges.begin(), next.edges.end(), split), next.edges.end());
          next.edges.push_back({split.first, s});
          next.edges.push_back({s, split.second});
        } else {
          continue;
        }
        next.edges.push_back({std::min(t, s), std::max(t, s)});
        if (normalize_topology(next)) moves.push_back(std::move(next));
      }
    }
  }

  // Contract a Steiner node into one of its neighbors.
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    auto [u, v] = topo.edges[e];
    if (u < topo.terminal_count && v < topo.terminal_count) continue;
    Topology next = topo;
    int keep = std::min(u, v), drop = std::max(u, v);  // drop the steiner (higher id)
    next.edges.erase(next.edges.begin() + long(e));
    for (auto& [a, b] : next.edges) {
      if (a == drop) a = keep;
      if (b == drop) b = keep;
    }
    int last = next.node_count() - 1;
    for (auto& [a, b] : next.edges) {
      if (a == last) a = drop;
      if (b == last) b = drop;
    }
    --next.steiner_count;
    if (normalize_topology(next)) moves.push_back(std::move(next));
  }

  return moves;
}

}  // namespace

SolveResult solve(const TransportProblem& problem, const SolveBudget& budget) {
  problem.validate();
  BranchingAxiomReport hreport = check_branching_axioms(
      problem.h, {std::max(1.0, problem.total_target_mass()) * 1.5, 64});
  if (!hreport.solver_ok())
    throw SemanticError("solve: branching function violates the solver axioms (even/subadditive/monotone)");
  ConvexityReport creport = check_convexity(problem.sigma);
  if (!creport.convex) throw SemanticError("solve: gauge is not convex");

  SolveResult result;
  result.h_blowup_warning = !hreport.derivative_blowup_ok;

  const int T = problem.terminal_count();
  int max_steiner = budget.max_steiner < 0 ? T - 2 : budget.max_steiner;
  max_steiner = std::max(0, std::min(max_steiner, T - 2));

  if (budget.mode == SolveBudget::Mode::Exhaustive) {
    if (T > 6) throw SemanticError("solve: exhaustive mode supports at most 6 terminals");
    std::vector<Network> candidates;
    for (const Topology& topo : enumerate_topologies(T, max_steiner)) {
      PositionResult pr = optimize_positions(topo, problem);
      candidates.push_back(build_network(topo, pr.positions, problem));
    }
    double best_cost = std::numeric_limits<double>::infinity();
    for (const Network& n : candidates) best_cost = std::min(best_cost, n.cost);
    double tie_eps = 1e-12 * (1.0 + std::fabs(best_cost));
    std::vector<Network> tied;
    for (Network& n : candidates) {
      if (n.cost <= best_cost + tie_eps) tied.push_back(std::move(n));
    }
    std::sort(tied.begin(), tied.end(),
              [](const Network& a, const Network& b) { return a.encoding() < b.encoding(); });
    result.best = tied.front();
    result.ties.assign(tied.begin() + 1, tied.end());
    return result;
  }

  // Local search with first-improvement moves and seeded restarts.
  Network start = initial_feasible(problem);
  std::map<std::string, Network> memo;
  auto evaluate = [&](const Topology& topo) -> const Network& {
    std::string key = topo.canonical_key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    PositionResult pr = optimize_positions(topo, problem);
    Network net = build_network(topo, pr.positions, problem);
    return memo.emplace(std::move(key), std::move(net)).first->second;
  };

  const Network* global_best = &evaluate(start.topology);
  for (int restart = 0; restart < std::max(1, budget.seeds); ++restart) {
    Rng rng(budget.seed * 0x9e3779b97f4a7c15ULL + std::uint64_t(restart));
    Topology current = start.topology;
    double current_cost = evaluate(current).cost;
    int iters = 0;
    bool improving = true;
    while (improving) {
      if (iters >= budget.iters) {
        result.budget_exhausted = true;
        break;
      }
      improving = false;
      std::vector<Topology> moves = local_moves(current, max_steiner);
      // Seeded Fisher-Yates shuffle; first improvement wins.
      for (std::size_t k = moves.size(); k > 1; --k) {
        std::size_t j = std::size_t(rng.below(k));
        std::swap(moves[k - 1], moves[j]);
      }
      for (Topology& mv : moves) {
        const Network& net = evaluate(mv);
        if (net.cost < current_cost - 1e-12) {
          current = std::move(mv);
          current_cost = net.cost;
          improving = true;
          ++iters;
          break;
        }
      }
    }
    const Network& reached = evaluate(current);
    if (reached.cost < global_best->cost - 1e-12 ||
        (std::fabs(reached.cost - global_best->cost) <= 1e-12 * (1.0 + std::fabs(reached.cost)) &&
         reached.encoding() < global_best->encoding())) {
      global_best = &reached;
    }
  }
  result.best = *global_best;
  return result;
}

Network brute_force_oracle(const TransportProblem& problem, const std::vector<VecN>& grid) {
  problem.validate();
  const int T = problem.terminal_count();
  if (T > 4) throw SemanticError("brute_force_oracle: at most 4 terminals");
  if (grid.size() > 100) throw SemanticError("brute_force_oracle: at most 100 grid points");
  for (const auto& g : grid) {
    if (int(g.size()) != problem.dim) throw SemanticError("brute_force_oracle: grid dimension mismatch");
  }

  std::vector<VecN> terminals = problem.terminal_points();
  Network best;
  bool have_best = false;

  for (const Topology& topo : enumerate_topologies_pruefer(T, std::min(2, T - 2))) {
    const int s = topo.steiner_count;
    std::vector<int> assign(std::size_t(s), 0);
    const int g = int(grid.size());
    for (;;) {
      std::vector<VecN> pos = terminals;
      for (int i = 0; i < s; ++i) pos.push_back(grid[std::size_t(assign[std::size_t(i)])]);
      Network net = build_network(topo, pos, problem);
      if (!have_best || net.cost < best.cost - 1e-12 ||
          (std::fabs(net.cost - best.cost) <= 1e-12 * (1.0 + std::fabs(net.cost)) &&
           net.encoding() < best.encoding())) {
        best = std::move(net);
        have_best = true;
      }
      if (s == 0) break;
      int i = s - 1;
      while (i >= 0) {
        if (++assign[std::size_t(i)] < g) break;
        assign[std::size_t(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  if (!have_best) throw SemanticError("brute_force_oracle: no feasible topology");
  return best;
}

VerificationReport verify_network(const Network& net, const TransportProblem& problem) {
  VerificationReport rep;

  ZeroCurrent expected;
  expected.dim = problem.dim;
  for (const auto& a : problem.targets) expected.atoms.push_back({a.point, a.mass});
  for (const auto& a : problem.sources) expected.atoms.push_back({a.point, -a.mass});
  ZeroCurrent got = boundary(net.current);
  ZeroCurrent diff = got;
  for (const auto& a : expected.atoms) diff.atoms.push_back({a.point, -a.weight});
  diff = canonicalize(diff);
  rep.boundary_max_diff = 0.0;
  for (const auto& a : diff.atoms) rep.boundary_max_diff = std::max(rep.boundary_max_diff, std::fabs(a.weight));
  rep.boundary_ok = diff.atoms.empty();

  rep.acyclic = !find_cycle(net.current).has_value();

  double mplus = problem.total_target_mass();
  double maxmult = max_multiplicity(net.current);
  rep.linf_slack = mplus - maxmult;
  rep.linf_ok = maxmult <= mplus + 1e-9;

  rep.mass_bound_constant = mass_bound_constant(problem.sigma, problem.h, mplus);
  double plain = mass(net.current);
  double hcost = h_mass(net.current, problem.h, problem.sigma);
  rep.mass_bound_slack = rep.mass_bound_constant * hcost - plain;
  rep.mass_bound_ok = plain <= rep.mass_bound_constant * hcost + 1e-9;

  rep.cost_diff = std::fabs(hcost - net.cost);
  rep.cost_ok = rep.cost_diff <= 1e-9 * (1.0 + std::fabs(net.cost));
  return rep;
}

double mass_bound_constant(const Anisotropy& sigma, const BranchingFunction& h, double positive_mass,
                           int grid_points) {
  double min_sigma = sigma.min_direction_cost();
  double worst = 0.0;
  for (int i = 1; i <= grid_points; ++i) {
    double y = positive_mass * double(i) / double(grid_points);
    double hy = h(y);
    if (hy > 0.0) worst = std::max(worst, y / hy);
  }
  return worst / min_sigma;
}

}  // namespace abt
