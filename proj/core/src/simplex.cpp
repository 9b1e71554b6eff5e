#include "abt/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace abt {

namespace {

constexpr double kEps = 1e-9;

// Tableau rows: m constraint rows plus one objective row; columns: all
// variables plus the right-hand side.
struct Tableau {
  int m, n;
  std::vector<std::vector<double>> t;  // (m+1) x (n+1)
  std::vector<int> basis;              // m entries

  double& at(int r, int c) { return t[std::size_t(r)][std::size_t(c)]; }

  void pivot(int pr, int pc) {
    double piv = at(pr, pc);
    for (int c = 0; c <= n; ++c) at(pr, c) /= piv;
    for (int r = 0; r <= m; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= n; ++c) at(r, c) -= f * at(pr, c);
    }
    basis[std::size_t(pr)] = pc;
  }

  // Returns false when optimal.
  bool step(bool bland) {
    int pc = -1;
    if (bland) {
      for (int c = 0; c < n; ++c) {
        if (at(m, c) < -kEps) {
          pc = c;
          break;
        }
      }
    } else {
      double best = -kEps;
      for (int c = 0; c < n; ++c) {
        if (at(m, c) < best) {
          best = at(m, c);
          pc = c;
        }
      }
    }
    if (pc < 0) return false;

    int pr = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      double a = at(r, pc);
      if (a > kEps) {
        double ratio = at(r, n) / a;
        if (ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && (pr < 0 || basis[std::size_t(r)] < basis[std::size_t(pr)]))) {
          best_ratio = ratio;
          pr = r;
        }
      }
    }
    if (pr < 0) throw std::runtime_error("simplex: unbounded program");
    pivot(pr, pc);
    return true;
  }

  void run() {
    int stalls = 0;
    double last = std::numeric_limits<double>::infinity();
    for (long iter = 0;; ++iter) {
      if (iter > 200000) throw std::runtime_error("simplex: iteration limit");
      bool bland = stalls > 50;
      if (!step(bland)) return;
      double obj = at(m, n);
      if (obj > last - 1e-12)
        ++stalls;
      else
        stalls = 0;
      last = obj;
    }
  }
};

}  // namespace

LpResult solve_equality_lp(std::vector<std::vector<double>> A, std::vector<double> b,
                           std::vector<double> c) {
  const int m = int(A.size());
  const int n = int(c.size());
  for (auto& row : A) {
    if (int(row.size()) != n) throw std::invalid_argument("simplex: ragged constraint matrix");
  }
  // Normalize to b >= 0.
  for (int r = 0; r < m; ++r) {
    if (b[std::size_t(r)] < 0.0) {
      b[std::size_t(r)] = -b[std::size_t(r)];
      for (double& v : A[std::size_t(r)]) v = -v;
    }
  }

  // Phase 1: artificial basis.
  Tableau tab;
  tab.m = m;
  tab.n = n + m;
  tab.t.assign(std::size_t(m + 1), std::vector<double>(std::size_t(tab.n + 1), 0.0));
  tab.basis.resize(std::size_t(m));
  for (int r = 0; r < m; ++r) {
    for (int cidx = 0; cidx < n; ++cidx) tab.at(r, cidx) = A[std::size_t(r)][std::size_t(cidx)];
    tab.at(r, n + r) = 1.0;
    tab.at(r, tab.n) = b[std::size_t(r)];
    tab.basis[std::size_t(r)] = n + r;
  }
  for (int cidx = 0; cidx < m; ++cidx) tab.at(m, n + cidx) = 1.0;
  for (int r = 0; r < m; ++r) {
    for (int cidx = 0; cidx <= tab.n; ++cidx) tab.at(m, cidx) -= tab.at(r, cidx);
  }
  tab.run();
  if (tab.at(m, tab.n) < -1e-7) throw std::runtime_error("simplex: infeasible program");

  // Drive leftover artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[std::size_t(r)] >= n) {
      int pc = -1;
      for (int cidx = 0; cidx < n; ++cidx) {
        if (std::fabs(tab.at(r, cidx)) > kEps) {
          pc = cidx;
          break;
        }
      }
      if (pc >= 0) tab.pivot(r, pc);
    }
  }

  // Phase 2: rebuild a clean tableau over the original columns. Rows whose
  // basic variable is still artificial are redundant (value 0 and no original
  // pivot available) and are dropped.
  Tableau t2;
  t2.n = n;
  std::vector<int> keep;
  for (int r = 0; r < m; ++r) {
    if (tab.basis[std::size_t(r)] < n) keep.push_back(r);
  }
  t2.m = int(keep.size());
  t2.t.assign(std::size_t(t2.m + 1), std::vector<double>(std::size_t(n + 1), 0.0));
  t2.basis.resize(std::size_t(t2.m));
  for (int r2 = 0; r2 < t2.m; ++r2) {
    int r = keep[std::size_t(r2)];
    for (int cidx = 0; cidx < n; ++cidx) t2.at(r2, cidx) = tab.at(r, cidx);
    t2.at(r2, n) = tab.at(r, tab.n);
    t2.basis[std::size_t(r2)] = tab.basis[std::size_t(r)];
  }
  for (int cidx = 0; cidx < n; ++cidx) t2.at(t2.m, cidx) = c[std::size_t(cidx)];
  for (int r2 = 0; r2 < t2.m; ++r2) {
    double f = c[std::size_t(t2.basis[std::size_t(r2)])];
    if (f == 0.0) continue;
    for (int cidx = 0; cidx <= n; ++cidx) t2.at(t2.m, cidx) -= f * t2.at(r2, cidx);
  }
  t2.run();

  LpResult res;
  res.x.assign(std::size_t(n), 0.0);
  for (int r2 = 0; r2 < t2.m; ++r2) res.x[std::size_t(t2.basis[std::size_t(r2)])] = t2.at(r2, n);
  res.value = -t2.at(t2.m, n);
  return res;
}

}  // namespace abt
