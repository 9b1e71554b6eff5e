#include "abt/hypermetric.hpp"

#include <atomic>
#include <cstdlib>
#include <limits>
#include <thread>

namespace abt {

namespace {

struct SearchShared {
  int n = 0;
  int max_points = 7;
  int bound = 2;
  double tol = 1e-9;
  std::vector<double> dist;  // n*n pairwise distances
  std::vector<int> values;   // -B..-1, 1..B in enumeration order

  double d(int i, int j) const { return dist[std::size_t(i) * n + j]; }
};

struct Hit {
  bool found = false;
  std::vector<int> point_idx;
  std::vector<int> coeffs;
  double value = 0.0;
};

// Depth-first enumeration for a fixed first point. c[q] accumulates
// sum_i x_i d(p_i, q) over the current stack, so extending by (p, v) updates
// the quadratic form in O(1) per candidate.
class TaskRunner {
 public:
  TaskRunner(const SearchShared& sh, std::atomic<int>& best_task, int task_id)
      : sh_(sh), best_task_(best_task), task_(task_id), c_(std::size_t(sh.n), 0.0) {
    stack_p_.reserve(sh.max_points);
    stack_v_.reserve(sh.max_points);
  }

  Hit run() {
    const int p1 = task_;
    for (int v1 : sh_.values) {
      // A single point never violates (the form is empty), so descend only.
      if (sh_.max_points < 2) continue;
      push(p1, v1);
      dfs(p1 + 1, sh_.max_points - 1, v1, 0.0);
      pop(p1, v1);
      if (hit_.found || aborted_) break;
    }
    return hit_;
  }

 private:
  void push(int p, int v) {
    stack_p_.push_back(p);
    stack_v_.push_back(v);
    const double* row = &sh_.dist[std::size_t(p) * sh_.n];
    for (int q = p + 1; q < sh_.n; ++q) c_[q] += v * row[q];
  }

  void pop(int p, int v) {
    stack_p_.pop_back();
    stack_v_.pop_back();
    const double* row = &sh_.dist[std::size_t(p) * sh_.n];
    for (int q = p + 1; q < sh_.n; ++q) c_[q] -= v * row[q];
  }

  void record(int p, int v, double value) {
    hit_.found = true;
    hit_.point_idx = stack_p_;
    hit_.point_idx.push_back(p);
    hit_.coeffs = stack_v_;
    hit_.coeffs.push_back(v);
    hit_.value = value;
  }

  void record_two(int p, int v, int p2, int v2, double value) {
    record(p, v, value);
    hit_.point_idx.push_back(p2);
    hit_.coeffs.push_back(v2);
  }

  bool should_abort() {
    if ((++poll_ & 0xffff) == 0 && best_task_.load(std::memory_order_relaxed) < task_) aborted_ = true;
    return aborted_;
  }

  void dfs(int start, int slots, int sum, double q) {
    if (should_abort() || hit_.found) return;
    const int b = sh_.bound;
    if (slots == 1) {
      const int v = 1 - sum;
      if (v == 0 || v > b || v < -b) return;
      const double dv = double(v);
      for (int p = start; p < sh_.n; ++p) {
        double q2 = q + dv * c_[p];
        if (q2 > sh_.tol) {
          record(p, v, q2);
          return;
        }
      }
      return;
    }
    for (int p = start; p < sh_.n; ++p) {
      const double dotp = c_[p];
      const double* row = &sh_.dist[std::size_t(p) * sh_.n];
      for (int v : sh_.values) {
        const int s2 = sum + v;
        const double q2 = q + v * dotp;
        if (s2 == 1 && q2 > sh_.tol) {
          record(p, v, q2);
          return;
        }
        const int rem = slots - 1;
        if (rem == 0) continue;
        const int need = 1 - s2;
        const int abs_need = need < 0 ? -need : need;
        if (abs_need > b * rem) continue;  // sum unreachable
        if (rem == 1) {
          // Final slot: the coefficient is forced, so scan candidates without
          // touching the accumulator array.
          if (need == 0) continue;  // a single extra value is nonzero
          const double dv = double(need);
          for (int p2 = p + 1; p2 < sh_.n; ++p2) {
            const double q3 = q2 + dv * (c_[p2] + v * row[p2]);
            if (q3 > sh_.tol) {
              record_two(p, v, p2, need, q3);
              return;
            }
          }
          continue;
        }
        push(p, v);
        dfs(p + 1, rem, s2, q2);
        pop(p, v);
        if (hit_.found || aborted_) return;
      }
    }
  }

  const SearchShared& sh_;
  std::atomic<int>& best_task_;
  int task_;
  std::vector<double> c_;
  std::vector<int> stack_p_, stack_v_;
  Hit hit_;
  bool aborted_ = false;
  unsigned poll_ = 0;
};

}  // namespace

std::optional<HypermetricCertificate> hypermetric_search(const Anisotropy& norm,
                                                         const std::vector<VecN>& grid,
                                                         HypermetricBudget budget) {
  const int n = int(grid.size());
  if (n < 2 || budget.max_points < 2) return std::nullopt;

  SearchShared sh;
  sh.n = n;
  sh.max_points = budget.max_points;
  sh.bound = budget.coeff_bound;
  sh.tol = budget.violation_tol;
  sh.dist.assign(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = norm.norm(sub(grid[i], grid[j]));
      sh.dist[std::size_t(i) * n + j] = d;
      sh.dist[std::size_t(j) * n + i] = d;
    }
  }
  for (int v = -budget.coeff_bound; v <= budget.coeff_bound; ++v) {
    if (v != 0) sh.values.push_back(v);
  }

  int threads = budget.threads > 0 ? budget.threads : int(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));

  std::vector<Hit> hits(static_cast<std::size_t>(n));
  std::atomic<int> next_task{0};
  std::atomic<int> best_task{std::numeric_limits<int>::max()};

  auto worker = [&]() {
    for (;;) {
      int task = next_task.fetch_add(1);
      if (task >= n) return;
      if (best_task.load(std::memory_order_relaxed) < task) continue;
      TaskRunner runner(sh, best_task, task);
      Hit h = runner.run();
      if (h.found) {
        hits[std::size_t(task)] = std::move(h);
        int cur = best_task.load();
        while (task < cur && !best_task.compare_exchange_weak(cur, task)) {
        }
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (int t = 0; t < n; ++t) {
    if (!hits[std::size_t(t)].found) continue;
    const Hit& h = hits[std::size_t(t)];
    HypermetricCertificate cert;
    for (int idx : h.point_idx) cert.points.push_back(grid[std::size_t(idx)]);
    cert.coefficients = h.coeffs;
    cert.value = h.value;
    return cert;
  }
  return std::nullopt;
}

std::vector<VecN> lattice_grid(int dim, int radius) {
  std::vector<VecN> pts;
  VecN cur(std::size_t(dim), double(-radius));
  for (;;) {
    pts.push_back(cur);
    int i = dim - 1;
    while (i >= 0) {
      cur[std::size_t(i)] += 1.0;
      if (cur[std::size_t(i)] <= double(radius)) break;
      cur[std::size_t(i)] = double(-radius);
      --i;
    }
    if (i < 0) break;
  }
  return pts;
}

}  // namespace abt
