// Acceptance suite: twelve end-to-end checks with fixed tolerances, one
// PASS/FAIL line each. Exits nonzero when any check fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "abt/body_approximation.hpp"
#include "abt/currents.hpp"
#include "abt/direction_measure.hpp"
#include "abt/flat_norm.hpp"
#include "abt/hypermetric.hpp"
#include "abt/json_io.hpp"
#include "abt/polygon_decomposition.hpp"
#include "abt/solver.hpp"
#include "../tests/test_util.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Outcome> outcomes;
std::vector<std::pair<abt::Network, abt::TransportProblem>> solver_corpus;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void record(int id, const std::string& name, bool pass, const std::string& detail) {
  outcomes.push_back({id, name, pass, detail});
  std::printf("%s  %2d  %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------- 1 and 2

void criterion_polygon_reconstruction() {
  auto t0 = Clock::now();
  abt::Rng rng(0xac5e11ULL);
  double worst = 0.0;
  bool weight_ok = true;
  double worst_weight_slack = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    auto poly = testutil::random_symmetric_polygon(rng, 50);
    auto dec = abt::polygon_decompose(poly);
    const auto& vs = poly.vertices();
    const int m = int(vs.size());
    for (int i = 0; i < 1000; ++i) {
      int e = int(rng.below(std::uint64_t(m)));
      double t = rng.uniform();
      abt::Vec2 u = vs[std::size_t(e)] + (vs[std::size_t((e + 1) % m)] - vs[std::size_t(e)]) * t;
      worst = std::max(worst, std::fabs(dec.reconstruct(u) - 1.0));
    }
    double bound = 8.0 / dec.inradius_bound + 1e-9;
    double total = dec.total_vertex_mass();
    if (total > bound) weight_ok = false;
    worst_weight_slack = std::min(worst_weight_slack, bound - total);
  }
  double dt = seconds_since(t0);
  record(1, "polygon-norm reconstruction", worst <= 1e-9 && dt <= 2.0,
         "max |recon-1| = " + fmt(worst) + ", " + fmt(dt) + " s");
  record(2, "decomposition weight bound 8/r", weight_ok,
         "min slack = " + fmt(worst_weight_slack));
}

// --------------------------------------------------------------------- 3

void criterion_body_approximation() {
  auto t0 = Clock::now();
  auto disc = abt::Anisotropy::constant(1.0, 2);
  abt::BodyApproximator approx(disc);
  abt::Rng rng(0xd15cULL);

  bool contained = true;
  bool deltas_monotone = true;
  double prev_delta = 1e300;
  double delta12 = 0.0;
  for (int depth = 2; depth <= 12; ++depth) {
    const auto& poly = approx.polygon_at(depth);
    for (int i = 0; i < 1000; ++i) {
      abt::Vec2 u = abt::unit_dir(rng.uniform(0.0, 2.0 * M_PI));
      if (!(poly.gauge(u) <= 1.0)) contained = false;
    }
    auto mu = abt::representing_measure(disc, depth);
    if (mu.reconstruction_error > prev_delta) deltas_monotone = false;
    prev_delta = mu.reconstruction_error;
    if (depth == 12) delta12 = mu.reconstruction_error;
  }

  // Analytic mass of the limiting measure: the uniform density on the circle
  // reconstructing the euclidean norm integrates |cos| to 4, so the total
  // mass is 2 pi / 4. Confirmed by quadrature.
  const int q = 1 << 16;
  double integral = 0.0;
  for (int i = 0; i < q; ++i) integral += std::fabs(std::cos(2.0 * M_PI * i / q)) * (2.0 * M_PI / q);
  double expected_mass = 2.0 * M_PI / integral;
  double mass12 = abt::representing_measure(disc, 12).total_mass();
  bool mass_ok = std::fabs(mass12 - expected_mass) <= 0.01 * expected_mass;

  double dt = seconds_since(t0);
  bool pass = contained && deltas_monotone && delta12 <= 1e-3 && mass_ok && dt <= 5.0;
  record(3, "disc approximation and measure",
         pass,
         "delta12 = " + fmt(delta12) + ", mass = " + fmt(mass12) + " vs pi/2, " + fmt(dt) + " s");
}

// --------------------------------------------------------------------- 4

void criterion_hypermetric() {
  auto t0 = Clock::now();
  abt::HypermetricBudget budget;  // a <= 7, |x| <= 2, tol 1e-9
  auto grid3 = abt::lattice_grid(3, 1);

  auto linf = abt::Anisotropy::functional(3, [](std::span<const double> u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::fabs(x));
    return m;
  });
  auto l1 = abt::Anisotropy::functional(3, [](std::span<const double> u) {
    return std::fabs(u[0]) + std::fabs(u[1]) + std::fabs(u[2]);
  });
  auto l2 = abt::Anisotropy::constant(1.0, 3);

  auto cert = abt::hypermetric_search(linf, grid3, budget);
  bool linf_found = cert.has_value() && cert->value > 1e-9;
  bool l1_none = !abt::hypermetric_search(l1, grid3, budget).has_value();
  bool l2_none = !abt::hypermetric_search(l2, grid3, budget).has_value();

  bool planar_none = true;
  abt::Rng rng(0x9adaULL);
  auto grid2 = abt::lattice_grid(2, 1);
  for (int i = 0; i < 5; ++i) {
    auto poly = testutil::random_symmetric_polygon(rng, 10);
    if (abt::hypermetric_search(abt::Anisotropy::polygonal(poly), grid2, budget).has_value())
      planar_none = false;
  }
  double dt = seconds_since(t0);
  bool pass = linf_found && l1_none && l2_none && planar_none && dt <= 60.0;
  std::string detail = "linf violation ";
  detail += linf_found ? ("value " + fmt(cert->value)) : "MISSING";
  detail += l1_none ? ", l1 none" : ", l1 FOUND";
  detail += l2_none ? ", l2 none" : ", l2 FOUND";
  detail += planar_none ? ", planar none" : ", planar FOUND";
  detail += ", " + fmt(dt) + " s";
  record(4, "hypermetric search", pass, detail);
}

// --------------------------------------------------------------------- 5

void criterion_slicing_identity() {
  auto t0 = Clock::now();
  abt::Rng rng(0x51edULL);
  auto h = abt::BranchingFunction::power(0.5);
  double worst_rel = 0.0;
  for (int g = 0; g < 5; ++g) {
    auto gauge = abt::Anisotropy::polygonal(testutil::random_symmetric_polygon(rng, 12));
    auto mu = abt::representing_measure(gauge);
    for (int i = 0; i < 20; ++i) {
      auto p = testutil::random_current(rng, 20, 5);
      double direct = abt::h_mass(p, h, gauge);
      double sliced = abt::h_mass_via_slicing(p, h, mu);
      worst_rel = std::max(worst_rel, std::fabs(direct - sliced) / std::max(1.0, std::fabs(direct)));
    }
  }
  double dt = seconds_since(t0);
  record(5, "slicing identity", worst_rel <= 1e-8 && dt <= 5.0,
         "max relative diff = " + fmt(worst_rel) + ", " + fmt(dt) + " s");
}

// --------------------------------------------------------------------- 6

void criterion_cycle_removal() {
  abt::Rng rng(0xc1cebULL);
  auto h = abt::BranchingFunction::power(0.5);
  auto euclid = abt::Anisotropy::constant(1.0, 2);
  bool boundary_exact = true, mass_monotone = true, all_acyclic = true;
  double best_decrease = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto p = testutil::random_cyclic_current(rng);
    auto before_boundary = abt::boundary(p);
    double before_cost = abt::h_mass(p, h, euclid);
    auto cleaned = abt::remove_cycles(p, h, euclid);
    auto after_boundary = abt::boundary(cleaned);
    double after_cost = abt::h_mass(cleaned, h, euclid);

    if (before_boundary.atoms.size() != after_boundary.atoms.size()) {
      boundary_exact = false;
    } else {
      for (std::size_t i = 0; i < before_boundary.atoms.size(); ++i) {
        if (before_boundary.atoms[i].point != after_boundary.atoms[i].point ||
            before_boundary.atoms[i].weight != after_boundary.atoms[i].weight)
          boundary_exact = false;
      }
    }
    if (after_cost > before_cost + 1e-12 * (1.0 + before_cost)) mass_monotone = false;
    if (abt::find_cycle(cleaned)) all_acyclic = false;
    best_decrease = std::max(best_decrease, before_cost - after_cost);
  }
  bool pass = boundary_exact && mass_monotone && all_acyclic && best_decrease >= 1e-3;
  record(6, "cycle removal", pass,
         std::string(boundary_exact ? "boundary exact" : "boundary DRIFTED") +
             ", max decrease = " + fmt(best_decrease));
}

// ----------------------------------------------------------------- 7 and 8

void criterion_solver_vs_oracle() {
  auto t0 = Clock::now();
  abt::Rng rng(0x50feULL);
  std::vector<abt::VecN> grid;
  for (int x = 0; x <= 4; ++x) {
    for (int y = 0; y <= 4; ++y) grid.push_back({double(x), double(y)});
  }
  auto diamond = abt::Anisotropy::polygonal(
      abt::SymmetricPolygon::from_vertices({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));

  bool oracle_ok = true, local_ok = true;
  double worst_gap = -1e300;
  for (int inst = 0; inst < 20; ++inst) {
    // 2 to 4 terminals with integer masses on the 5x5 grid, all distinct.
    int ns = 1 + int(rng.below(3));                       // 1..3 sources
    int nt = 1 + int(rng.below(std::uint64_t(4 - ns)));   // 1..4-ns targets
    std::vector<abt::VecN> pts;
    while (int(pts.size()) < ns + nt) {
      abt::VecN p{double(rng.below(5)), double(rng.below(5))};
      bool dup = false;
      for (const auto& q : pts) {
        if (q == p) dup = true;
      }
      if (!dup) pts.push_back(p);
    }
    abt::TransportProblem problem;
    problem.dim = 2;
    problem.h = abt::BranchingFunction::power(0.5);
    problem.sigma = (inst % 2 == 0) ? abt::Anisotropy::constant(1.0, 2) : diamond;
    // total mass ns + nt (+ jitter) splits into integers >= 1 on both sides
    int total = ns + nt + int(rng.below(2));
    for (int i = 0; i < ns; ++i)
      problem.sources.push_back({pts[std::size_t(i)], double(i + 1 < ns ? 1 : total - (ns - 1))});
    for (int j = 0; j < nt; ++j)
      problem.targets.push_back({pts[std::size_t(ns + j)], double(j + 1 < nt ? 1 : total - (nt - 1))});

    auto exhaustive = abt::solve(problem);
    auto oracle = abt::brute_force_oracle(problem, grid);
    double gap = exhaustive.best.cost - oracle.cost;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) oracle_ok = false;

    abt::SolveBudget local;
    local.mode = abt::SolveBudget::Mode::LocalSearch;
    local.seed = 17 + std::uint64_t(inst);
    auto ls = abt::solve(problem, local);
    if (ls.best.cost > 1.05 * exhaustive.best.cost + 1e-9) local_ok = false;

    solver_corpus.push_back({exhaustive.best, problem});
    solver_corpus.push_back({ls.best, problem});
  }
  double dt = seconds_since(t0);
  record(8, "solver vs brute-force oracle", oracle_ok && local_ok && dt <= 120.0,
         "worst exhaustive-oracle gap = " + fmt(worst_gap) + ", " + fmt(dt) + " s");
}

void criterion_bounds_over_corpus() {
  bool ok = true;
  int checked = 0;
  for (const auto& [net, problem] : solver_corpus) {
    auto rep = abt::verify_network(net, problem);
    if (!rep.linf_ok || !rep.mass_bound_ok) ok = false;
    ++checked;
  }
  record(7, "multiplicity and mass bounds", ok && checked > 0,
         std::to_string(checked) + " networks checked, zero violations expected");
}

// --------------------------------------------------------------------- 9

double oracle_crossover() {
  // Scalar oracle: the optimal interior branch height for the symmetric Y is
  // located by golden section; the crossover is where it detaches from the
  // target.
  auto interior = [](double h) {
    auto cost = [h](double s) { return 2.0 * std::hypot(1.0, s) + std::sqrt(2.0) * (h - s); };
    double s = testutil::golden_section(cost, 0.0, h, 1e-11);
    return s < h - 1e-6;
  };
  double lo = 0.5, hi = 1.5;
  for (int i = 0; i < 40; ++i) {
    double mid = 0.5 * (lo + hi);
    if (interior(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double solver_crossover(std::uint64_t seed) {
  auto branched = [&](double h) {
    abt::TransportProblem problem;
    problem.dim = 2;
    problem.sources = {{{-1, 0}, 1.0}, {{1, 0}, 1.0}};
    problem.targets = {{{0, h}, 2.0}};
    abt::SolveBudget budget;
    budget.seed = seed;
    auto result = abt::solve(problem, budget);
    for (const auto& s : result.best.steiner_positions) {
      bool interior = true;
      for (const auto& t : problem.terminal_points()) {
        if (abt::dist(s, t) <= 1e-6) interior = false;
      }
      if (interior) return true;
    }
    solver_corpus.push_back({result.best, problem});
    return false;
  };
  double lo = 0.5, hi = 1.5;
  for (int i = 0; i < 24; ++i) {
    double mid = 0.5 * (lo + hi);
    if (branched(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion_y_crossover() {
  double oracle = oracle_crossover();
  double seed1 = solver_crossover(1);
  double seed2 = solver_crossover(2);
  bool pass = std::fabs(seed1 - oracle) <= 1e-3 && std::fabs(seed1 - seed2) <= 1e-3;
  record(9, "Y-instance crossover", pass,
         "solver " + fmt(seed1) + " / " + fmt(seed2) + ", oracle " + fmt(oracle));
}

// -------------------------------------------------------------------- 10

void criterion_lsc_surrogate() {
  auto h = abt::BranchingFunction::power(0.5);
  auto euclid = abt::Anisotropy::constant(1.0, 2);
  auto diagonal = abt::PolyhedralOneCurrent::planar({{{0, 0}, {1, 1}, 1.0}});
  double limit_mass = abt::h_mass(diagonal, h, euclid);

  bool masses_constant = true, bounds_decreasing = true;
  double prev_bound = 1e300, min_mass = 1e300;
  for (int k = 1; k <= 6; ++k) {
    abt::PolyhedralOneCurrent staircase;
    staircase.dim = 2;
    for (int i = 0; i < k; ++i) {
      double x0 = double(i) / k, x1 = double(i + 1) / k;
      staircase.add_edge(abt::Vec2{x0, x0}, abt::Vec2{x1, x0}, 1.0);
      staircase.add_edge(abt::Vec2{x1, x0}, abt::Vec2{x1, x1}, 1.0);
    }
    auto mesh = abt::TriangleMesh::grid({0, 0}, 1.0 / k, k, k);
    double bound = abt::flat_distance_one_upper(staircase, diagonal, mesh);
    double mass_k = abt::h_mass(staircase, h, euclid);
    if (std::fabs(mass_k - 2.0) > 1e-12) masses_constant = false;
    if (bound >= prev_bound) bounds_decreasing = false;
    prev_bound = bound;
    min_mass = std::min(min_mass, mass_k);
  }
  bool liminf_ok = min_mass >= limit_mass - 1e-9;
  bool limit_ok = std::fabs(limit_mass - std::sqrt(2.0)) <= 1e-12;
  bool pass = masses_constant && bounds_decreasing && liminf_ok && limit_ok;
  record(10, "lower-semicontinuity surrogate", pass,
         "h-mass staircase 2 vs limit " + fmt(limit_mass) + ", bounds decreasing");
}

// -------------------------------------------------------------------- 11

void criterion_flat_zero() {
  abt::Rng rng(0xf1a7ULL);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    abt::Vec2 x{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    abt::Vec2 y{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    double got = abt::flat_distance_zero(abt::ZeroCurrent::planar({{x, 1.0}}),
                                         abt::ZeroCurrent::planar({{y, 1.0}}));
    double expected = std::min(abt::norm(x - y), 2.0);
    worst = std::max(worst, std::fabs(got - expected));
  }
  record(11, "flat distance of unit atoms", worst <= 1e-9, "max |lp - closed form| = " + fmt(worst));
}

// -------------------------------------------------------------------- 12

int run_cli(const std::string& args) {
  std::string cmd = std::string(ABT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_determinism() {
  fs::path work = fs::current_path() / "acceptance_work";
  fs::remove_all(work);
  fs::create_directories(work);

  std::ofstream(work / "y.json") << R"({
    "sources": [{"p": [-1, 0], "m": 1}, {"p": [1, 0], "m": 1}],
    "targets": [{"p": [0, 1.5], "m": 2}],
    "H": {"kind": "power", "alpha": 0.5},
    "sigma": {"kind": "constant", "c": 1}
  })";
  std::ofstream(work / "diamond.json") << R"({
    "sigma": {"kind": "polygonal", "vertices": [[1,0],[0,1],[-1,0],[0,-1]]}
  })";
  std::ofstream(work / "linf.json") << R"({"sigma": {"kind": "lp", "p": "inf", "dim": 3}})";

  bool pass = true;
  std::string detail;
  for (int run = 1; run <= 2; ++run) {
    std::string dir = (work / ("run" + std::to_string(run))).string();
    if (run_cli("solve --input " + (work / "y.json").string() + " --out " + dir + "/solve --seed 7") != 0)
      pass = false;
    if (run_cli("solve --input " + (work / "y.json").string() + " --out " + dir +
                "/local --seed 7 --mode local") != 0)
      pass = false;
    if (run_cli("ig-decompose --input " + (work / "diamond.json").string() + " --out " + dir + "/ig") != 0)
      pass = false;
    if (run_cli("hypermetric --input " + (work / "linf.json").string() + " --out " + dir +
                "/hyper --max-points 5") != 0)
      pass = false;
  }
  const char* files[] = {"solve/metrics.csv", "solve/network.json", "solve/network.svg",
                         "local/metrics.csv", "local/network.json", "ig/decomposition.json",
                         "hyper/certificate.json"};
  for (const char* f : files) {
    std::string a = slurp(work / "run1" / f);
    std::string b = slurp(work / "run2" / f);
    if (a.empty() || a != b) {
      pass = false;
      detail += std::string(f) + " differs; ";
    }
  }
  if (detail.empty()) detail = "all CLI outputs byte-identical across reruns";
  record(12, "determinism of CLI outputs", pass, detail);
}

}  // namespace

int main() {
  criterion_polygon_reconstruction();
  criterion_body_approximation();
  criterion_hypermetric();
  criterion_slicing_identity();
  criterion_cycle_removal();
  criterion_solver_vs_oracle();
  criterion_y_crossover();
  criterion_bounds_over_corpus();
  criterion_lsc_surrogate();
  criterion_flat_zero();
  criterion_determinism();

  int failures = 0;
  for (const auto& o : outcomes) {
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", int(outcomes.size()) - failures, outcomes.size());
  return failures == 0 ? 0 : 1;
}
