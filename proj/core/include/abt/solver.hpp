#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "abt/anisotropy.hpp"
#include "abt/branching.hpp"
#include "abt/currents.hpp"
#include "abt/geometry.hpp"

namespace abt {

/// Atomic transport instance: equal-mass source and target atoms plus the
/// cost data (branching function and direction cost).
struct TransportProblem {
  struct Atom {
    VecN point;
    double mass;
  };
  int dim = 2;
  std::vector<Atom> sources;
  std::vector<Atom> targets;
  BranchingFunction h = BranchingFunction::power(0.5);
  Anisotropy sigma = Anisotropy::constant(1.0, 2);

  double total_source_mass() const;
  double total_target_mass() const;
  int terminal_count() const { return int(sources.size() + targets.size()); }
  /// Terminal positions in canonical order: sources first, then targets.
  std::vector<VecN> terminal_points() const;
  /// Boundary imbalance per terminal: -mass for sources, +mass for targets.
  std::vector<double> terminal_imbalance() const;

  /// Balance, positivity, dimension checks; throws SemanticError.
  void validate() const;
};

/// Combinatorial type of a transport network: a tree over terminal nodes
/// 0..T-1 and Steiner nodes T..T+S-1 with every Steiner degree >= 3. Edge
/// multiplicities are forced by flow conservation.
struct Topology {
  int terminal_count = 0;
  int steiner_count = 0;
  std::vector<std::pair<int, int>> edges;

  int node_count() const { return terminal_count + steiner_count; }
  /// Identifier invariant under Steiner relabeling; used for deduplication
  /// and deterministic tie-breaking.
  std::string canonical_key() const;
};

/// All tree topologies on `terminals` labeled terminals with at most
/// `max_steiner` Steiner nodes (capped at terminals - 2), deduplicated up to
/// Steiner relabeling. Built by splitting edges of full topologies and
/// contracting edge subsets.
std::vector<Topology> enumerate_topologies(int terminals, int max_steiner);

/// Independent enumeration route used by the brute-force oracle: decodes all
/// Pruefer sequences and filters degree constraints.
std::vector<Topology> enumerate_topologies_pruefer(int terminals, int max_steiner);

/// Edge multiplicities forced by the terminal imbalances (one value per
/// topology edge, oriented tail -> head as stored). Throws when the topology
/// cannot carry the imbalance.
std::vector<double> topology_multiplicities(const Topology& topo,
                                            const std::vector<double>& imbalance);

struct PositionOptions {
  int max_iters = 2000;
  double tol = 1e-8;
  double collapse_tol = 1e-7;
};

struct PositionResult {
  std::vector<VecN> positions;  // node_count() entries, terminals fixed
  double cost = 0.0;
  std::vector<int> collapsed;  // Steiner nodes coinciding with a neighbor
};

/// Minimizes sum_e H(|theta_e|) G_sigma(x_u - x_v) over the Steiner
/// positions (a convex objective; terminals never move). Polygonal gauges
/// solve an exact linear program; the Euclidean case runs smoothed
/// iteratively-reweighted least squares with annealing; functional gauges run
/// subgradient descent with averaging plus a compass polish.
PositionResult optimize_positions(const Topology& topo, const TransportProblem& problem,
                                  PositionOptions opts = {});

struct NetworkDiagnostics {
  double mass_bound_constant = 0.0;
  bool linf_bound_ok = false;
  bool acyclic = false;
  double max_multiplicity = 0.0;
};

/// A solved (or candidate) transport network.
struct Network {
  PolyhedralOneCurrent current;
  double cost = 0.0;
  Topology topology;
  std::vector<VecN> steiner_positions;
  NetworkDiagnostics diagnostics;

  /// Deterministic serialization of the canonical current, used to break
  /// cost ties.
  std::string encoding() const;
};

struct SolveBudget {
  enum class Mode { Exhaustive, LocalSearch };
  Mode mode = Mode::Exhaustive;
  int max_steiner = -1;  // -1: terminals - 2
  int seeds = 3;         // local-search restarts
  int iters = 400;       // local-search improving moves per restart
  std::uint64_t seed = 1;
};

struct SolveResult {
  Network best;
  /// Cost ties found in exhaustive mode (symmetric instances); no canonical
  /// minimizer is claimed.
  std::vector<Network> ties;
  bool budget_exhausted = false;
  /// Set when H(y)/y stays bounded near 0 (classical transport regime); the
  /// solver proceeds anyway.
  bool h_blowup_warning = false;
};

/// Feasible network from greedy matching (north-west-corner rule on atoms
/// sorted lexicographically).
Network initial_feasible(const TransportProblem& problem);

/// Best network found within the budget. Exhaustive mode enumerates all
/// topologies (terminals <= 6) and optimizes each; local search applies
/// first-improvement moves with seeded restarts. The output is cycle-free and
/// canonical, with diagnostics populated.
SolveResult solve(const TransportProblem& problem, const SolveBudget& budget = {});

/// Exact optimum over tree topologies with at most two Steiner nodes whose
/// positions are restricted to `grid` (at most 100 points, at most 4
/// terminals). Exhaustive evaluation, deterministic tie-break.
Network brute_force_oracle(const TransportProblem& problem, const std::vector<VecN>& grid);

struct VerificationReport {
  bool boundary_ok = false;
  bool acyclic = false;
  bool linf_ok = false;
  bool mass_bound_ok = false;
  bool cost_ok = false;
  double boundary_max_diff = 0.0;
  double linf_slack = 0.0;
  double mass_bound_slack = 0.0;
  double cost_diff = 0.0;
  double mass_bound_constant = 0.0;

  bool all_ok() const { return boundary_ok && acyclic && linf_ok && mass_bound_ok && cost_ok; }
};

/// Checks boundary equality, acyclicity, the multiplicity bound |theta| <=
/// M(mu+), the mass bound M <= C M_{H,sigma}, and cost recomputation.
VerificationReport verify_network(const Network& net, const TransportProblem& problem);

/// C = (min_u sigma(u))^-1 * max_{0 < y <= positive_mass} y / H(y), the
/// latter evaluated on a grid.
double mass_bound_constant(const Anisotropy& sigma, const BranchingFunction& h,
                           double positive_mass, int grid_points = 1000);

}  // namespace abt
