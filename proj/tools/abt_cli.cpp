// Batch front-end: reads JSON problem/geometry files, runs the requested
// pipeline, writes JSON results, CSV metrics and SVG plots into --out.
//
// Exit codes: 0 ok, 2 parse error, 3 semantic error, 4 budget exceeded with
// partial output.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "abt/body_approximation.hpp"
#include "abt/currents.hpp"
#include "abt/direction_measure.hpp"
#include "abt/errors.hpp"
#include "abt/flat_norm.hpp"
#include "abt/hypermetric.hpp"
#include "abt/json_io.hpp"
#include "abt/polygon_decomposition.hpp"
#include "abt/solver.hpp"
#include "abt/svg.hpp"
#include "abt/tolerances.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string input;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::vector<std::string> tol_overrides;

  abt::Tolerances tolerances() const {
    abt::Tolerances tol;
    for (const std::string& spec : tol_overrides) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) throw abt::SemanticError("--tol expects NAME=VALUE: " + spec);
      tol.by_name(spec.substr(0, eq)) = std::stod(spec.substr(eq + 1));
    }
    return tol;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool input_required = true) {
  auto* in = cmd->add_option("--input", opt.input, "input JSON file");
  if (input_required) in->required();
  cmd->add_option("--out", opt.out, "output directory");
  cmd->add_option("--seed", opt.seed, "seed fixing all stochastic choices");
  cmd->add_option("--tol", opt.tol_overrides, "tolerance override NAME=VALUE")->take_all();
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw abt::ParseError("cannot open input file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return abt::parse_document(buf.str());
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  out << content;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

struct SweepSpec {
  std::string var;
  double from = 0, to = 0, step = 1;
  bool active = false;

  std::vector<double> values() const {
    std::vector<double> v;
    if (!active) return v;
    for (double x = from; x <= to + 1e-12; x += step) v.push_back(x);
    return v;
  }
};

SweepSpec parse_sweep(const std::string& spec) {
  SweepSpec sweep;
  if (spec.empty()) return sweep;
  auto eq = spec.find('=');
  if (eq == std::string::npos) throw abt::SemanticError("--sweep expects var=a:b:step");
  sweep.var = spec.substr(0, eq);
  std::string range = spec.substr(eq + 1);
  auto c1 = range.find(':');
  auto c2 = range.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw abt::SemanticError("--sweep expects var=a:b:step");
  sweep.from = std::stod(range.substr(0, c1));
  sweep.to = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
  sweep.step = std::stod(range.substr(c2 + 1));
  if (!(sweep.step > 0)) throw abt::SemanticError("--sweep step must be positive");
  sweep.active = true;
  return sweep;
}

int run_solve(const CommonOptions& opt, const std::string& mode_name, int max_steiner,
              const std::string& oracle_grid, const std::string& sweep_spec) {
  abt::Tolerances tol = opt.tolerances();
  nlohmann::json doc = load_json(opt.input);
  SweepSpec sweep = parse_sweep(sweep_spec);

  abt::SolveBudget budget;
  budget.mode = (mode_name == "local") ? abt::SolveBudget::Mode::LocalSearch
                                       : abt::SolveBudget::Mode::Exhaustive;
  budget.max_steiner = max_steiner;
  budget.seed = opt.seed;

  std::vector<double> values = sweep.active ? sweep.values() : std::vector<double>{0.0};
  std::ostringstream csv;
  csv << "instance,mode,sweep_var,sweep_value,cost,oracle_cost,oracle_gap,branched,acyclic,"
         "linf_ok,mass_bound_C,ties,budget_exhausted,tol_optimizer\n";

  bool budget_flag = false;
  std::string last_network_json, last_svg;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    std::map<std::string, double> subs;
    if (sweep.active) subs[sweep.var] = values[idx];
    abt::TransportProblem problem = abt::parse_problem(doc, subs);
    abt::SolveResult result = abt::solve(problem, budget);
    budget_flag = budget_flag || result.budget_exhausted;

    double oracle_cost = std::nan("");
    double oracle_gap = std::nan("");
    if (!oracle_grid.empty()) {
      auto x = oracle_grid.find('x');
      if (x == std::string::npos) throw abt::SemanticError("--oracle-grid expects GxG");
      int gx = std::stoi(oracle_grid.substr(0, x));
      int gy = std::stoi(oracle_grid.substr(x + 1));
      double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
      for (const auto& a : problem.terminal_points()) {
        lo_x = std::min(lo_x, a[0]);
        hi_x = std::max(hi_x, a[0]);
        lo_y = std::min(lo_y, a[1]);
        hi_y = std::max(hi_y, a[1]);
      }
      std::vector<abt::VecN> grid;
      for (int i = 0; i < gx; ++i) {
        for (int j = 0; j < gy; ++j) {
          grid.push_back({lo_x + (hi_x - lo_x) * (gx == 1 ? 0.5 : double(i) / (gx - 1)),
                          lo_y + (hi_y - lo_y) * (gy == 1 ? 0.5 : double(j) / (gy - 1))});
        }
      }
      oracle_cost = abt::brute_force_oracle(problem, grid).cost;
      oracle_gap = result.best.cost - oracle_cost;
    }

    bool branched = false;
    for (const auto& s : result.best.steiner_positions) {
      bool near_terminal = false;
      for (const auto& t : problem.terminal_points()) {
        if (abt::dist(s, t) <= tol.collapse) near_terminal = true;
      }
      if (!near_terminal) branched = true;
    }

    csv << fs::path(opt.input).filename().string() << "," << mode_name << ","
        << (sweep.active ? sweep.var : "") << ","
        << (sweep.active ? abt::format_double(values[idx]) : "") << ","
        << abt::format_double(result.best.cost) << ","
        << (std::isnan(oracle_cost) ? "" : abt::format_double(oracle_cost)) << ","
        << (std::isnan(oracle_gap) ? "" : abt::format_double(oracle_gap)) << ","
        << csv_bool(branched) << "," << csv_bool(result.best.diagnostics.acyclic) << ","
        << csv_bool(result.best.diagnostics.linf_bound_ok) << ","
        << abt::format_double(result.best.diagnostics.mass_bound_constant) << ","
        << result.ties.size() << "," << csv_bool(result.budget_exhausted) << ","
        << abt::format_double(tol.optimizer) << "\n";

    last_network_json = abt::network_to_json(result.best);
    last_svg = abt::render_network_svg(result.best, problem);
  }

  write_file(opt.out, "metrics.csv", csv.str());
  write_file(opt.out, "network.json", last_network_json + "\n");
  write_file(opt.out, "network.svg", last_svg);
  return budget_flag ? 4 : 0;
}

abt::Anisotropy gauge_from(const nlohmann::json& doc) {
  if (doc.contains("sigma")) return abt::parse_gauge(doc.at("sigma"));
  if (doc.contains("vertices")) {
    nlohmann::json wrap = {{"kind", "polygonal"}, {"vertices", doc.at("vertices")}};
    return abt::parse_gauge(wrap);
  }
  return abt::parse_gauge(doc);
}

int run_ig_decompose(const CommonOptions& opt) {
  abt::Tolerances tol = opt.tolerances();
  nlohmann::json doc = load_json(opt.input);
  abt::Anisotropy gauge = gauge_from(doc);
  if (gauge.kind() != abt::Anisotropy::Kind::Polygonal)
    throw abt::SemanticError("ig decompose expects a polygonal gauge");
  auto dec = abt::polygon_decompose(gauge.ball(), tol.reconstruction, tol.parallel_angle);
  auto mu = abt::representing_measure(gauge);

  std::string out = "{\"weights\":[";
  for (std::size_t i = 0; i < dec.weights.size(); ++i) {
    if (i) out += ",";
    out += abt::format_double(dec.weights[i]);
  }
  out += "],\"directions\":[";
  for (std::size_t i = 0; i < dec.directions.size(); ++i) {
    if (i) out += ",";
    out += "[" + abt::format_double(dec.directions[i].x) + "," +
           abt::format_double(dec.directions[i].y) + "]";
  }
  out += "],\"inradius\":" + abt::format_double(dec.inradius_bound);
  out += ",\"weight_bound\":" + abt::format_double(8.0 / dec.inradius_bound);
  out += ",\"total_vertex_mass\":" + abt::format_double(dec.total_vertex_mass());
  out += ",\"measure\":" + abt::to_json(mu) + "}";
  write_file(opt.out, "decomposition.json", out + "\n");
  return 0;
}

int run_ig_approximate(const CommonOptions& opt, int depth) {
  nlohmann::json doc = load_json(opt.input);
  abt::Anisotropy gauge = gauge_from(doc);
  if (!abt::check_convexity(gauge).convex)
    throw abt::SemanticError("ig approximate expects a convex gauge");

  abt::BodyApproximator approx(gauge);
  std::ostringstream csv;
  csv << "depth,vertices,delta,total_mass,tol_reconstruction\n";
  abt::Tolerances tol = opt.tolerances();
  std::string poly_json;
  std::string measure_json;
  for (int k = 2; k <= depth; ++k) {
    const auto& poly = approx.polygon_at(k);
    auto mu = abt::representing_measure(gauge, k);
    csv << k << "," << poly.vertices().size() << "," << abt::format_double(mu.reconstruction_error)
        << "," << abt::format_double(mu.total_mass()) << "," << abt::format_double(tol.reconstruction)
        << "\n";
    if (k == depth) {
      poly_json = "{\"depth\":" + std::to_string(k) + ",\"vertices\":[";
      const auto& vs = poly.vertices();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) poly_json += ",";
        poly_json += "[" + abt::format_double(vs[i].x) + "," + abt::format_double(vs[i].y) + "]";
      }
      poly_json += "],\"delta\":" + abt::format_double(mu.reconstruction_error) + "}";
      measure_json = abt::to_json(mu);
    }
  }
  write_file(opt.out, "report.csv", csv.str());
  write_file(opt.out, "approximation.json", poly_json + "\n");
  write_file(opt.out, "measure.json", measure_json + "\n");
  return 0;
}

int run_hypermetric(const CommonOptions& opt, int max_points, int coeff_bound, int grid_radius) {
  abt::Tolerances tol = opt.tolerances();
  nlohmann::json doc = load_json(opt.input);
  abt::Anisotropy gauge = gauge_from(doc);
  if (!abt::check_convexity(gauge).convex)
    throw abt::SemanticError("hypermetric search expects a convex gauge");

  abt::HypermetricBudget budget;
  budget.max_points = max_points;
  budget.coeff_bound = coeff_bound;
  budget.violation_tol = tol.violation;
  if (doc.contains("budget")) {
    const auto& b = doc.at("budget");
    if (b.contains("max_points")) budget.max_points = b.at("max_points").get<int>();
    if (b.contains("coeff_bound")) budget.coeff_bound = b.at("coeff_bound").get<int>();
  }
  auto grid = abt::lattice_grid(gauge.dim(), grid_radius);
  auto cert = abt::hypermetric_search(gauge, grid, budget);

  std::string out;
  if (cert) {
    out = abt::to_json(*cert);
  } else {
    out = "{\"found\":false,\"budget\":{\"max_points\":" + std::to_string(budget.max_points) +
          ",\"coeff_bound\":" + std::to_string(budget.coeff_bound) +
          ",\"grid_radius\":" + std::to_string(grid_radius) +
          ",\"grid_points\":" + std::to_string(grid.size()) +
          ",\"violation_tol\":" + abt::format_double(budget.violation_tol) + "}}";
  }
  write_file(opt.out, "certificate.json", out + "\n");
  return 0;
}

int run_verify_slicing(const CommonOptions& opt, int depth) {
  abt::Tolerances tol = opt.tolerances();
  nlohmann::json doc = load_json(opt.input);
  abt::Anisotropy gauge = gauge_from(doc);
  if (gauge.dim() != 2)
    throw abt::SemanticError("verify-slicing supports planar gauges only");
  abt::BranchingFunction h =
      doc.contains("H") ? abt::parse_branching(doc.at("H")) : abt::BranchingFunction::power(0.5);
  auto mu = abt::representing_measure(gauge, depth);

  std::vector<nlohmann::json> instances;
  if (doc.contains("instances")) {
    for (const auto& inst : doc.at("instances")) instances.push_back(inst);
  } else if (doc.contains("current")) {
    instances.push_back(doc.at("current"));
  } else {
    throw abt::ParseError("verify-slicing needs \"instances\" or \"current\"");
  }

  std::ostringstream csv;
  csv << "instance,direct,sliced,abs_diff,bound,pass,tol_reconstruction\n";
  bool all_ok = true;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    auto current = abt::parse_current(instances[i].contains("edges") ? instances[i]
                                                                     : instances[i].at("current"));
    double direct = abt::h_mass(current, h, gauge);
    double sliced = abt::h_mass_via_slicing(current, h, mu);
    double hl = 0.0;
    for (const auto& e : abt::canonicalize(current).edges) hl += h(e.theta) * abt::dist(e.a, e.b);
    double bound = mu.reconstruction_error * hl + tol.reconstruction * (1.0 + direct);
    bool pass = std::fabs(direct - sliced) <= bound;
    all_ok = all_ok && pass;
    csv << i << "," << abt::format_double(direct) << "," << abt::format_double(sliced) << ","
        << abt::format_double(std::fabs(direct - sliced)) << "," << abt::format_double(bound) << ","
        << csv_bool(pass) << "," << abt::format_double(tol.reconstruction) << "\n";
  }
  write_file(opt.out, "report.csv", csv.str());
  return all_ok ? 0 : 3;
}

int run_lsc_experiment(const CommonOptions& opt) {
  nlohmann::json doc = load_json(opt.input);
  abt::PolyhedralOneCurrent limit = abt::parse_current(doc.at("limit"));
  if (limit.edges.size() != 1)
    throw abt::SemanticError("lsc-experiment expects a single-segment limit current");
  std::string family = doc.value("family", "staircase");
  int k_max = doc.value("k_max", 6);
  abt::Anisotropy gauge = doc.contains("sigma") ? abt::parse_gauge(doc.at("sigma"))
                                                : abt::Anisotropy::constant(1.0, 2);
  abt::BranchingFunction h =
      doc.contains("H") ? abt::parse_branching(doc.at("H")) : abt::BranchingFunction::power(0.5);

  const abt::VecN a = limit.edges[0].a, b = limit.edges[0].b;
  const double theta = limit.edges[0].theta;
  double limit_mass = abt::h_mass(limit, h, gauge);

  std::ostringstream csv;
  csv << "k,flat_bound,h_mass_k,h_mass_limit\n";
  double min_mass = 1e300;
  double prev_bound = 1e300;
  bool bounds_decreasing = true;
  for (int k = 1; k <= k_max; ++k) {
    abt::PolyhedralOneCurrent seq;
    seq.dim = 2;
    abt::TriangleMesh mesh;
    if (family == "staircase") {
      // axis-aligned staircase under the chord; the chord must rise at 45
      // degrees so the cell diagonals of the mesh cover it
      double dx = (b[0] - a[0]) / k, dy = (b[1] - a[1]) / k;
      if (!(dx > 0.0) || std::fabs(dx - dy) > 1e-12)
        throw abt::SemanticError("staircase needs a segment rising at 45 degrees");
      for (int i = 0; i < k; ++i) {
        abt::Vec2 p0{a[0] + i * dx, a[1] + i * dy};
        seq.add_edge(p0, abt::Vec2{p0.x + dx, p0.y}, theta);
        seq.add_edge(abt::Vec2{p0.x + dx, p0.y}, abt::Vec2{p0.x + dx, p0.y + dy}, theta);
      }
      mesh = abt::TriangleMesh::grid({a[0], a[1]}, dx, k, k);
    } else if (family == "shrinking_oscillation") {
      // triangular teeth of height 1/k^2 transverse to the segment
      abt::VecN d = abt::sub(b, a);
      double len = abt::norm(d);
      abt::Vec2 u{d[0] / len, d[1] / len};
      abt::Vec2 n = abt::rot90(u);
      double amp = 1.0 / double(k * k);
      for (int i = 0; i < k; ++i) {
        abt::Vec2 p0{a[0] + d[0] * double(i) / k, a[1] + d[1] * double(i) / k};
        abt::Vec2 p1{a[0] + d[0] * double(i + 1) / k, a[1] + d[1] * double(i + 1) / k};
        abt::Vec2 apex = (p0 + p1) * 0.5 + n * amp;
        seq.add_edge(p0, apex, theta);
        seq.add_edge(apex, p1, theta);
      }
    } else {
      throw abt::SemanticError("unknown sequence family: " + family);
    }

    double flat_bound;
    if (family == "staircase") {
      flat_bound = abt::flat_distance_one_upper(seq, limit, mesh);
    } else {
      // area between the teeth and the chord certifies the flat distance
      flat_bound = std::fabs(theta) * 0.5 * (abt::norm(abt::sub(b, a)) / k) * (1.0 / double(k * k)) * k;
    }
    double mass_k = abt::h_mass(seq, h, gauge);
    min_mass = std::min(min_mass, mass_k);
    if (flat_bound >= prev_bound) bounds_decreasing = false;
    prev_bound = flat_bound;
    csv << k << "," << abt::format_double(flat_bound) << "," << abt::format_double(mass_k) << ","
        << abt::format_double(limit_mass) << "\n";
  }
  bool liminf_ok = min_mass >= limit_mass - 1e-9;
  csv << "summary,liminf_ok=" << csv_bool(liminf_ok)
      << ",bounds_decreasing=" << csv_bool(bounds_decreasing) << ",tol=1e-09\n";
  // Polyhedral limits approximate themselves: the identity sequence P = D has
  // flat bound 0 and equal H-mass (noted, trivial for polyhedral inputs).
  csv << "identity_approximation,flat_bound=0,h_mass_diff=0,note=polyhedral limit approximates itself\n";
  write_file(opt.out, "report.csv", csv.str());
  return liminf_ok ? 0 : 3;
}

int run_flatnorm(const CommonOptions& opt) {
  nlohmann::json doc = load_json(opt.input);
  std::string out;
  if (doc.contains("s") && doc.contains("t")) {
    auto s = abt::parse_zero_current(doc.at("s"));
    auto t = abt::parse_zero_current(doc.at("t"));
    out = "{\"flat_distance\":" + abt::format_double(abt::flat_distance_zero(s, t)) + "}";
  } else if (doc.contains("p") && doc.contains("q")) {
    auto p = abt::parse_current(doc.at("p"));
    auto q = abt::parse_current(doc.at("q"));
    if (!doc.contains("mesh")) throw abt::ParseError("flatnorm for 1-currents needs a \"mesh\"");
    const auto& m = doc.at("mesh");
    auto mesh = abt::TriangleMesh::grid(
        {abt::json_number(m.at("origin").at(0)), abt::json_number(m.at("origin").at(1))},
        abt::json_number(m.at("cell")), m.at("nx").get<int>(), m.at("ny").get<int>());
    out = "{\"flat_distance_upper\":" + abt::format_double(abt::flat_distance_one_upper(p, q, mesh)) +
          "}";
  } else {
    throw abt::ParseError("flatnorm needs either {s,t} zero currents or {p,q,mesh}");
  }
  write_file(opt.out, "result.json", out + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic branched transport toolbox"};
  app.require_subcommand(1);

  CommonOptions solve_opt, igd_opt, iga_opt, hyp_opt, slice_opt, lsc_opt, flat_opt;
  std::string mode = "exhaustive";
  int max_steiner = -1;
  std::string oracle_grid, sweep_spec;
  int depth = 12;
  int slice_depth = 12;
  int max_points = 7, coeff_bound = 2, grid_radius = 1;

  auto* solve_cmd = app.add_subcommand("solve", "solve a transport problem");
  add_common(solve_cmd, solve_opt);
  solve_cmd->add_option("--mode", mode, "exhaustive|local")
      ->check(CLI::IsMember({"exhaustive", "local"}));
  solve_cmd->add_option("--max-steiner", max_steiner, "Steiner node budget (-1: terminals-2)");
  solve_cmd->add_option("--oracle-grid", oracle_grid, "GxG grid for the brute-force oracle");
  solve_cmd->add_option("--sweep", sweep_spec, "sweep a problem variable, var=a:b:step");

  auto* igd_cmd = app.add_subcommand("ig-decompose", "decompose a polygon norm");
  add_common(igd_cmd, igd_opt);
  auto* iga_cmd = app.add_subcommand("ig-approximate", "approximate a convex body by polygons");
  add_common(iga_cmd, iga_opt);
  iga_cmd->add_option("--depth", depth, "dyadic depth (2..16)");
  auto* hyp_cmd = app.add_subcommand("hypermetric", "search for hypermetric violations");
  add_common(hyp_cmd, hyp_opt);
  hyp_cmd->add_option("--max-points", max_points, "point budget a");
  hyp_cmd->add_option("--coeff-bound", coeff_bound, "integer coefficient bound B");
  hyp_cmd->add_option("--grid-radius", grid_radius, "lattice grid radius");

  // two-level spelling: `abt ig decompose ...`
  auto* ig_cmd = app.add_subcommand("ig", "integral-geometry commands");
  CommonOptions ig_sub_dec, ig_sub_app, ig_sub_hyp;
  int ig_depth = 12;
  int ig_points = 7, ig_bound = 2, ig_radius = 1;
  auto* ig_dec = ig_cmd->add_subcommand("decompose", "decompose a polygon norm");
  add_common(ig_dec, ig_sub_dec);
  auto* ig_app = ig_cmd->add_subcommand("approximate", "approximate a convex body");
  add_common(ig_app, ig_sub_app);
  ig_app->add_option("--depth", ig_depth, "dyadic depth (2..16)");
  auto* ig_hyp = ig_cmd->add_subcommand("hypermetric", "search for hypermetric violations");
  add_common(ig_hyp, ig_sub_hyp);
  ig_hyp->add_option("--max-points", ig_points, "point budget a");
  ig_hyp->add_option("--coeff-bound", ig_bound, "integer coefficient bound B");
  ig_hyp->add_option("--grid-radius", ig_radius, "lattice grid radius");

  auto* slice_cmd = app.add_subcommand("verify-slicing", "check the slicing identity");
  add_common(slice_cmd, slice_opt);
  slice_cmd->add_option("--depth", slice_depth, "measure depth for non-polygonal gauges");

  auto* lsc_cmd = app.add_subcommand("lsc-experiment", "lower-semicontinuity experiment");
  add_common(lsc_cmd, lsc_opt);

  auto* flat_cmd = app.add_subcommand("flatnorm", "flat distance between currents");
  add_common(flat_cmd, flat_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_opt, mode, max_steiner, oracle_grid, sweep_spec);
    if (igd_cmd->parsed()) return run_ig_decompose(igd_opt);
    if (iga_cmd->parsed()) return run_ig_approximate(iga_opt, depth);
    if (hyp_cmd->parsed()) return run_hypermetric(hyp_opt, max_points, coeff_bound, grid_radius);
    if (ig_cmd->parsed()) {
      if (ig_dec->parsed()) return run_ig_decompose(ig_sub_dec);
      if (ig_app->parsed()) return run_ig_approximate(ig_sub_app, ig_depth);
      if (ig_hyp->parsed()) return run_hypermetric(ig_sub_hyp, ig_points, ig_bound, ig_radius);
      std::cerr << "ig: expected decompose|approximate|hypermetric\n";
      return 2;
    }
    if (slice_cmd->parsed()) return run_verify_slicing(slice_opt, slice_depth);
    if (lsc_cmd->parsed()) return run_lsc_experiment(lsc_opt);
    if (flat_cmd->parsed()) return run_flatnorm(flat_opt);
  } catch (const abt::ParseError& e) {
    std::cerr << "parse error";
    if (e.line >= 0) std::cerr << " at line " << e.line << ", column " << e.column;
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const abt::SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
