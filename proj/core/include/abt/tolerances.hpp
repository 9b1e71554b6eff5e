#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace abt {

/// Documented numeric defaults, overridable by name from the CLI.
struct Tolerances {
  /// Absolute tolerance of branching-axiom checks.
  double axiom = 1e-12;
  /// Absolute geometric tolerance: points closer than this are snapped.
  double geom_snap = 1e-9;
  /// Canonical edges / atoms with multiplicity below this are dropped.
  double multiplicity_zero = 1e-12;
  /// Polygon-norm reconstruction tolerance.
  double reconstruction = 1e-9;
  /// Angular tolerance of the parallelism check in polygon decomposition.
  double parallel_angle = 1e-8;
  /// Triangle-inequality slack accepted by the convexity check.
  double convexity = 1e-9;
  /// A hypermetric certificate must exceed this value.
  double violation = 1e-9;
  /// Steiner point within this distance of a neighbor counts as collapsed.
  double collapse = 1e-7;
  /// Position-optimizer cost tolerance.
  double optimizer = 1e-8;

  double& by_name(const std::string& name) {
    static const std::map<std::string, double Tolerances::*> fields = {
        {"axiom", &Tolerances::axiom},
        {"geom_snap", &Tolerances::geom_snap},
        {"multiplicity_zero", &Tolerances::multiplicity_zero},
        {"reconstruction", &Tolerances::reconstruction},
        {"parallel_angle", &Tolerances::parallel_angle},
        {"convexity", &Tolerances::convexity},
        {"violation", &Tolerances::violation},
        {"collapse", &Tolerances::collapse},
        {"optimizer", &Tolerances::optimizer},
    };
    auto it = fields.find(name);
    if (it == fields.end()) throw std::invalid_argument("unknown tolerance: " + name);
    return this->*(it->second);
  }
};

}  // namespace abt
