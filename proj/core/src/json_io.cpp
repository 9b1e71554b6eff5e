#include "abt/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "abt/errors.hpp"

namespace abt {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // avoid a stray "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json parse_document(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports a byte offset; convert to line/column.
    int line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("JSON parse error: ") + e.what(), line, col);
  }
}

double json_number(const nlohmann::json& j, const std::map<std::string, double>& subs) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (!s.empty() && s[0] == '$') {
      auto it = subs.find(s.substr(1));
      if (it == subs.end()) throw SemanticError("unbound sweep variable: " + s);
      return it->second;
    }
  }
  throw ParseError("expected a number (or \"$var\"), got: " + j.dump());
}

namespace {

VecN json_point(const nlohmann::json& j, const std::map<std::string, double>& subs) {
  if (!j.is_array() || j.size() < 2) throw ParseError("expected a coordinate array: " + j.dump());
  VecN p;
  p.reserve(j.size());
  for (const auto& c : j) p.push_back(json_number(c, subs));
  return p;
}

}  // namespace

BranchingFunction parse_branching(const nlohmann::json& j, const std::map<std::string, double>& subs) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("branching function needs a \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") return BranchingFunction::power(json_number(j.at("alpha"), subs));
  if (kind == "affine_jump")
    return BranchingFunction::affine_jump(json_number(j.at("a"), subs), json_number(j.at("b"), subs));
  if (kind == "tabulated") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : j.at("knots"))
      knots.emplace_back(json_number(k.at(0), subs), json_number(k.at(1), subs));
    return BranchingFunction::tabulated(std::move(knots));
  }
  throw ParseError("unknown branching function kind: " + kind);
}

Anisotropy parse_gauge(const nlohmann::json& j, const std::map<std::string, double>& subs) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("gauge needs a \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    int dim = j.contains("dim") ? j.at("dim").get<int>() : 2;
    return Anisotropy::constant(json_number(j.at("c"), subs), dim);
  }
  if (kind == "polygonal") {
    std::vector<Vec2> vertices;
    for (const auto& v : j.at("vertices")) {
      VecN p = json_point(v, subs);
      vertices.push_back({p[0], p[1]});
    }
    return Anisotropy::polygonal(SymmetricPolygon::from_vertices(std::move(vertices)));
  }
  if (kind == "lp") {
    int dim = j.contains("dim") ? j.at("dim").get<int>() : 3;
    const auto& pj = j.at("p");
    if (pj.is_string() && pj.get<std::string>() == "inf") {
      return Anisotropy::functional(
          dim,
          [](std::span<const double> u) {
            double m = 0.0;
            for (double x : u) m = std::max(m, std::fabs(x));
            return m;
          },
          360, "linf");
    }
    double p = json_number(pj, subs);
    if (!(p >= 1.0)) throw SemanticError("lp gauge needs p >= 1");
    return Anisotropy::functional(
        dim,
        [p](std::span<const double> u) {
          double s = 0.0;
          for (double x : u) s += std::pow(std::fabs(x), p);
          return std::pow(s, 1.0 / p);
        },
        360, "l" + format_double(p));
  }
  throw ParseError("unknown gauge kind: " + kind);
}

TransportProblem parse_problem(const nlohmann::json& j, const std::map<std::string, double>& subs) {
  TransportProblem problem;
  if (!j.is_object()) throw ParseError("problem must be a JSON object");
  auto read_atoms = [&](const char* key, std::vector<TransportProblem::Atom>& out) {
    if (!j.contains(key)) throw ParseError(std::string("problem needs \"") + key + "\"");
    for (const auto& a : j.at(key)) {
      TransportProblem::Atom atom;
      atom.point = json_point(a.at("p"), subs);
      atom.mass = json_number(a.at("m"), subs);
      out.push_back(std::move(atom));
    }
  };
  read_atoms("sources", problem.sources);
  read_atoms("targets", problem.targets);
  if (problem.sources.empty()) throw SemanticError("problem: empty sources");
  problem.dim = int(problem.sources.front().point.size());
  problem.h = j.contains("H") ? parse_branching(j.at("H"), subs) : BranchingFunction::power(0.5);
  problem.sigma =
      j.contains("sigma") ? parse_gauge(j.at("sigma"), subs) : Anisotropy::constant(1.0, problem.dim);
  problem.validate();
  return problem;
}

PolyhedralOneCurrent parse_current(const nlohmann::json& j, const std::map<std::string, double>& subs) {
  PolyhedralOneCurrent p;
  if (!j.is_object() || !j.contains("edges")) throw ParseError("current needs \"edges\"");
  for (const auto& e : j.at("edges")) {
    OrientedEdge edge;
    edge.a = json_point(e.at("a"), subs);
    edge.b = json_point(e.at("b"), subs);
    edge.theta = json_number(e.at("theta"), subs);
    p.edges.push_back(std::move(edge));
  }
  p.dim = p.edges.empty() ? 2 : int(p.edges.front().a.size());
  return p;
}

ZeroCurrent parse_zero_current(const nlohmann::json& j, const std::map<std::string, double>& subs) {
  ZeroCurrent z;
  if (!j.is_object() || !j.contains("atoms")) throw ParseError("zero current needs \"atoms\"");
  for (const auto& a : j.at("atoms")) {
    ZeroCurrent::Atom atom;
    atom.point = json_point(a.at("p"), subs);
    atom.weight = json_number(a.at("w"), subs);
    z.atoms.push_back(std::move(atom));
  }
  z.dim = z.atoms.empty() ? 2 : int(z.atoms.front().point.size());
  return z;
}

namespace {

std::string point_json(const VecN& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += format_double(p[i]);
  }
  return out + "]";
}

}  // namespace

std::string to_json(const PolyhedralOneCurrent& p) {
  std::string out = "{\"edges\":[";
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += ",";
    out += "{\"a\":" + point_json(p.edges[i].a) + ",\"b\":" + point_json(p.edges[i].b) +
           ",\"theta\":" + format_double(p.edges[i].theta) + "}";
  }
  return out + "]}";
}

std::string to_json(const ZeroCurrent& z) {
  std::string out = "{\"atoms\":[";
  for (std::size_t i = 0; i < z.atoms.size(); ++i) {
    if (i) out += ",";
    out += "{\"p\":" + point_json(z.atoms[i].point) + ",\"w\":" + format_double(z.atoms[i].weight) + "}";
  }
  return out + "]}";
}

std::string to_json(const DirectionMeasure& mu) {
  std::string out = "[";
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    if (i) out += ",";
    out += "{\"omega\":[" + format_double(mu.atoms[i].omega.x) + "," +
           format_double(mu.atoms[i].omega.y) + "],\"mass\":" + format_double(mu.atoms[i].mass) + "}";
  }
  return out + "]";
}

std::string to_json(const HypermetricCertificate& cert) {
  std::string out = "{\"found\":true,\"points\":[";
  for (std::size_t i = 0; i < cert.points.size(); ++i) {
    if (i) out += ",";
    out += point_json(cert.points[i]);
  }
  out += "],\"coefficients\":[";
  for (std::size_t i = 0; i < cert.coefficients.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(cert.coefficients[i]);
  }
  out += "],\"value\":" + format_double(cert.value) + "}";
  return out;
}

std::string network_to_json(const Network& net) {
  std::string out = "{\"cost\":" + format_double(net.cost);
  out += ",\"edges\":[";
  for (std::size_t i = 0; i < net.current.edges.size(); ++i) {
    if (i) out += ",";
    out += "{\"a\":" + point_json(net.current.edges[i].a) + ",\"b\":" + point_json(net.current.edges[i].b) +
           ",\"theta\":" + format_double(net.current.edges[i].theta) + "}";
  }
  out += "],\"steiner\":[";
  for (std::size_t i = 0; i < net.steiner_positions.size(); ++i) {
    if (i) out += ",";
    out += point_json(net.steiner_positions[i]);
  }
  out += "],\"diagnostics\":{";
  out += "\"mass_bound_constant\":" + format_double(net.diagnostics.mass_bound_constant);
  out += ",\"max_multiplicity\":" + format_double(net.diagnostics.max_multiplicity);
  out += std::string(",\"linf_bound_ok\":") + (net.diagnostics.linf_bound_ok ? "true" : "false");
  out += std::string(",\"acyclic\":") + (net.diagnostics.acyclic ? "true" : "false");
  out += "}}";
  return out;
}

}  // namespace abt
