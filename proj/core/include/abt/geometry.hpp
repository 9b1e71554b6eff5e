#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace abt {

/// Planar vector. Used by the polygon machinery and everything that is
/// genuinely two-dimensional.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double t) const { return {x * t, y * t}; }
  Vec2 operator/(double t) const { return {x / t, y / t}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Counterclockwise rotation by 90 degrees.
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

inline Vec2 unit_dir(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero vector");
  return a / n;
}

inline bool lex_less(Vec2 a, Vec2 b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

/// Dense n-dimensional point/vector for currents and transport problems.
using VecN = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline VecN sub(std::span<const double> a, std::span<const double> b) {
  VecN r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline VecN add(std::span<const double> a, std::span<const double> b) {
  VecN r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline VecN scale(std::span<const double> a, double t) {
  VecN r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * t;
  return r;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool lex_less(const VecN& a, const VecN& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

/// Projection Jacobian between the lines spanned by u and w: |cos| of the
/// angle between them. Accepts non-unit inputs and normalizes.
inline double line_jacobian(std::span<const double> u, std::span<const double> w) {
  double nu = norm(u), nw = norm(w);
  if (nu == 0.0 || nw == 0.0) throw std::invalid_argument("line_jacobian: zero direction");
  double c = std::fabs(dot(u, w)) / (nu * nw);
  return c > 1.0 ? 1.0 : c;
}

inline double line_jacobian(Vec2 u, Vec2 w) {
  double nu = norm(u), nw = norm(w);
  if (nu == 0.0 || nw == 0.0) throw std::invalid_argument("line_jacobian: zero direction");
  double c = std::fabs(dot(u, w)) / (nu * nw);
  return c > 1.0 ? 1.0 : c;
}

/// Planar bracket between two lines, |sin| of the angle; equals the Jacobian
/// of the first line against the rotation of the second.
inline double line_bracket(Vec2 u, Vec2 w) { return line_jacobian(u, rot90(w)); }

/// splitmix64: tiny deterministic generator, identical on every platform.
/// Distribution helpers are hand-rolled so outputs never depend on the
/// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  int uniform_int(int a, int b) { return a + int(below(std::uint64_t(b - a + 1))); }

 private:
  std::uint64_t state_;
};

}  // namespace abt
