#include "qpbraid/loop_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpbraid {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

cplx arc_point(const Arc& a, double angle) { return a.center + std::polar(a.radius, angle); }

double wrap_angle(double x) {
  x = std::fmod(x + M_PI, 2.0 * M_PI);
  if (x < 0) x += 2.0 * M_PI;
  return x - M_PI;
}

// Angle swept by the arc piece [a0, a1] as seen from p. Splits until p is
// outside the circular segment cut off by the chord, where chord and arc
// sweep the same angle.
double arc_sweep_from(const Arc& arc, double a0, double a1, cplx p, int depth) {
  cplx s = arc_point(arc, a0), e = arc_point(arc, a1);
  double piece = std::abs(a1 - a0);
  bool inside_segment = false;
  if (piece > M_PI / 8) {
    inside_segment = true;
  } else if (std::abs(p - arc.center) < arc.radius) {
    // p lies beyond the chord (on the arc side) iff it is farther from the
    // center along the bisector direction than the chord midpoint.
    cplx mid_dir = std::polar(1.0, 0.5 * (a0 + a1));
    double along = ((p - arc.center) * std::conj(mid_dir)).real();
    inside_segment = along > arc.radius * std::cos(0.5 * piece);
  }
  if (inside_segment && depth < 60) {
    double m = 0.5 * (a0 + a1);
    return arc_sweep_from(arc, a0, m, p, depth + 1) + arc_sweep_from(arc, m, a1, p, depth + 1);
  }
  return std::arg((e - p) / (s - p));
}

}  // namespace

cplx start_point(const PathPrimitive& p) {
  return std::visit(Overloaded{[](const Segment& s) { return s.a; },
                               [](const Arc& a) { return arc_point(a, a.from); }},
                    p);
}

cplx end_point(const PathPrimitive& p) {
  return std::visit(Overloaded{[](const Segment& s) { return s.b; },
                               [](const Arc& a) { return arc_point(a, a.to); }},
                    p);
}

double primitive_length(const PathPrimitive& p) {
  return std::visit(Overloaded{[](const Segment& s) { return std::abs(s.b - s.a); },
                               [](const Arc& a) { return a.radius * std::abs(a.to - a.from); }},
                    p);
}

PathPrimitive reversed(const PathPrimitive& p) {
  return std::visit(
      Overloaded{[](const Segment& s) -> PathPrimitive { return Segment{s.b, s.a}; },
                 [](const Arc& a) -> PathPrimitive { return Arc{a.center, a.radius, a.to, a.from}; }},
      p);
}

LoopPath::LoopPath(std::vector<PathPrimitive> primitives, bool closed)
    : prims_(std::move(primitives)), closed_(closed) {
  if (prims_.empty()) throw InputError("loop has no segments");
  double total = 0.0;
  cumulative_.reserve(prims_.size());
  for (const auto& p : prims_) {
    double len = primitive_length(p);
    if (auto* a = std::get_if<Arc>(&p); a && !(a->radius > 0.0))
      throw InputError("arc radius must be positive");
    total += len;
    cumulative_.push_back(total);
  }
  if (!(total > 0.0)) throw InputError("loop has zero length");
  const double tol = kJoinTolerance * std::max(1.0, total);
  for (std::size_t i = 0; i + 1 < prims_.size(); ++i)
    if (std::abs(end_point(prims_[i]) - start_point(prims_[i + 1])) > tol)
      throw InputError("loop primitives " + std::to_string(i) + " and " +
                       std::to_string(i + 1) + " do not join");
  if (closed_ && std::abs(end_point(prims_.back()) - start_point(prims_.front())) > tol)
    throw InputError("loop is not closed");
}

LoopPath LoopPath::circle(cplx center, double radius, bool counterclockwise) {
  return LoopPath({Arc{center, radius, 0.0, counterclockwise ? 2.0 * M_PI : -2.0 * M_PI}});
}

LoopPath LoopPath::polygon(std::span<const cplx> v) {
  if (v.size() < 2) throw InputError("polygon needs at least two vertices");
  std::vector<PathPrimitive> prims;
  for (std::size_t i = 0; i < v.size(); ++i) prims.push_back(Segment{v[i], v[(i + 1) % v.size()]});
  return LoopPath(std::move(prims));
}

double LoopPath::primitive_start(std::size_t i) const {
  return i == 0 ? 0.0 : cumulative_[i - 1] / length();
}

cplx LoopPath::point_at(double t) const {
  const double s = std::clamp(t, 0.0, 1.0) * length();
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = std::min<std::size_t>(it - cumulative_.begin(), prims_.size() - 1);
  const double s0 = i == 0 ? 0.0 : cumulative_[i - 1];
  const double len = cumulative_[i] - s0;
  const double u = len > 0.0 ? std::clamp((s - s0) / len, 0.0, 1.0) : 0.0;
  return std::visit(Overloaded{[&](const Segment& g) { return g.a + u * (g.b - g.a); },
                               [&](const Arc& a) { return arc_point(a, a.from + u * (a.to - a.from)); }},
                    prims_[i]);
}

cplx LoopPath::tangent_at(double t) const {
  const double s = std::clamp(t, 0.0, 1.0) * length();
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = std::min<std::size_t>(it - cumulative_.begin(), prims_.size() - 1);
  const double s0 = i == 0 ? 0.0 : cumulative_[i - 1];
  const double len = cumulative_[i] - s0;
  const double u = len > 0.0 ? std::clamp((s - s0) / len, 0.0, 1.0) : 0.0;
  return std::visit(Overloaded{[&](const Segment& g) { return (g.b - g.a) / std::abs(g.b - g.a); },
                               [&](const Arc& a) {
                                 double ang = a.from + u * (a.to - a.from);
                                 double dir = a.to > a.from ? 1.0 : -1.0;
                                 return cplx{0.0, dir} * std::polar(1.0, ang);
                               }},
                    prims_[i]);
}

LoopPath LoopPath::reversed() const {
  std::vector<PathPrimitive> out;
  out.reserve(prims_.size());
  for (auto it = prims_.rbegin(); it != prims_.rend(); ++it) out.push_back(qpbraid::reversed(*it));
  return LoopPath(std::move(out), closed_);
}

LoopPath LoopPath::then(const LoopPath& other) const {
  auto prims = prims_;
  prims.insert(prims.end(), other.prims_.begin(), other.prims_.end());
  bool closed = std::abs(end_point(prims.back()) - start_point(prims.front())) <=
                kJoinTolerance * std::max(1.0, length() + other.length());
  return LoopPath(std::move(prims), closed);
}

double LoopPath::distance_to(cplx p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& prim : prims_) {
    double d = std::visit(
        Overloaded{[&](const Segment& g) {
                     cplx ab = g.b - g.a;
                     double len2 = std::norm(ab);
                     double u = len2 > 0 ? std::clamp(((p - g.a) * std::conj(ab)).real() / len2, 0.0, 1.0)
                                         : 0.0;
                     return std::abs(p - (g.a + u * ab));
                   },
                   [&](const Arc& a) {
                     double lo = std::min(a.from, a.to), hi = std::max(a.from, a.to);
                     double ang = std::arg(p - a.center);
                     bool within = hi - lo >= 2.0 * M_PI;
                     if (!within) {
                       double rel = std::fmod(ang - lo, 2.0 * M_PI);
                       if (rel < 0) rel += 2.0 * M_PI;
                       within = rel <= hi - lo;
                     }
                     double radial = std::abs(std::abs(p - a.center) - a.radius);
                     if (within) return radial;
                     return std::min(std::abs(p - arc_point(a, a.from)), std::abs(p - arc_point(a, a.to)));
                   }},
        prim);
    best = std::min(best, d);
  }
  return best;
}

double LoopPath::clearance(std::span<const cplx> points) const {
  double best = std::numeric_limits<double>::infinity();
  for (cplx p : points) best = std::min(best, distance_to(p));
  return best;
}

int LoopPath::winding_number(cplx p) const {
  double total = 0.0;
  for (const auto& prim : prims_) {
    total += std::visit(Overloaded{[&](const Segment& g) { return std::arg((g.b - p) / (g.a - p)); },
                                   [&](const Arc& a) { return arc_sweep_from(a, a.from, a.to, p, 0); }},
                        prim);
  }
  if (!closed_) total += wrap_angle(std::arg((start_point(prims_.front()) - p) /
                                             (end_point(prims_.back()) - p)));
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

std::vector<LoopPath::Sample> LoopPath::polyline(double max_angle) const {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < prims_.size(); ++i) {
    const double t0 = primitive_start(i), t1 = cumulative_[i] / length();
    std::visit(Overloaded{[&](const Segment& g) {
                            if (out.empty()) out.push_back({g.a, t0});
                            out.push_back({g.b, t1});
                          },
                          [&](const Arc& a) {
                            int pieces = std::max(1, static_cast<int>(std::ceil(
                                                         std::abs(a.to - a.from) / max_angle)));
                            if (out.empty()) out.push_back({arc_point(a, a.from), t0});
                            for (int k = 1; k <= pieces; ++k) {
                              double u = static_cast<double>(k) / pieces;
                              out.push_back({arc_point(a, a.from + u * (a.to - a.from)),
                                             t0 + u * (t1 - t0)});
                            }
                          }},
               prims_[i]);
  }
  return out;
}

int enclosed_count(const LoopPath& loop, std::span<const cplx> points,
                   std::span<const int> multiplicities) {
  int total = 0;
  for (std::size_t j = 0; j < points.size(); ++j)
    total += loop.winding_number(points[j]) * (j < multiplicities.size() ? multiplicities[j] : 1);
  return total;
}

bool is_simple(const LoopPath& loop) {
  const auto s = loop.polyline();
  const std::size_t m = s.size() - 1;  // chords; the last vertex repeats the first
  auto cross = [](cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // neighbours through the basepoint
      const cplx p = s[i].z, d = s[i + 1].z - p, q = s[j].z, e = s[j + 1].z - q;
      const double den = cross(d, e);
      if (den == 0.0) {
        if (cross(q - p, d) == 0.0 && std::abs(d) > 0) {
          // collinear: overlap test along d
          const double a = ((q - p) * std::conj(d)).real() / std::norm(d);
          const double b = ((q + e - p) * std::conj(d)).real() / std::norm(d);
          if (std::max(a, b) >= 0.0 && std::min(a, b) <= 1.0) return false;
        }
        continue;
      }
      const double u = cross(q - p, e) / den, v = cross(q - p, d) / den;
      if (u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0) return false;
    }
  }
  return true;
}

}  // namespace qpbraid
