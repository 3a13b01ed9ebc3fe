#pragma once

#include <span>
#include <variant>
#include <vector>

#include "qpbraid/polynomial.hpp"

namespace qpbraid {

struct Segment {
  cplx a, b;
};

/// Circular arc; counterclockwise when to > from.
struct Arc {
  cplx center;
  double radius = 1.0;
  double from = 0.0;
  double to = 0.0;
};

using PathPrimitive = std::variant<Segment, Arc>;

cplx start_point(const PathPrimitive& p);
cplx end_point(const PathPrimitive& p);
double primitive_length(const PathPrimitive& p);
PathPrimitive reversed(const PathPrimitive& p);

/// Oriented path in the z-plane parametrized by normalized arc length
/// t in [0, 1]. Consecutive primitives must join up.
class LoopPath {
 public:
  LoopPath() = default;
  explicit LoopPath(std::vector<PathPrimitive> primitives, bool closed = true);

  static LoopPath circle(cplx center, double radius, bool counterclockwise = true);
  /// Closed polygon through the vertices (last joined back to first).
  static LoopPath polygon(std::span<const cplx> vertices);

  const std::vector<PathPrimitive>& primitives() const { return prims_; }
  bool closed() const { return closed_; }
  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  /// Normalized start parameter of primitive i.
  double primitive_start(std::size_t i) const;

  cplx point_at(double t) const;
  /// Unit tangent at t.
  cplx tangent_at(double t) const;

  LoopPath reversed() const;
  /// This path followed by other; throws InputError if they do not join.
  LoopPath then(const LoopPath& other) const;

  double distance_to(cplx p) const;
  double clearance(std::span<const cplx> points) const;
  /// Signed number of turns around p (p must not lie on the path).
  int winding_number(cplx p) const;

  /// Polyline with vertices at primitive ends and arcs split to at most
  /// max_angle radians per chord. Each vertex carries its parameter t.
  struct Sample {
    cplx z;
    double t;
  };
  std::vector<Sample> polyline(double max_angle = M_PI / 64) const;

  /// Joins mismatch above this fraction of the length are rejected.
  static constexpr double kJoinTolerance = 1e-9;

 private:
  std::vector<PathPrimitive> prims_;
  std::vector<double> cumulative_;
  bool closed_ = true;
};

/// sum_j winding(loop, z_j) * multiplicity_j.
int enclosed_count(const LoopPath& loop, std::span<const cplx> points,
                   std::span<const int> multiplicities);

/// False when the polyline approximation of the loop meets itself away
/// from consecutive chords.
bool is_simple(const LoopPath& loop);

}  // namespace qpbraid
