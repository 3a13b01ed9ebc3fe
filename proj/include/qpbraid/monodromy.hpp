#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qpbraid/braid.hpp"
#include "qpbraid/branch_locus.hpp"
#include "qpbraid/loop_path.hpp"

namespace qpbraid {

/// Two roots adjacent in the real-part order exchange places at parameter t.
struct CrossingEvent {
  double t = 0.0;
  /// Lower of the two (1-based) real-part order positions.
  int position_index = 1;
  int sign = 1;
  /// Identifiers of the tracked roots (their index in the start fiber),
  /// strand 1 first: strand 1 has the larger derivative of Re along the path.
  int strand1 = 0;
  int strand2 = 0;
  cplx z;
  /// Rotated roots e^{i theta} w of the two strands at the event.
  cplx u1, u2;
};

struct TrackOptions {
  /// Upper bound on a continuation step, as a fraction of the path length.
  double max_step = 1.0 / 256;
  /// Event localization tolerance in t.
  double t_tol = 1e-10;
  /// Step underflow threshold in t.
  double min_step = 1e-12;
  /// Loops closer to B than this fraction of the bounding-box diameter of
  /// B and the loop are rejected.
  double clearance_floor = 1e-3;
  RootOptions roots;
};

struct TrackResult {
  std::vector<CrossingEvent> events;
  std::vector<cplx> start_roots;
  /// Roots continued to t = 1, indexed like start_roots.
  std::vector<cplx> end_roots;
  int steps = 0;
};

/// Largest admissible step (in t) starting at t; combined with max_step.
using StepCap = std::function<double(double)>;

/// Continues the n fiber roots along z(t), t in [0, 1], and records every
/// exchange of real-part order of e^{i theta} w. The path function must be
/// continuous and smooth between the steps the `cap` forces. Steps are
/// checked at both ends and the midpoint, so a path that can wind around B
/// within one step needs a `cap`. Throws NumericalError on step underflow or
/// when path(0) lies on B+.
TrackResult track_path(const BivariatePolynomial& f, double theta,
                       const std::function<cplx(double)>& path, const TrackOptions& opts = {},
                       const StepCap& cap = {});

/// As track_path, starting from the given fiber roots at path(0).
TrackResult track_path_from(const BivariatePolynomial& f, double theta,
                            const std::function<cplx(double)>& path,
                            std::vector<cplx> start_roots, const TrackOptions& opts = {},
                            const StepCap& cap = {});

/// Clearance-checked continuation along a loop. Each step moves at most a
/// quarter of the current distance to B, so no step can encircle a point,
/// and steps end on primitive joins.
TrackResult track_roots(const BivariatePolynomial& f, const BranchData& branch,
                        const LoopPath& loop, const TrackOptions& opts = {});

BraidWord word_from_events(int strands, std::span<const CrossingEvent> events);

BraidWord braid_along(const BivariatePolynomial& f, const BranchData& branch,
                      const LoopPath& loop, const TrackOptions& opts = {});

/// Permutation read directly off the continuation: image of end position p
/// is the start position of the root that ends there (same convention as
/// permutation_of).
Permutation continuation_permutation(const TrackResult& r, double theta);

int enclosed_count(const LoopPath& loop, const BranchData& branch);

/// Parameter ranges of one lollipop factor.
struct FactorMarker {
  int target = 0;  ///< index into BranchData::points
  double out_begin = 0, out_end = 0;
  double circle_begin = 0, circle_end = 0;
  double back_begin = 0, back_end = 0;
};

struct LollipopSpec {
  cplx basepoint;
  std::vector<int> targets;  ///< indices into BranchData::points
  double radius = 0.1;
};

struct LollipopLoop {
  LoopPath path;
  std::vector<FactorMarker> markers;
  LollipopSpec spec;
};

/// Largest radius for which lollipop_loop accepts the targets.
double max_lollipop_radius(const BranchData& branch, std::span<const int> targets,
                           cplx basepoint);

/// Basepoint -> out along a stick -> once around a small ccw circle -> back
/// along the same stick, for each target in order. Sticks are straight and
/// detour around other branch points (passing them on the left).
LollipopLoop lollipop_loop(const BranchData& branch, const LollipopSpec& spec);

struct QpResult {
  QuasipositiveFactorization factorization;
  LollipopLoop loop;  ///< the loop actually used (radius may have shrunk)
  BraidWord word;     ///< braid_along of that loop
};

/// Reads the factorization off a lollipop loop: conjugator from the outgoing
/// stick, generator from the circle. A circle word u sigma_k u^-1 (edges
/// cutting through the disc) moves u into the conjugator. Shrinks the radius
/// up to 4 times when a circle word has any other form; a negative generator
/// is a sign-convention failure and throws.
QpResult qp_factorization(const BivariatePolynomial& f, const BranchData& branch,
                          const LollipopSpec& spec, const TrackOptions& opts = {});

}  // namespace qpbraid
