#pragma once

#include <string>
#include <vector>

#include "qpbraid/braid.hpp"
#include "qpbraid/branch_locus.hpp"
#include "qpbraid/loop_path.hpp"
#include "qpbraid/monodromy.hpp"

namespace qpbraid {

struct Region {
  double x0 = -1, y0 = -1, x1 = 1, y1 = 1;

  bool contains(cplx z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
};

/// A polyline of B+ carrying generator label. Every polyline is oriented so
/// that crossing it from its right side to its left side reads
/// sigma_label^{+1}; `coorientation` is the left unit normal of the first
/// segment.
struct BPlusEdge {
  int label = 1;
  cplx coorientation;
  std::vector<cplx> points;
};

struct GridCell {
  int i = 0, j = 0;
  std::string reason;
};

struct BPlusGraph {
  Region region;
  int resolution = 0;
  int strands = 2;
  double theta = 0.0;
  std::vector<BPlusEdge> edges;
  /// Branch points inside the region followed by centers of flagged cells
  /// (junction candidates).
  std::vector<cplx> vertices;
  /// Cells where the sampled curve could not be resolved.
  std::vector<GridCell> flagged;
  /// Cells containing a branch point; the graph has no data inside them.
  std::vector<GridCell> excluded;

  /// Grid lines sit at x0 + (i + kGridPhaseX) * cell width (likewise in y)
  /// so that symmetric inputs do not put branch points or B+ itself on grid
  /// lines or through grid vertices. The two phases differ (and do not sum to
  /// an integer) to keep the diagonals off the vertices.
  static constexpr double kGridPhaseX = 0.0618034;
  static constexpr double kGridPhaseY = 0.1458980;
  double cell_width() const { return (region.x1 - region.x0) / resolution; }
  double cell_height() const { return (region.y1 - region.y0) / resolution; }
  double grid_x(int i) const { return region.x0 + (i + kGridPhaseX) * cell_width(); }
  double grid_y(int j) const { return region.y0 + (j + kGridPhaseY) * cell_height(); }
  /// Cell containing z, or {-1, -1} outside the grid.
  std::pair<int, int> cell_of(cplx z) const;
};

struct BPlusOptions {
  int max_subdivision = 3;
  TrackOptions track{1.0, 1e-8, 1e-12, 1e-3, RootOptions{}};
};

/// Samples B+ by continuation along every grid edge; grid edges and cells
/// are processed in parallel, assembly is by cell index.
BPlusGraph sample_bplus(const BivariatePolynomial& f, const BranchData& branch,
                        const Region& region, int resolution, const BPlusOptions& opts = {});

/// Serial reference for sample_bplus; must produce an identical graph.
BPlusGraph sample_bplus_serial(const BivariatePolynomial& f, const BranchData& branch,
                               const Region& region, int resolution,
                               const BPlusOptions& opts = {});

/// The word spelled by the loop's transverse crossings of the graph edges.
/// Throws NumericalError if the loop meets a flagged or excluded cell or
/// leaves the region.
BraidWord crossings_of(const BPlusGraph& graph, const LoopPath& loop);

}  // namespace qpbraid
