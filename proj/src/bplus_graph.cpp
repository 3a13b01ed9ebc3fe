#include "qpbraid/bplus_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>

#include <json.hpp>

#include "qpbraid/errors.hpp"

namespace qpbraid {

std::pair<int, int> BPlusGraph::cell_of(cplx z) const {
  const double u = (z.real() - region.x0) / cell_width() - kGridPhaseX;
  const double v = (z.imag() - region.y0) / cell_height() - kGridPhaseY;
  const int i = static_cast<int>(std::floor(u)), j = static_cast<int>(std::floor(v));
  // res grid lines per axis -> res - 1 cells
  if (i < 0 || j < 0 || i >= resolution - 1 || j >= resolution - 1) return {-1, -1};
  return {i, j};
}

namespace {

struct SideCrossing {
  cplx z;
  int label = 1;
  cplx coorient;  // crossing along this direction reads +1
};

struct EdgeSample {
  std::vector<SideCrossing> crossings;
  bool failed = false;
};

struct Seg {
  cplx p, q;
  int label = 1;
};

struct CellResult {
  std::vector<Seg> segs;
  bool flagged = false;
  bool excluded = false;
  std::string reason;
};

EdgeSample sample_edge(const BivariatePolynomial& f, double theta, cplx a, cplx b,
                       const std::vector<cplx>* start, const TrackOptions& opts) {
  EdgeSample out;
  const cplx dir = (b - a) / std::abs(b - a);
  auto path = [a, b](double t) { return a + t * (b - a); };
  try {
    TrackResult r = start ? track_path_from(f, theta, path, *start, opts)
                          : track_path(f, theta, path, opts);
    for (const auto& e : r.events)
      out.crossings.push_back({e.z, e.position_index, static_cast<double>(e.sign) * dir});
  } catch (const std::exception&) {
    out.failed = true;
  }
  return out;
}

struct Rect {
  double x0, y0, x1, y1;
};

// Sides: 0 bottom (+x), 1 right (+y), 2 top (+x), 3 left (+y).
struct CellSolver {
  const BivariatePolynomial& f;
  double theta;
  const BPlusOptions& opts;

  static double dot(cplx a, cplx b) { return (a * std::conj(b)).real(); }

  bool try_resolve(const std::array<const EdgeSample*, 4>& sides, std::vector<Seg>& out) const {
    std::map<int, std::vector<SideCrossing>> by_label;
    for (const auto* s : sides)
      for (const auto& c : s->crossings) by_label[c.label].push_back(c);
    std::vector<Seg> segs;
    for (auto& [label, cs] : by_label) {
      if (cs.size() != 2) return false;
      Seg s{cs[0].z, cs[1].z, label};
      cplx n = cplx(0, 1) * (s.q - s.p);
      if (std::abs(n) == 0.0) return false;
      if (dot(n, cs[0].coorient) < 0) {
        std::swap(s.p, s.q);
        n = -n;
      }
      if (dot(n, cs[0].coorient) <= 0 || dot(n, cs[1].coorient) <= 0) return false;
      segs.push_back(s);
    }
    out.insert(out.end(), segs.begin(), segs.end());
    return true;
  }

  static void split(const EdgeSample& e, bool horizontal, double mid, EdgeSample& lo,
                    EdgeSample& hi) {
    lo.failed = hi.failed = e.failed;
    for (const auto& c : e.crossings) {
      const double s = horizontal ? c.z.real() : c.z.imag();
      (s < mid ? lo : hi).crossings.push_back(c);
    }
  }

  // Returns false when some part stays unresolved.
  bool solve(const Rect& r, const std::array<const EdgeSample*, 4>& sides, int depth,
             std::vector<Seg>& out) const {
    for (const auto* s : sides)
      if (s->failed) return false;
    if (try_resolve(sides, out)) return true;
    if (depth >= opts.max_subdivision) return false;

    const double xm = 0.5 * (r.x0 + r.x1), ym = 0.5 * (r.y0 + r.y1);
    EdgeSample b_lo, b_hi, t_lo, t_hi, l_lo, l_hi, r_lo, r_hi;
    split(*sides[0], true, xm, b_lo, b_hi);
    split(*sides[2], true, xm, t_lo, t_hi);
    split(*sides[3], false, ym, l_lo, l_hi);
    split(*sides[1], false, ym, r_lo, r_hi);
    const auto& t = opts.track;
    EdgeSample h_left = sample_edge(f, theta, {r.x0, ym}, {xm, ym}, nullptr, t);
    EdgeSample h_right = sample_edge(f, theta, {xm, ym}, {r.x1, ym}, nullptr, t);
    EdgeSample v_bot = sample_edge(f, theta, {xm, r.y0}, {xm, ym}, nullptr, t);
    EdgeSample v_top = sample_edge(f, theta, {xm, ym}, {xm, r.y1}, nullptr, t);

    bool ok = true;
    ok &= solve({r.x0, r.y0, xm, ym}, {&b_lo, &v_bot, &h_left, &l_lo}, depth + 1, out);
    ok &= solve({xm, r.y0, r.x1, ym}, {&b_hi, &r_lo, &h_right, &v_bot}, depth + 1, out);
    ok &= solve({r.x0, ym, xm, r.y1}, {&h_left, &v_top, &t_lo, &l_hi}, depth + 1, out);
    ok &= solve({xm, ym, r.x1, r.y1}, {&h_right, &r_hi, &t_hi, &v_top}, depth + 1, out);
    return ok;
  }
};

std::vector<BPlusEdge> chain(std::vector<Seg> segs) {
  using Key = std::pair<double, double>;
  auto key = [](cplx z) { return Key{z.real(), z.imag()}; };
  std::map<std::pair<int, Key>, std::size_t> by_start;
  std::map<std::pair<int, Key>, int> in_degree;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    by_start.emplace(std::pair{segs[k].label, key(segs[k].p)}, k);
    ++in_degree[{segs[k].label, key(segs[k].q)}];
  }
  std::vector<char> used(segs.size(), 0);
  std::vector<BPlusEdge> edges;
  auto walk = [&](std::size_t k) {
    BPlusEdge e;
    e.label = segs[k].label;
    cplx d = segs[k].q - segs[k].p;
    e.coorientation = cplx(0, 1) * d / std::abs(d);
    e.points.push_back(segs[k].p);
    while (!used[k]) {
      used[k] = 1;
      e.points.push_back(segs[k].q);
      auto it = by_start.find({segs[k].label, key(segs[k].q)});
      if (it == by_start.end()) break;
      k = it->second;
    }
    edges.push_back(std::move(e));
  };
  // Open chains first, then closed cycles.
  for (std::size_t k = 0; k < segs.size(); ++k)
    if (!used[k] && !in_degree.count({segs[k].label, key(segs[k].p)})) walk(k);
  for (std::size_t k = 0; k < segs.size(); ++k)
    if (!used[k]) walk(k);
  return edges;
}

BPlusGraph sample_impl(const BivariatePolynomial& f, const BranchData& branch,
                       const Region& region, int resolution, const BPlusOptions& opts,
                       bool parallel) {
  if (resolution < 2) throw InputError("resolution must be at least 2");
  if (!(region.x1 > region.x0) || !(region.y1 > region.y0)) throw InputError("empty region");

  BPlusGraph g;
  g.region = region;
  g.resolution = resolution;
  g.strands = f.n();
  g.theta = branch.rotation_theta;
  const int R = resolution, C = resolution - 1;
  auto vid = [R](int i, int j) { return j * R + i; };
  auto point = [&](int i, int j) { return cplx{g.grid_x(i), g.grid_y(j)}; };
  const auto& topts = opts.track;

  std::vector<std::vector<cplx>> vroots(static_cast<std::size_t>(R) * R);
  std::vector<char> vok(vroots.size(), 1);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (int v = 0; v < R * R; ++v) {
    try {
      vroots[v] = raw_fiber_roots(f, point(v % R, v / R), topts.roots);
    } catch (const std::exception&) {
      vok[v] = 0;
    }
  }

  // Horizontal edges (i, j) -> (i + 1, j) and vertical edges (i, j) -> (i, j + 1).
  std::vector<EdgeSample> hedges(static_cast<std::size_t>(C) * R), vedges(hedges.size());
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (int e = 0; e < 2 * C * R; ++e) {
    const bool horiz = e < C * R;
    const int k = horiz ? e : e - C * R;
    int i, j, i2, j2;
    if (horiz) {
      i = k % C, j = k / C, i2 = i + 1, j2 = j;
    } else {
      i = k % R, j = k / R, i2 = i, j2 = j + 1;
    }
    EdgeSample s;
    if (!vok[vid(i, j)]) {
      s.failed = true;
    } else {
      s = sample_edge(f, g.theta, point(i, j), point(i2, j2), &vroots[vid(i, j)], topts);
    }
    (horiz ? hedges : vedges)[k] = std::move(s);
  }
  auto hedge = [&](int i, int j) -> const EdgeSample& { return hedges[j * C + i]; };
  auto vedge = [&](int i, int j) -> const EdgeSample& { return vedges[j * R + i]; };

  std::vector<CellResult> cells(static_cast<std::size_t>(C) * C);
  for (const auto& p : branch.points) {
    auto [i, j] = g.cell_of(p.z);
    if (i >= 0) cells[j * C + i].excluded = true;
  }
  CellSolver solver{f, g.theta, opts};
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int c = 0; c < C * C; ++c) {
    auto& cell = cells[c];
    if (cell.excluded) continue;
    const int i = c % C, j = c / C;
    Rect r{g.grid_x(i), g.grid_y(j), g.grid_x(i + 1), g.grid_y(j + 1)};
    std::array<const EdgeSample*, 4> sides{&hedge(i, j), &vedge(i + 1, j), &hedge(i, j + 1),
                                           &vedge(i, j)};
    if (!solver.solve(r, sides, 0, cell.segs)) {
      cell.flagged = true;
      bool failed = std::any_of(sides.begin(), sides.end(), [](auto* s) { return s->failed; });
      cell.reason = failed ? "edge continuation failed" : "unresolved after subdivision";
    }
  }

  std::vector<Seg> all;
  for (int c = 0; c < C * C; ++c) {
    const auto& cell = cells[c];
    const int i = c % C, j = c / C;
    if (cell.excluded) {
      g.excluded.push_back({i, j, "contains a branch point"});
      continue;
    }
    if (cell.flagged) g.flagged.push_back({i, j, cell.reason});
    all.insert(all.end(), cell.segs.begin(), cell.segs.end());
  }
  g.edges = chain(std::move(all));
  for (const auto& p : branch.points)
    if (region.contains(p.z)) g.vertices.push_back(p.z);
  for (const auto& fc : g.flagged)
    g.vertices.push_back({0.5 * (g.grid_x(fc.i) + g.grid_x(fc.i + 1)),
                          0.5 * (g.grid_y(fc.j) + g.grid_y(fc.j + 1))});
  return g;
}

}  // namespace

BPlusGraph sample_bplus(const BivariatePolynomial& f, const BranchData& branch,
                        const Region& region, int resolution, const BPlusOptions& opts) {
  return sample_impl(f, branch, region, resolution, opts, true);
}

BPlusGraph sample_bplus_serial(const BivariatePolynomial& f, const BranchData& branch,
                               const Region& region, int resolution, const BPlusOptions& opts) {
  return sample_impl(f, branch, region, resolution, opts, false);
}

BraidWord crossings_of(const BPlusGraph& graph, const LoopPath& loop) {
  const int C = graph.resolution - 1;
  std::vector<char> status(static_cast<std::size_t>(C) * C, 0);
  for (const auto& c : graph.flagged) status[c.j * C + c.i] = 1;
  for (const auto& c : graph.excluded) status[c.j * C + c.i] = 2;

  auto samples = loop.polyline(M_PI / 256);
  const double h = 0.25 * std::min(graph.cell_width(), graph.cell_height());
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const cplx a = samples[k].z, b = samples[k + 1].z;
    const int m = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / h)));
    for (int s = 0; s <= m; ++s) {
      cplx z = a + (b - a) * (static_cast<double>(s) / m);
      auto [i, j] = graph.cell_of(z);
      if (i < 0)
        throw NumericalError("loop leaves the sampled region",
                             nlohmann::json{{"z", {z.real(), z.imag()}}}.dump());
      if (status[j * C + i])
        throw NumericalError(status[j * C + i] == 1 ? "loop meets a flagged cell"
                                                    : "loop meets a cell containing a branch point",
                             nlohmann::json{{"cell", {i, j}}, {"z", {z.real(), z.imag()}}}.dump());
    }
  }

  struct Hit {
    double t;
    BraidLetter letter;
  };
  std::vector<Hit> hits;
  auto cross = [](cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); };
  for (const auto& e : graph.edges) {
    for (std::size_t s = 0; s + 1 < e.points.size(); ++s) {
      const cplx p = e.points[s], q = e.points[s + 1], d = q - p;
      const double bx0 = std::min(p.real(), q.real()), bx1 = std::max(p.real(), q.real());
      const double by0 = std::min(p.imag(), q.imag()), by1 = std::max(p.imag(), q.imag());
      for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const cplx a = samples[k].z, b = samples[k + 1].z, c = b - a;
        if (std::max(a.real(), b.real()) < bx0 || std::min(a.real(), b.real()) > bx1 ||
            std::max(a.imag(), b.imag()) < by0 || std::min(a.imag(), b.imag()) > by1)
          continue;
        const double den = cross(d, c);
        if (den == 0.0) continue;
        const double sp = cross(a - p, c) / den;  // along the graph segment
        const double u = cross(a - p, d) / den;   // along the loop chord
        if (sp < 0.0 || sp >= 1.0 || u < 0.0 || u >= 1.0) continue;
        // cross(d, c) > 0 means the chord runs along the left normal of d.
        const int sign = den > 0 ? 1 : -1;
        hits.push_back({samples[k].t + u * (samples[k + 1].t - samples[k].t),
                        BraidLetter{e.label, sign}});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t < y.t; });
  BraidWord w(graph.strands, {});
  for (const auto& hit : hits) w.push_back(hit.letter);
  return w;
}

}  // namespace qpbraid
