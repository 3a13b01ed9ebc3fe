#include "qpbraid/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <json.hpp>

namespace qpbraid {

namespace {

using Roots = std::vector<cplx>;

// Lexicographic (Re, Im) order of rotated roots.
bool rotated_less(cplx rot, cplx a, cplx b) {
  cplx ua = rot * a, ub = rot * b;
  if (ua.real() != ub.real()) return ua.real() < ub.real();
  return ua.imag() < ub.imag();
}

std::vector<int> order_of(const Roots& r, cplx rot) {
  std::vector<int> order(r.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rotated_less(rot, r[a], r[b]); });
  return order;
}

std::vector<int> positions_of(const std::vector<int>& order) {
  std::vector<int> pos(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = static_cast<int>(p);
  return pos;
}

double min_gap(const Roots& r) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) g = std::min(g, std::abs(r[i] - r[j]));
  return g;
}

class Continuer {
 public:
  Continuer(const BivariatePolynomial& f, const TrackOptions& opts)
      : f_(f), opts_(opts), coeffs_(f.n() + 1) {}

  // Roots at z seeded from `from`, matched to it; empty if the step is not
  // certified (residual too large or displacement >= gap / 3).
  std::optional<Roots> advance(const Roots& from, cplx z) {
    f_.fiber_coeffs(z, coeffs_);
    Roots cand = from;
    double residual = aberth_refine(coeffs_, cand, 64);
    if (!(residual <= opts_.roots.tol)) return std::nullopt;
    const double limit = min_gap(from) / 3.0;
    Roots out(from.size());
    std::vector<bool> used(cand.size(), false);
    for (std::size_t i = 0; i < from.size(); ++i) {
      std::size_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < cand.size(); ++j) {
        double d = std::abs(from[i] - cand[j]);
        if (d < bd) {
          bd = d;
          best = j;
        }
      }
      if (!(bd < limit) || used[best]) return std::nullopt;
      used[best] = true;
      out[i] = cand[best];
    }
    return out;
  }

 private:
  const BivariatePolynomial& f_;
  const TrackOptions& opts_;
  std::vector<cplx> coeffs_;
};

}  // namespace

TrackResult track_path(const BivariatePolynomial& f, double theta,
                       const std::function<cplx(double)>& path, const TrackOptions& opts,
                       const StepCap& cap) {
  return track_path_from(f, theta, path, raw_fiber_roots(f, path(0.0), opts.roots), opts, cap);
}

TrackResult track_path_from(const BivariatePolynomial& f, double theta,
                            const std::function<cplx(double)>& path,
                            std::vector<cplx> start_roots, const TrackOptions& opts,
                            const StepCap& cap) {
  const cplx rot = std::polar(1.0, theta);
  const int n = f.n();
  Continuer cont(f, opts);

  TrackResult result;
  Roots r = std::move(start_roots);
  if (static_cast<int>(r.size()) != n) throw InputError("start fiber must have n roots");
  double rmax = 0.0;
  for (cplx w : r) rmax = std::max(rmax, std::abs(w));
  if (!(min_gap(r) > 1e-8 * std::max(1.0, rmax)))
    throw NumericalError("path starts on the branch locus",
                         nlohmann::json{{"z", {path(0.0).real(), path(0.0).imag()}}}.dump());
  {
    // an exchange exactly at t = 0 belongs to neither end of a closed loop
    std::vector<double> re;
    for (cplx w : r) re.push_back((rot * w).real());
    std::sort(re.begin(), re.end());
    for (std::size_t i = 0; i + 1 < re.size(); ++i)
      if (!(re[i + 1] - re[i] > 1e-8 * std::max(1.0, rmax)))
        throw NumericalError("path starts on B+ (two roots with equal real part)",
                             nlohmann::json{{"z", {path(0.0).real(), path(0.0).imag()}},
                                            {"theta", theta}}.dump());
  }
  result.start_roots = r;

  auto underflow = [&](double t, const char* why) {
    cplx z = path(t);
    throw NumericalError("step underflow: path too close to B or to B+ tangency",
                         nlohmann::json{{"t", t}, {"z", {z.real(), z.imag()}}, {"cause", why}}.dump());
  };

  double t = 0.0, h = opts.max_step;
  while (t < 1.0) {
    if (cap) h = std::min(h, std::max(cap(t), opts.min_step));
    const double t1 = std::min(1.0, t + h);
    auto next = cont.advance(r, path(t1));
    if (!next) {
      h *= 0.5;
      if (h < opts.min_step) underflow(t, "root matching");
      continue;
    }
    const Roots& r1 = *next;
    auto order0 = order_of(r, rot);
    auto pos0 = positions_of(order0);

    // Pairs whose relative order flipped over the step.
    std::vector<std::pair<int, int>> flips;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rotated_less(rot, r[a], r[b]) != rotated_less(rot, r1[a], r1[b])) flips.push_back({a, b});
    bool simple = true;
    std::vector<bool> touched(n, false);
    for (auto [a, b] : flips) {
      if (std::abs(pos0[a] - pos0[b]) != 1 || touched[a] || touched[b]) simple = false;
      touched[a] = touched[b] = true;
    }
    if (!simple) {
      h *= 0.5;
      if (h < opts.min_step) underflow(t, "several exchanges in one step");
      continue;
    }

    // A pair can exchange and exchange back within one smooth step when
    // the path runs close to a B+ curve. Sample the midpoint and reject the
    // step if the real-part gap of an unflipped pair changes sign there, or
    // if the quadratic through the three samples vanishes inside the step.
    {
      auto mid = cont.advance(r, path(0.5 * (t + t1)));
      bool risky = !mid;
      for (int a = 0; a < n && !risky; ++a)
        for (int b = a + 1; b < n && !risky; ++b) {
          if (rotated_less(rot, r[a], r[b]) != rotated_less(rot, r1[a], r1[b])) continue;
          const double g0 = (rot * (r[a] - r[b])).real();
          const double gm = (rot * ((*mid)[a] - (*mid)[b])).real();
          const double g1 = (rot * (r1[a] - r1[b])).real();
          // an endpoint on B+ (e.g. a polygon vertex) has no usable sign
          if (std::min(std::abs(g0), std::abs(g1)) <= 1e-9 * std::max(1.0, rmax)) continue;
          if ((gm > 0) != (g0 > 0)) {
            risky = true;
            continue;
          }
          // g(s) = g0 + p s + q s^2 on s in [0, 1]
          const double q = 2 * g0 - 4 * gm + 2 * g1;
          const double p = 4 * gm - 3 * g0 - g1;
          if (q != 0) {
            const double s = -p / (2 * q);
            if (s > 0 && s < 1 && ((g0 + p * s + q * s * s) > 0) != (g0 > 0)) risky = true;
          }
        }
      if (risky) {
        h *= 0.5;
        if (h < opts.min_step) underflow(t, "B+ tangency");
        continue;
      }
    }

    for (auto [a, b] : flips) {
      // Bisection keeping `lo` on the side where the original order holds.
      double ta = t, tb = t1;
      Roots ra = r, rb = r1;
      const bool a_below = rotated_less(rot, r[a], r[b]);
      while (tb - ta > opts.t_tol) {
        const double tm = 0.5 * (ta + tb);
        auto rm = cont.advance(ra, path(tm));
        if (!rm) underflow(tm, "event localization");
        if (rotated_less(rot, (*rm)[a], (*rm)[b]) == a_below) {
          ta = tm;
          ra = std::move(*rm);
        } else {
          tb = tm;
          rb = std::move(*rm);
        }
      }
      CrossingEvent ev;
      ev.t = 0.5 * (ta + tb);
      ev.z = path(ev.t);
      ev.position_index = std::min(pos0[a], pos0[b]) + 1;
      // The root that was below moves up: it has the larger Re derivative.
      ev.strand1 = a_below ? a : b;
      ev.strand2 = a_below ? b : a;
      ev.u1 = rot * 0.5 * (ra[ev.strand1] + rb[ev.strand1]);
      ev.u2 = rot * 0.5 * (ra[ev.strand2] + rb[ev.strand2]);
      ev.sign = ev.u2.imag() > ev.u1.imag() ? 1 : -1;
      result.events.push_back(ev);
    }

    r = r1;
    t = t1;
    ++result.steps;
    h = std::min(2.0 * h, opts.max_step);
  }

  std::stable_sort(result.events.begin(), result.events.end(),
                   [&](const CrossingEvent& x, const CrossingEvent& y) {
                     if (std::abs(x.t - y.t) > opts.t_tol) return x.t < y.t;
                     return x.position_index < y.position_index;
                   });
  result.end_roots = r;
  return result;
}

TrackResult track_roots(const BivariatePolynomial& f, const BranchData& branch,
                        const LoopPath& loop, const TrackOptions& opts) {
  auto pts = branch.locations();
  if (!pts.empty()) {
    double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
    auto grow = [&](cplx z) {
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    };
    for (cplx z : pts) grow(z);
    for (const auto& s : loop.polyline()) grow(s.z);
    const double floor = opts.clearance_floor * std::hypot(x1 - x0, y1 - y0);
    const double clearance = loop.clearance(pts);
    if (clearance < floor)
      throw InputError("loop passes within " + std::to_string(clearance) +
                       " of the branch locus (floor " + std::to_string(floor) + ")");
  }
  // point_at is arc-length parametrized, so |dz/dt| = length
  const double len = loop.length();
  auto cap = [&](double t) {
    const cplx z = loop.point_at(t);
    double d = std::numeric_limits<double>::infinity();
    for (cplx p : pts) d = std::min(d, std::abs(z - p));
    double h = 0.25 * d / len;
    // steps end on primitive joins, so no step straddles a corner
    for (std::size_t i = 1; i < loop.primitives().size(); ++i) {
      const double s = loop.primitive_start(i);
      if (s > t + 1e-12) {
        h = std::min(h, s - t);
        break;
      }
    }
    return h;
  };
  return track_path(f, branch.rotation_theta, [&](double t) { return loop.point_at(t); }, opts,
                    StepCap{cap});
}

BraidWord word_from_events(int strands, std::span<const CrossingEvent> events) {
  BraidWord w(strands);
  for (const auto& e : events) w.push_back({e.position_index, e.sign});
  return w;
}

BraidWord braid_along(const BivariatePolynomial& f, const BranchData& branch,
                      const LoopPath& loop, const TrackOptions& opts) {
  auto r = track_roots(f, branch, loop, opts);
  return word_from_events(f.n(), r.events);
}

Permutation continuation_permutation(const TrackResult& r, double theta) {
  const cplx rot = std::polar(1.0, theta);
  const int n = static_cast<int>(r.start_roots.size());
  auto pos_start = positions_of(order_of(r.start_roots, rot));
  // Identify each continued end root with the nearest start root.
  std::vector<int> lands_on(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int j = 1; j < n; ++j)
      if (std::abs(r.end_roots[i] - r.start_roots[j]) < std::abs(r.end_roots[i] - r.start_roots[best]))
        best = j;
    lands_on[i] = best;
  }
  std::vector<int> images(n);
  for (int id = 0; id < n; ++id) images[pos_start[lands_on[id]]] = pos_start[id];
  return Permutation(std::move(images));
}

int enclosed_count(const LoopPath& loop, const BranchData& branch) {
  auto pts = branch.locations();
  std::vector<int> mult;
  for (const auto& p : branch.points) mult.push_back(p.multiplicity);
  return enclosed_count(loop, pts, mult);
}

namespace {

struct Detour {
  cplx center;
  double radius;
  double s_in, s_out;  // distances along the stick where the detour starts/ends
};

// Straight stick a -> b that bends around obstacles within rho of it,
// passing each on the left of the travel direction.
std::vector<PathPrimitive> build_stick(cplx a, cplx b, std::span<const cplx> obstacles, double rho) {
  const double len = std::abs(b - a);
  const cplx u = (b - a) / len;
  std::vector<Detour> detours;
  for (cplx q : obstacles) {
    const cplx rel = (q - a) * std::conj(u);
    const double s = rel.real(), d = rel.imag();
    if (std::abs(d) >= rho || s <= -rho || s >= len + rho) continue;
    const double half = std::sqrt(rho * rho - d * d);
    detours.push_back({q, rho, s - half, s + half});
  }
  std::sort(detours.begin(), detours.end(),
            [](const Detour& x, const Detour& y) { return x.s_in < y.s_in; });
  // Merge overlapping detours into one circle around both.
  std::vector<Detour> merged;
  for (const auto& dt : detours) {
    if (!merged.empty() && dt.s_in <= merged.back().s_out) {
      auto& m = merged.back();
      cplx c = 0.5 * (m.center + dt.center);
      double r = 0.5 * std::abs(m.center - dt.center) + std::max(m.radius, dt.radius);
      const cplx rel = (c - a) * std::conj(u);
      if (std::abs(rel.imag()) >= r) continue;
      const double half = std::sqrt(r * r - rel.imag() * rel.imag());
      m = {c, r, rel.real() - half, rel.real() + half};
    } else {
      merged.push_back(dt);
    }
  }

  std::vector<PathPrimitive> out;
  cplx cur = a;
  for (const auto& dt : merged) {
    if (dt.s_in <= 0.0 || dt.s_out >= len)
      throw InputError("stick detour around a branch point does not fit; use a smaller radius "
                       "or move the basepoint");
    cplx p_in = a + dt.s_in * u, p_out = a + dt.s_out * u;
    if (std::abs(p_in - cur) > 0.0) out.push_back(Segment{cur, p_in});
    double ang_in = std::arg(p_in - dt.center);
    double ang_out = std::arg(p_out - dt.center);
    // Clockwise sweep keeps the obstacle on the right, the path on the left.
    while (ang_out >= ang_in) ang_out -= 2.0 * M_PI;
    while (ang_out < ang_in - 2.0 * M_PI) ang_out += 2.0 * M_PI;
    out.push_back(Arc{dt.center, dt.radius, ang_in, ang_out});
    cur = p_out;
  }
  out.push_back(Segment{cur, b});
  return out;
}

}  // namespace

double max_lollipop_radius(const BranchData& branch, std::span<const int> targets, cplx basepoint) {
  double best = std::numeric_limits<double>::infinity();
  for (int ti : targets) {
    if (ti < 0 || ti >= static_cast<int>(branch.points.size()))
      throw InputError("lollipop target index " + std::to_string(ti) + " out of range");
    cplx t = branch.points[ti].z;
    best = std::min(best, std::abs(basepoint - t));
    for (std::size_t j = 0; j < branch.points.size(); ++j)
      if (static_cast<int>(j) != ti) best = std::min(best, 0.5 * std::abs(branch.points[j].z - t));
  }
  return best;
}

LollipopLoop lollipop_loop(const BranchData& branch, const LollipopSpec& spec) {
  if (spec.targets.empty()) throw InputError("lollipop needs at least one target");
  if (!(spec.radius > 0.0)) throw InputError("lollipop radius must be positive");
  const double rmax = max_lollipop_radius(branch, spec.targets, spec.basepoint);
  if (!(spec.radius < rmax))
    throw InputError("lollipop radius " + std::to_string(spec.radius) +
                     " infeasible; circles collide. Largest feasible radius is below " +
                     std::to_string(rmax));
  auto pts = branch.locations();
  for (cplx p : pts)
    if (std::abs(p - spec.basepoint) <= spec.radius)
      throw InputError("basepoint too close to a branch point for this radius");

  std::vector<PathPrimitive> prims;
  std::vector<FactorMarker> markers;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // primitive ranges per part
  for (int ti : spec.targets) {
    const cplx target = pts[ti];
    const cplx entry = target + spec.radius * (spec.basepoint - target) / std::abs(spec.basepoint - target);
    std::vector<cplx> obstacles;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (static_cast<int>(j) != ti) obstacles.push_back(pts[j]);
    auto stick = build_stick(spec.basepoint, entry, obstacles, spec.radius);

    std::size_t s0 = prims.size();
    prims.insert(prims.end(), stick.begin(), stick.end());
    std::size_t s1 = prims.size();
    const double phi = std::arg(entry - target);
    prims.push_back(Arc{target, spec.radius, phi, phi + 2.0 * M_PI});
    std::size_t s2 = prims.size();
    for (auto it = stick.rbegin(); it != stick.rend(); ++it) prims.push_back(reversed(*it));
    std::size_t s3 = prims.size();
    ranges.push_back({s0, s1});
    ranges.push_back({s1, s2});
    ranges.push_back({s2, s3});
  }

  LollipopLoop out{LoopPath(std::move(prims)), {}, spec};
  auto t_at = [&](std::size_t i) {
    return i < out.path.primitives().size() ? out.path.primitive_start(i) : 1.0;
  };
  for (std::size_t k = 0; k < spec.targets.size(); ++k) {
    FactorMarker m;
    m.target = spec.targets[k];
    m.out_begin = t_at(ranges[3 * k].first);
    m.out_end = t_at(ranges[3 * k].second);
    m.circle_begin = t_at(ranges[3 * k + 1].first);
    m.circle_end = t_at(ranges[3 * k + 1].second);
    m.back_begin = t_at(ranges[3 * k + 2].first);
    m.back_end = t_at(ranges[3 * k + 2].second);
    out.markers.push_back(m);
  }
  if (out.path.clearance(pts) < 0.5 * spec.radius)
    throw InputError("lollipop loop passes too close to a branch point");
  return out;
}

QpResult qp_factorization(const BivariatePolynomial& f, const BranchData& branch,
                          const LollipopSpec& spec, const TrackOptions& opts) {
  const int n = f.n();
  LollipopSpec current = spec;
  nlohmann::json attempts = nlohmann::json::array();
  for (int attempt = 0; attempt <= 4; ++attempt, current.radius *= 0.5) {
    LollipopLoop loop = lollipop_loop(branch, current);
    TrackResult tr = track_roots(f, branch, loop.path, opts);

    QuasipositiveFactorization qpf{n, {}};
    bool circles_ok = true;
    for (const auto& m : loop.markers) {
      std::vector<CrossingEvent> out_ev, circle_ev, back_ev;
      for (const auto& e : tr.events) {
        if (e.t >= m.out_begin && e.t < m.out_end)
          out_ev.push_back(e);
        else if (e.t >= m.circle_begin && e.t < m.circle_end)
          circle_ev.push_back(e);
        else if (e.t >= m.back_begin && e.t <= m.back_end)
          back_ev.push_back(e);
      }
      // Edges that cut through the disc without reaching the target are
      // crossed twice, so the circle word is u sigma_k u^-1 as a free word.
      const BraidWord circle = free_reduce(word_from_events(n, circle_ev));
      const auto& cl = circle.letters();
      std::size_t peel = 0;
      while (2 * peel + 1 < cl.size() && cl[peel] == cl[cl.size() - 1 - peel].inverse()) ++peel;
      if (cl.size() != 2 * peel + 1) {
        attempts.push_back({{"radius", current.radius}, {"target", m.target},
                            {"circle_word", circle.to_string()}});
        circles_ok = false;
        break;
      }
      const BraidLetter gen = cl[peel];
      if (gen.sign != 1)
        throw NumericalError("small circle around a branch point read a negative letter; "
                             "the crossing sign convention is broken",
                             nlohmann::json{{"target", m.target}, {"circle_word", circle.to_string()}}.dump());
      BraidWord alpha = word_from_events(n, out_ev);
      BraidWord back = word_from_events(n, back_ev);
      if (!(free_reduce(back) == free_reduce(alpha.inverse())))
        throw NumericalError("return stick does not retrace the outgoing stick",
                             nlohmann::json{{"out", alpha.to_string()}, {"back", back.to_string()},
                                            {"target", m.target}, {"radius", current.radius}}.dump());
      for (std::size_t i = 0; i < peel; ++i) alpha.push_back(cl[i]);
      qpf.factors.push_back({alpha, gen.index});
    }
    if (!circles_ok) continue;

    BraidWord word = word_from_events(n, tr.events);
    if (!(free_reduce(expand_factorization(qpf)) == free_reduce(word)))
      throw NumericalError("factorization does not expand to the loop word",
                           nlohmann::json{{"word", word.to_string()}}.dump());
    return {std::move(qpf), std::move(loop), std::move(word)};
  }
  throw NumericalError("a lollipop circle crossed B+ more than once after shrinking",
                       nlohmann::json{{"attempts", attempts}}.dump());
}

}  // namespace qpbraid
