// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "qpbraid/bplus_graph.hpp"
#include "qpbraid/errors.hpp"
#include "qpbraid/expr_parser.hpp"
#include "qpbraid/json_io.hpp"
#include "qpbraid/monodromy.hpp"
#include "qpbraid/realization.hpp"

using namespace qpbraid;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = s < limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), s, limit_s, in_time ? "" : ", too slow");
  std::fflush(stdout);
}

BraidWord W(int n, const char* text) { return BraidWord::parse(n, text); }

Analysis A(const std::string& s) { return analyze(parse_polynomial_expression(s), 0.1); }

LoopPath arc_circle(cplx c, double r, double start) {
  return LoopPath({Arc{c, r, start, start + 2 * M_PI}});
}

double spread(const BranchData& b) {
  double s = 1.0;
  for (const auto& p : b.points) s = std::max(s, std::abs(p.z));
  return s;
}

// Random monic f with w-degree 2..4 and integer coefficients in [-2, 2] on
// z^0..z^2, retried until the analysis succeeds and B is nonempty.
Analysis random_curve(std::mt19937& rng, std::string& text) {
  std::uniform_int_distribution<int> deg(2, 4), c(-2, 2);
  for (;;) {
    const int n = deg(rng);
    std::ostringstream o;
    o << "w^" << n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= 2; ++j) {
        const int v = c(rng);
        if (v != 0) o << (v > 0 ? " + " : " - ") << std::abs(v) << "*w^" << i << "*z^" << j;
      }
    text = o.str();
    try {
      auto a = A(text);
      if (!a.branch.points.empty() && spread(a.branch) < 20) return a;
    } catch (const std::runtime_error&) {
    }
  }
}

BraidWord cyc(const BraidWord& w) { return cyclic_reduce(free_reduce(w)); }

// ---- criterion 8 oracles -------------------------------------------------

BraidWord random_word(std::mt19937& rng, int n, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), idx(1, n - 1), sgn(0, 1);
  BraidWord w(n);
  for (int i = len(rng); i > 0; --i) w.push_back({idx(rng), sgn(rng) ? 1 : -1});
  return w;
}

// Cancels a randomly chosen adjacent inverse pair until none is left.
BraidWord reduce_random_order(const BraidWord& w, std::mt19937& rng) {
  auto L = w.letters();
  for (;;) {
    std::vector<std::size_t> pairs;
    for (std::size_t i = 0; i + 1 < L.size(); ++i)
      if (L[i + 1] == L[i].inverse()) pairs.push_back(i);
    if (pairs.empty()) break;
    const std::size_t i = pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)];
    L.erase(L.begin() + i, L.begin() + i + 2);
  }
  return BraidWord(w.strands(), L);
}

int components_by_tracking(const BraidWord& w) {
  const int n = w.strands();
  std::vector<int> at(n);
  for (int p = 0; p < n; ++p) at[p] = p;
  for (const auto& l : w.letters()) std::swap(at[l.index - 1], at[l.index]);
  std::vector<char> seen(n, 0);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++c;
    for (int t = s; !seen[t]; t = at[t]) seen[t] = 1;
  }
  return c;
}

int letter_sum(const BraidWord& w) {
  int s = 0;
  for (const auto& l : w.letters()) s += l.sign;
  return s;
}

// ---- shared state between criteria 3 and 4 -----------------------------

struct LollipopCase {
  Analysis analysis;
  LollipopSpec spec;
  BraidWord word;
};
std::vector<LollipopCase> lollipops;

}  // namespace

int main() {
  criterion(1, "w^2 - z around the origin", 1.0, [] {
    auto a = A("w^2 - z");
    auto ccw = braid_along(a.f, a.branch, LoopPath::circle({0, 0}, 1.0));
    auto cw = braid_along(a.f, a.branch, LoopPath::circle({0, 0}, 1.0, false));
    Outcome o{ccw == W(2, "s1") && cw == W(2, "s1^-1"), ""};
    o.detail = "ccw '" + ccw.to_string() + "', cw '" + cw.to_string() + "'";
    return o;
  });

  criterion(2, "eight-point curve, frozen loop", 10.0, [] {
    auto a = A("w^3 - 3*w + 2*z^4");
    auto loop = loop_from_json(read_json_file(std::string(QPBRAID_FIXTURE_DIR) + "/eight_point_loop.json"));
    auto w = free_reduce(braid_along(a.f, a.branch, loop));
    const bool ok = cyclically_equal(w, W(3, "s1 s2 s2 s2 s1 s2^-1 s2^-1 s2^-1")) &&
                    closure_components(w) == 1 && exponent_sum(w) == 2;
    return Outcome{ok, "'" + w.to_string() + "', components " + std::to_string(closure_components(w)) +
                           ", exponent sum " + std::to_string(exponent_sum(w))};
  });

  criterion(3, "exponent sum equals enclosed count", 300.0, [] {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    int cases = 0, errors = 0, mismatches = 0, circles = 0;
    std::string text, first_bad;
    while (cases < 120) {
      auto a = random_curve(rng, text);
      const auto pts = a.branch.locations();
      const double s = spread(a.branch);
      for (int rep = 0; rep < 2; ++rep) {
        LoopPath loop;
        std::optional<LollipopSpec> spec;
        if (rep == 0) {
          // random circle with clearance
          const cplx c(s * (2 * u(rng) - 1), s * (2 * u(rng) - 1));
          loop = arc_circle(c, s * (0.1 + 1.4 * u(rng)), 2 * M_PI * u(rng));
          if (loop.clearance(pts) < 0.02 * s) continue;
          ++circles;
        } else {
          // random lollipop from a generic basepoint outside B's box
          std::vector<int> targets;
          for (std::size_t j = 0; j < pts.size(); ++j)
            if (u(rng) < 0.5) targets.push_back(static_cast<int>(j));
          if (targets.empty()) targets.push_back(static_cast<int>(u(rng) * pts.size()));
          const cplx base = std::polar(1.5 * s + 0.5, 2 * M_PI * u(rng));
          const double rmax = max_lollipop_radius(a.branch, targets, base);
          if (!(rmax > 0)) continue;
          spec = LollipopSpec{base, targets, 0.5 * rmax};
          try {
            loop = lollipop_loop(a.branch, *spec).path;
          } catch (const InputError&) {
            continue;  // infeasible construction, not a tracking case
          }
        }
        ++cases;
        try {
          auto w = braid_along(a.f, a.branch, loop);
          if (exponent_sum(w) != enclosed_count(loop, a.branch)) {
            ++mismatches;
            if (first_bad.empty()) first_bad = text;
            if (std::getenv("QPBRAID_DEBUG")) {
              std::fprintf(stderr, "MISMATCH %s kind=%s word=%s enclosed=%d theta=%g margin=%g pert=%d\n  loop=%s\n  B=",
                           text.c_str(), spec ? "lollipop" : "circle", w.to_string().c_str(),
                           enclosed_count(loop, a.branch), a.branch.rotation_theta, a.branch.rotation_margin,
                           a.branch.perturbation.has_value(), to_json(loop).dump().c_str());
              for (const auto& p : a.branch.points) std::fprintf(stderr, "(%g,%g)x%d ", p.z.real(), p.z.imag(), p.multiplicity);
              std::fprintf(stderr, "\n");
            }
          }
          if (spec) lollipops.push_back({a, *spec, w});
        } catch (const std::runtime_error& e) {
          ++errors;
          if (std::getenv("QPBRAID_DEBUG"))
            std::fprintf(stderr, "C3 ERROR %s: %s\n", spec ? "lollipop" : "circle", e.what());
        }
      }
    }
    const double rate = static_cast<double>(errors) / cases;
    std::ostringstream d;
    d << cases << " cases (" << circles << " circles, " << cases - circles << " lollipops), "
      << mismatches << " mismatches, " << errors << " errors (" << 100 * rate << "%)";
    if (!first_bad.empty()) d << ", first mismatch on " << first_bad;
    return Outcome{cases >= 100 && mismatches == 0 && rate <= 0.05, d.str()};
  });

  criterion(4, "lollipop factorizations are quasipositive", 300.0, [] {
    int ok = 0, bad = 0;
    std::string why;
    for (const auto& c : lollipops) {
      try {
        auto q = qp_factorization(c.analysis.f, c.analysis.branch, c.spec);
        const bool same = free_reduce(expand_factorization(q.factorization)) == free_reduce(q.word) &&
                          q.word == braid_along(c.analysis.f, c.analysis.branch, q.loop.path) &&
                          q.factorization.factors.size() == c.spec.targets.size();
        same ? ++ok : ++bad;
      } catch (const NumericalError& e) {
        ++bad;
        if (why.empty()) why = e.what();
        if (std::getenv("QPBRAID_DEBUG"))
          std::fprintf(stderr, "QP FAIL %s base=(%.17g,%.17g) targets=%s radius=%g: %s %s\n", c.analysis.f.to_string().c_str(),
                       c.spec.basepoint.real(), c.spec.basepoint.imag(),
                       nlohmann::json(c.spec.targets).dump().c_str(), c.spec.radius, e.what(),
                       e.diagnostics().c_str());
      } catch (const std::runtime_error& e) {
        ++bad;
        if (why.empty()) why = e.what();
      }
    }
    std::string d = std::to_string(ok) + "/" + std::to_string(lollipops.size()) + " lollipops verified";
    if (!why.empty()) d += ", first error: " + why;
    return Outcome{bad == 0 && !lollipops.empty(), d};
  });

  criterion(5, "realization round trip", 120.0, [] {
    std::vector<QuasipositiveFactorization> corpus;
    for (int n = 2; n <= 4; ++n) {
      std::vector<BraidWord> conj{BraidWord(n)};
      std::vector<BraidLetter> letters;
      for (int k = 1; k < n; ++k) letters.push_back({k, 1}), letters.push_back({k, -1});
      for (const auto& a : letters) {
        BraidWord w1(n);
        w1.push_back(a);
        conj.push_back(w1);
        for (const auto& b : letters) {
          BraidWord w2 = w1;
          w2.push_back(b);
          conj.push_back(w2);
        }
      }
      for (const auto& c : conj)
        for (int k = 1; k < n; ++k) corpus.push_back({n, {{c, k}}});
    }
    corpus.push_back({3, {{W(3, ""), 1}, {W(3, ""), 1}, {W(3, ""), 2}, {W(3, "s2"), 1}}});
    corpus.push_back({3, {{W(3, ""), 1}, {W(3, "s2 s2 s2"), 1}}});

    std::vector<RealizationPlan> plans;
    for (int n = 2; n <= 4; ++n) plans.push_back(make_plan(n));
    int ok = 0;
    std::string first_bad;
    for (const auto& q : corpus) {
      auto r = realize(q, plans[q.strands - 2]);
      if (free_reduce(r.verification) == free_reduce(expand_factorization(q)))
        ++ok;
      else if (first_bad.empty())
        first_bad = expand_factorization(q).to_string();
    }
    std::string d = std::to_string(ok) + "/" + std::to_string(corpus.size()) + " factorizations";
    if (!first_bad.empty()) d += ", first mismatch " + first_bad;
    return Outcome{ok == static_cast<int>(corpus.size()), d};
  });

  criterion(6, "B+ crossings spell the braid word", 600.0, [] {
    struct Fixture {
      const char* poly;
      Region region;
      int res;
    };
    const Fixture fixtures[] = {{"w^2 - z", {-2, -2, 2, 2}, 256},
                                {"w^3 - 3*w + 2*z^4", {-2, -2, 2, 2}, 192},
                                {"w*(w-1)*(w+1)*(w-z) + 0.05", {-3, -3, 3, 3}, 128}};
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0, 1);
    std::ostringstream d;
    bool ok = true;
    for (const auto& fx : fixtures) {
      auto a = A(fx.poly);
      auto g = sample_bplus(a.f, a.branch, fx.region, fx.res);
      const double w = fx.region.x1 - fx.region.x0;
      const cplx mid(0.5 * (fx.region.x0 + fx.region.x1), 0.5 * (fx.region.y0 + fx.region.y1));
      int agree = 0, differ = 0, rejected = 0;
      while (agree + differ < 25 && rejected < 2000) {
        // circles and random star polygons around the middle of the region
        LoopPath loop;
        if (u(rng) < 0.5) {
          const cplx c = mid + cplx(0.5 * w * (u(rng) - 0.5), 0.5 * w * (u(rng) - 0.5));
          loop = arc_circle(c, 0.05 * w + 0.25 * w * u(rng), 2 * M_PI * u(rng));
        } else {
          std::vector<cplx> v;
          const int m = 5 + static_cast<int>(6 * u(rng));
          const cplx c = mid + cplx(0.3 * w * (u(rng) - 0.5), 0.3 * w * (u(rng) - 0.5));
          for (int k = 0; k < m; ++k)
            v.push_back(c + std::polar(w * (0.08 + 0.25 * u(rng)), 2 * M_PI * (k + 0.5 * u(rng)) / m));
          loop = LoopPath::polygon(v);
        }
        if (loop.clearance(a.branch.locations()) < 0.03 * w) {
          ++rejected;
          continue;
        }
        BraidWord seen(a.f.n());
        try {
          seen = crossings_of(g, loop);
        } catch (const NumericalError&) {
          ++rejected;  // enters a flagged cell or leaves the region
          continue;
        }
        if (free_reduce(seen) == free_reduce(braid_along(a.f, a.branch, loop)))
          ++agree;
        else
          ++differ;
      }
      ok = ok && differ == 0 && agree >= 20;
      d << fx.poly << ": " << agree << " agree, " << differ << " differ; ";
      if (fx.res == 256) {
        int off = 0;
        for (const auto& e : g.edges)
          for (cplx p : e.points)
            if (std::abs(p.imag()) > g.cell_height() || p.real() > g.cell_width()) ++off;
        ok = ok && off == 0 && !g.edges.empty();
        d << off << " points off the negative real axis; ";
      }
    }
    return Outcome{ok, d.str()};
  });

  criterion(7, "refinement and isotopy invariance", 300.0, [] {
    struct FixtureLoop {
      const char* poly;
      std::vector<cplx> vertices;
    };
    auto ngon = [](cplx c, double r, double start, int m) {
      std::vector<cplx> v;
      for (int k = 0; k < m; ++k) v.push_back(c + std::polar(r, start + 2 * M_PI * k / m));
      return v;
    };
    std::vector<FixtureLoop> loops{
        {"w^2 - z", ngon({0, 0}, 1.0, 0.1, 48)},
        {"w^3 - 3*w + 2*z", ngon({0, 0}, 3.0, 0.5, 64)},
        {"w*(w-1)*(w+1)*(w-z) + 0.05", ngon({0, 0}, 2.2, 0.2, 64)}};
    {
      auto fixture = loop_from_json(read_json_file(std::string(QPBRAID_FIXTURE_DIR) + "/eight_point_loop.json"));
      std::vector<cplx> v;
      for (const auto& p : fixture.primitives()) v.push_back(start_point(p));
      loops.push_back({"w^3 - 3*w + 2*z^4", v});
    }
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    int refine_ok = 0, jitter_ok = 0, jitter_total = 0;
    std::string first_bad;
    for (const auto& fl : loops) {
      auto a = A(fl.poly);
      auto loop = LoopPath::polygon(fl.vertices);
      TrackOptions half;
      half.max_step /= 2;
      const auto w = braid_along(a.f, a.branch, loop);
      if (w == braid_along(a.f, a.branch, loop, half))
        ++refine_ok;
      else if (first_bad.empty())
        first_bad = std::string("refinement on ") + fl.poly;
      const double clear = loop.clearance(a.branch.locations());
      for (int k = 0; k < 10; ++k) {
        auto v = fl.vertices;
        for (auto& p : v) p += std::polar(0.5 * clear * std::sqrt(u(rng)), 2 * M_PI * u(rng));
        ++jitter_total;
        if (cyclically_equal(cyc(braid_along(a.f, a.branch, LoopPath::polygon(v))), cyc(w)))
          ++jitter_ok;
        else if (first_bad.empty())
          first_bad = std::string("jitter on ") + fl.poly;
      }
    }
    std::string d = std::to_string(refine_ok) + "/" + std::to_string(loops.size()) +
                    " loops refinement-invariant, " + std::to_string(jitter_ok) + "/" +
                    std::to_string(jitter_total) + " jitters isotopy-invariant";
    if (!first_bad.empty()) d += ", first failure: " + first_bad;
    return Outcome{refine_ok == static_cast<int>(loops.size()) && jitter_ok == jitter_total, d};
  });

  criterion(8, "braid property suite", 60.0, [] {
    std::mt19937 rng(8);
    const int N = 1000;
    int idem = 0, confl = 0, conj = 0, expsum = 0, band = 0;
    for (int i = 0; i < N; ++i) {
      const int n = 2 + i % 4;
      auto w = random_word(rng, n, 40);
      auto r = free_reduce(w);
      idem += free_reduce(r) == r;
      confl += reduce_random_order(w, rng) == r;
      auto c = random_word(rng, n, 8);
      auto cw = c * w * c.inverse();
      conj += letter_sum(cw) == letter_sum(w) && exponent_sum(cw) == exponent_sum(w) &&
              closure_components(cw) == components_by_tracking(w) &&
              closure_components(w) == components_by_tracking(w);
      QuasipositiveFactorization q{n, {}};
      std::uniform_int_distribution<int> k(1, n - 1), m(0, 5);
      for (int f = m(rng); f > 0; --f) q.factors.push_back({random_word(rng, n, 4), k(rng)});
      expsum += letter_sum(expand_factorization(q)) == static_cast<int>(q.factors.size());
      band += band_euler_characteristic(q) == n - static_cast<int>(q.factors.size());
    }
    std::ostringstream d;
    d << "of " << N << ": idempotent " << idem << ", confluent " << confl << ", conjugation " << conj
      << ", expansion exponent sum " << expsum << ", band chi " << band;
    return Outcome{idem == N && confl == N && conj == N && expsum == N && band == N, d.str()};
  });

  return failures == 0 ? 0 : 1;
}
