#include "qpbraid/realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <json.hpp>

#include "qpbraid/errors.hpp"

namespace qpbraid {

namespace {

BivariatePolynomial build_curve(int n, double eps) {
  auto P = UnivariatePolynomial::constant(1.0);
  for (int j = 1; j < n; ++j) P = P * UnivariatePolynomial(std::vector<cplx>{cplx(-j), 1.0});
  // P(w)(w - z): the w^m coefficient is P_{m-1} - z P_m.
  std::vector<UnivariatePolynomial> c;
  for (int m = 0; m <= n; ++m) {
    cplx lo = m >= 1 ? P.coeff(m - 1) : cplx{}, hi = P.coeff(m);
    c.push_back(UnivariatePolynomial(std::vector<cplx>{lo, -hi}));
  }
  c[0] = c[0] + UnivariatePolynomial::constant(eps);
  return BivariatePolynomial(c);
}

bool generic_at(const BivariatePolynomial& f) {
  try {
    auto b = branch_points(f);
    return check_genericity(f, b).generic;
  } catch (const std::exception&) {
    return false;
  }
}

double accepted_eps(int n, double eps) {
  if (n < 2) throw InputError("realization needs n >= 2");
  if (!(std::abs(eps) > 0.0 && std::abs(eps) <= 0.1))
    throw InputError("epsilon must satisfy 0 < |epsilon| <= 0.1");
  for (int k = 0; k <= 8; ++k, eps /= 2)
    if (generic_at(build_curve(n, eps))) return eps;
  throw NumericalError("realization curve is not generic for any tried epsilon",
                       nlohmann::json{{"n", n}, {"last_epsilon", eps * 2}}.dump());
}

// Stick through waypoints to a ccw circle around p, then back the same way.
LoopPath stick_circle(std::vector<cplx> way, cplx p, double r) {
  const cplx prev = way.back();
  const cplx entry = p + r * (prev - p) / std::abs(prev - p);
  way.push_back(entry);
  std::vector<PathPrimitive> prims;
  for (std::size_t i = 0; i + 1 < way.size(); ++i) prims.push_back(Segment{way[i], way[i + 1]});
  const double a = std::arg(entry - p);
  prims.push_back(Arc{p, r, a, a + 2.0 * M_PI});
  for (std::size_t i = way.size() - 1; i > 0; --i) prims.push_back(Segment{way[i], way[i - 1]});
  return LoopPath(std::move(prims));
}

LoopPath concatenate(const std::vector<LoopPath>& parts) {
  std::vector<PathPrimitive> prims;
  for (const auto& p : parts) prims.insert(prims.end(), p.primitives().begin(), p.primitives().end());
  return LoopPath(std::move(prims));
}

TrackOptions options_for(std::size_t pieces) {
  TrackOptions o;
  o.max_step = 1.0 / (256.0 * std::max<std::size_t>(1, pieces));
  return o;
}

// Reduced word of the shape alpha sigma_k alpha^-1 with alpha over sigma_1..sigma_{k-1}.
std::optional<BraidWord> conjugator_of(const BraidWord& reduced, int k) {
  const auto& L = reduced.letters();
  if (L.size() % 2 == 0) return std::nullopt;
  const std::size_t a = L.size() / 2;
  if (!(L[a] == BraidLetter{k, 1})) return std::nullopt;
  std::vector<BraidLetter> alpha(L.begin(), L.begin() + a);
  for (std::size_t i = 0; i < a; ++i) {
    if (alpha[i].index >= k) return std::nullopt;
    if (!(L[L.size() - 1 - i] == alpha[i].inverse())) return std::nullopt;
  }
  return BraidWord(reduced.strands(), alpha);
}

Analysis analyze_curve(const BivariatePolynomial& f, double eps) {
  try {
    return analyze(f, eps, 0.0);
  } catch (const NumericalError&) {
    return analyze(f, eps);
  }
}

}  // namespace

BivariatePolynomial realization_curve(int n, double eps) {
  return build_curve(n, accepted_eps(n, eps));
}

RealizationPlan start_plan(int n, double eps) {
  eps = accepted_eps(n, eps);
  RealizationPlan plan{n, {}, eps, analyze_curve(build_curve(n, eps), eps), {}, {}};
  for (int j = 1; j < n; ++j) plan.p_roots.push_back(j);
  if (plan.analysis.branch.perturbation)
    throw NumericalError("realization curve needed a perturbation");
  const auto pts = plan.analysis.branch.locations();
  if (static_cast<int>(pts.size()) != 2 * (n - 1))
    throw NumericalError("realization curve has unexpected branch count",
                         nlohmann::json{{"count", pts.size()}}.dump());
  double x0 = pts.front().real(), x1 = x0;
  for (cplx z : pts) x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real());
  plan.basepoint = {x0 - 2.0 * (x1 - x0), 0.0};
  return plan;
}

GeneratorLoop generator_loop(const RealizationPlan& plan, int k) {
  if (k < 1 || k >= plan.n) throw InputError("generator index out of range");
  if (static_cast<int>(plan.generator_loops.size()) < k - 1)
    throw InputError("generator loops must be built in order");
  const auto& branch = plan.branch();
  const auto pts = branch.locations();  // batch j holds points 2j-2, 2j-1

  struct Candidate {
    LoopPath raw;
    BraidWord reduced;
    std::optional<BraidWord> alpha;
  };
  std::vector<Candidate> candidates;
  nlohmann::json tried = nlohmann::json::array();
  const double heights[] = {0.5, -0.5, 1.5, -1.5};
  for (int tp = 0; tp < 2; ++tp) {
    const cplx p = pts[2 * (k - 1) + tp];
    double dmin = std::numeric_limits<double>::infinity();
    for (cplx q : pts)
      if (q != p) dmin = std::min(dmin, std::abs(q - p));
    for (double m : heights) {
      if (candidates.size() >= 8) break;
      std::vector<cplx> way{plan.basepoint};
      for (int j = 1; j < k; ++j) {
        const cplx q1 = pts[2 * j - 2], q2 = pts[2 * j - 1];
        const cplx c = 0.5 * (q1 + q2);
        const double s = 0.5 * std::abs(q2 - q1);
        // Conjugate pairs are passed through the gap, just off the axis.
        const bool real_pair = std::abs(q1.imag()) < 1e-6 * std::max(1.0, s);
        way.push_back({c.real(), (real_pair ? m : std::copysign(0.2, m)) * s});
      }
      LoopPath raw = stick_circle(way, p, 0.25 * dmin);
      try {
        auto red = free_reduce(braid_along(plan.f(), branch, raw));
        tried.push_back({{"target", tp}, {"height", m}, {"word", red.to_string()}});
        candidates.push_back({raw, red, conjugator_of(red, k)});
      } catch (const std::exception& e) {
        tried.push_back({{"target", tp}, {"height", m}, {"error", e.what()}});
      }
    }
  }

  // Shortest conjugator wins; ties keep template order.
  const Candidate* best = nullptr;
  for (const auto& c : candidates)
    if (c.alpha && (!best || c.alpha->size() < best->alpha->size())) best = &c;
  if (best) {
    LoopPath path = best->raw;
    std::size_t pieces = 1;
    if (!best->alpha->empty()) {
      const auto& alpha = *best->alpha;
      path = concatenate({loop_for_word(plan, alpha.inverse()), best->raw, loop_for_word(plan, alpha)});
      pieces += 2 * alpha.size();
    }
    auto word = braid_along(plan.f(), branch, path, options_for(pieces));
    if (free_reduce(word) == BraidWord(plan.n, {{k, 1}})) return {path, word};
    tried.push_back({{"wrapped", word.to_string()}});
  }
  throw NumericalError("no generator loop template verified",
                       nlohmann::json{{"k", k}, {"candidates", tried}}.dump());
}

RealizationPlan make_plan(int n, double eps) {
  auto plan = start_plan(n, eps);
  for (int k = 1; k < n; ++k) plan.generator_loops.push_back(generator_loop(plan, k));
  return plan;
}

LoopPath loop_for_word(const RealizationPlan& plan, const BraidWord& word) {
  if (word.empty()) throw InputError("empty word has no loop");
  std::vector<LoopPath> parts;
  for (const auto& l : word.letters()) {
    if (l.index > static_cast<int>(plan.generator_loops.size()))
      throw InputError("no generator loop for sigma_" + std::to_string(l.index));
    const auto& g = plan.generator_loops[l.index - 1].path;
    parts.push_back(l.sign > 0 ? g : g.reversed());
  }
  return concatenate(parts);
}

Realization realize(const QuasipositiveFactorization& qpf, double eps) {
  qpf.validate();
  return realize(qpf, make_plan(qpf.strands, eps));
}

Realization realize(const QuasipositiveFactorization& qpf, const RealizationPlan& plan) {
  qpf.validate();
  if (qpf.strands != plan.n) throw InputError("plan and factorization strand counts differ");
  if (qpf.factors.empty()) throw InputError("factorization has no factors");
  const BraidWord expanded = expand_factorization(qpf);
  const LoopPath loop = loop_for_word(plan, expanded);
  const auto verification =
      braid_along(plan.f(), plan.branch(), loop, options_for(expanded.size()));
  const bool same = free_reduce(verification) == free_reduce(expanded);
  const bool count = exponent_sum(verification) == static_cast<int>(qpf.factors.size());
  if (!same || !count)
    throw NumericalError("realization verification mismatch",
                         nlohmann::json{{"expected", expanded.to_string()},
                                        {"verification", verification.to_string()}}
                             .dump());
  return {plan.f(), plan.branch(), loop, verification};
}

}  // namespace qpbraid
