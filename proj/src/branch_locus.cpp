#include "qpbraid/branch_locus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace qpbraid {

std::vector<cplx> BranchData::locations() const {
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.z);
  return out;
}

double BranchData::bounding_diameter() const {
  if (points.size() < 2) return 0.0;
  double x0 = points[0].z.real(), x1 = x0, y0 = points[0].z.imag(), y1 = y0;
  for (const auto& p : points) {
    x0 = std::min(x0, p.z.real());
    x1 = std::max(x1, p.z.real());
    y0 = std::min(y0, p.z.imag());
    y1 = std::max(y1, p.z.imag());
  }
  return std::hypot(x1 - x0, y1 - y0);
}

BranchData branch_points(const BivariatePolynomial& f, const LocusOptions& opts) {
  BranchData b;
  auto disc = discriminant_w(f);
  if (disc.degree() < 1) return b;
  auto rs = roots(disc, opts.roots);
  for (std::size_t i = 0; i < rs.roots.size(); ++i)
    b.points.push_back({rs.roots[i], rs.multiplicity[i]});
  auto key = [](cplx z) { return std::llround(z.real() * 1e9); };
  std::sort(b.points.begin(), b.points.end(), [&](const BranchPoint& x, const BranchPoint& y) {
    if (key(x.z) != key(y.z)) return key(x.z) < key(y.z);
    return x.z.imag() < y.z.imag();
  });
  return b;
}

GenericityReport check_genericity(const BivariatePolynomial& f, const BranchData& b,
                                  const LocusOptions& opts) {
  GenericityReport rep;
  const double scale = std::max(1.0, f.max_abs_coeff());
  auto fail = [&](int idx, std::string why) {
    rep.generic = false;
    rep.issues.push_back({idx, std::move(why)});
  };

  for (std::size_t j = 0; j < b.points.size(); ++j) {
    const auto& p = b.points[j];
    const int idx = static_cast<int>(j);
    if (p.multiplicity != 1) {
      fail(idx, "discriminant root of multiplicity " + std::to_string(p.multiplicity));
      continue;
    }
    RootSet fiber;
    try {
      fiber = fiber_roots(f, p.z, opts.roots);
    } catch (const NumericalError& e) {
      fail(idx, std::string("fiber root finding failed: ") + e.what());
      continue;
    }
    if (static_cast<int>(fiber.roots.size()) != f.n() - 1) {
      fail(idx, "fiber has " + std::to_string(fiber.roots.size()) +
                    " distinct roots, expected " + std::to_string(f.n() - 1));
      continue;
    }
    auto it = std::find(fiber.multiplicity.begin(), fiber.multiplicity.end(), 2);
    if (it == fiber.multiplicity.end()) {
      fail(idx, "fiber has no double root");
      continue;
    }
    cplx w = fiber.roots[it - fiber.multiplicity.begin()];
    if (std::abs(f.d_dz(p.z, w)) <= opts.tangent_floor * scale)
      fail(idx, "curve singular at the double root (df/dz = 0)");
    else if (std::abs(f.d2_dw2(p.z, w)) <= opts.tangent_floor * scale)
      fail(idx, "vertical tangent is not simple (d2f/dw2 = 0)");
  }

  rep.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.points.size(); ++i)
    for (std::size_t j = i + 1; j < b.points.size(); ++j)
      rep.min_separation = std::min(rep.min_separation, std::abs(b.points[i].z - b.points[j].z));
  double zscale = std::max(1.0, b.bounding_diameter());
  for (const auto& p : b.points) zscale = std::max(zscale, std::abs(p.z));
  if (b.points.size() >= 2 && rep.min_separation < opts.separation_floor * zscale)
    fail(-1, "branch points closer than the separation floor");
  return rep;
}

Perturbation perturb_generic(const BivariatePolynomial& f, double budget,
                             const LocusOptions& opts) {
  {
    auto b = branch_points(f, opts);
    if (check_genericity(f, b, opts).generic) return {f, cplx{}};
  }
  if (!(budget > 0.0)) throw InputError("perturbation budget must be positive");

  std::optional<Perturbation> best;
  nlohmann::json tried = nlohmann::json::array();
  for (int k = 0; k <= 40; ++k) {
    const double eps = budget * std::ldexp(1.0, -k);
    bool ok = false;
    try {
      auto g = f.plus_w_term(eps);
      auto b = branch_points(g, opts);
      auto rep = check_genericity(g, b, opts);
      ok = rep.generic;
      tried.push_back({{"eps", eps}, {"generic", ok},
                       {"issues", rep.issues.empty() ? "" : rep.issues.front().reason}});
      if (ok) best = Perturbation{g, cplx{eps, 0.0}};
    } catch (const std::exception& e) {
      tried.push_back({{"eps", eps}, {"error", e.what()}});
    }
    if (!ok && best) break;
  }
  if (!best)
    throw NumericalError("no generic perturbation f + eps*w found within budget",
                         nlohmann::json{{"trials", tried}}.dump());
  return *best;
}

std::vector<std::vector<cplx>> branch_fibers(const BivariatePolynomial& f,
                                            const BranchData& b,
                                            const LocusOptions& opts) {
  std::vector<std::vector<cplx>> out;
  out.reserve(b.points.size());
  for (const auto& p : b.points) out.push_back(fiber_roots(f, p.z, opts.roots).roots);
  return out;
}

double rotation_margin(const std::vector<std::vector<cplx>>& fibers, double theta) {
  const cplx rot = std::polar(1.0, theta);
  double margin = std::numeric_limits<double>::infinity();
  std::vector<double> re;
  for (const auto& fiber : fibers) {
    re.clear();
    for (cplx w : fiber) re.push_back((rot * w).real());
    std::sort(re.begin(), re.end());
    for (std::size_t k = 1; k < re.size(); ++k) margin = std::min(margin, re[k] - re[k - 1]);
  }
  return margin;
}

std::vector<double> rotation_margins(const std::vector<std::vector<cplx>>& fibers,
                                     int samples) {
  std::vector<double> out(samples);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < samples; ++k)
    out[k] = rotation_margin(fibers, 2.0 * M_PI * k / samples);
  return out;
}

std::vector<double> rotation_margins_serial(const std::vector<std::vector<cplx>>& fibers,
                                            int samples) {
  std::vector<double> out(samples);
  for (int k = 0; k < samples; ++k) out[k] = rotation_margin(fibers, 2.0 * M_PI * k / samples);
  return out;
}

RotationChoice select_rotation(const BivariatePolynomial& f, const BranchData& b,
                               const LocusOptions& opts) {
  auto fibers = branch_fibers(f, b, opts);
  bool any_gap = std::any_of(fibers.begin(), fibers.end(),
                             [](const auto& fib) { return fib.size() >= 2; });
  if (!any_gap) return {0.0, std::numeric_limits<double>::infinity()};

  constexpr int kSamples = 720;
  auto margins = rotation_margins(fibers, kSamples);
  int best = 0;
  for (int k = 1; k < kSamples; ++k)
    if (margins[k] > margins[best]) best = k;  // strict: ties keep the smaller theta

  // Golden-section search on the bracket around the best grid point.
  const double h = 2.0 * M_PI / kSamples;
  double lo = (best - 1) * h, hi = (best + 1) * h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = rotation_margin(fibers, x1), f2 = rotation_margin(fibers, x2);
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = rotation_margin(fibers, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = rotation_margin(fibers, x2);
    }
  }
  RotationChoice choice{best * h, margins[best]};
  double refined = 0.5 * (lo + hi);
  double refined_margin = rotation_margin(fibers, refined);
  if (refined_margin > choice.margin) choice = {refined, refined_margin};
  choice.theta = std::fmod(choice.theta + 2.0 * M_PI, 2.0 * M_PI);

  if (margins[0] >= 0.5 * choice.margin) return {0.0, margins[0]};
  return choice;
}

Analysis analyze(const BivariatePolynomial& f, double budget,
                 std::optional<double> theta_override, const LocusOptions& opts) {
  auto pert = perturb_generic(f, budget, opts);
  Analysis a{pert.f, branch_points(pert.f, opts)};
  auto rep = check_genericity(a.f, a.branch, opts);
  if (!rep.generic) {
    nlohmann::json d;
    for (const auto& issue : rep.issues) d["issues"].push_back({{"point", issue.point}, {"reason", issue.reason}});
    throw NumericalError("branch data is not generic", d.dump());
  }
  a.branch.generic = true;
  if (pert.eps != cplx{}) a.branch.perturbation = pert.eps;

  if (theta_override) {
    auto fibers = branch_fibers(a.f, a.branch, opts);
    a.branch.rotation_theta = *theta_override;
    a.branch.rotation_margin = rotation_margin(fibers, *theta_override);
    double scale = 1.0;
    for (const auto& fib : fibers)
      for (cplx w : fib) scale = std::max(scale, std::abs(w));
    // double roots are only accurate to about sqrt(tol)
    if (!(a.branch.rotation_margin > std::sqrt(opts.roots.tol) * scale))
      throw NumericalError("theta override leaves equal real parts over a branch point",
                           nlohmann::json{{"theta", *theta_override}}.dump());
  } else {
    auto choice = select_rotation(a.f, a.branch, opts);
    a.branch.rotation_theta = choice.theta;
    a.branch.rotation_margin = choice.margin;
  }
  return a;
}

}  // namespace qpbraid
