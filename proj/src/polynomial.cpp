#include "qpbraid/polynomial.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace qpbraid {

namespace {

constexpr double kEps = DBL_EPSILON;

UnivariatePolynomial trim_leading_abs(const UnivariatePolynomial& p, double threshold) {
  auto c = p.coeffs();
  while (!c.empty() && std::abs(c.back()) <= threshold) c.pop_back();
  return UnivariatePolynomial(std::move(c));
}

std::string format_coeff(cplx c) {
  std::ostringstream os;
  os.precision(12);
  if (c.imag() == 0.0)
    os << c.real();
  else if (c.real() == 0.0)
    os << c.imag() << "*i";
  else
    os << '(' << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag())
       << "*i)";
  return os.str();
}

}  // namespace

UnivariatePolynomial::UnivariatePolynomial(std::vector<cplx> ascending)
    : coeffs_(std::move(ascending)) {
  trim();
}

UnivariatePolynomial UnivariatePolynomial::constant(cplx c) {
  return UnivariatePolynomial(std::vector<cplx>{c});
}

UnivariatePolynomial UnivariatePolynomial::from_roots(std::span<const cplx> roots) {
  UnivariatePolynomial p = constant(1.0);
  for (cplx r : roots) p = p * UnivariatePolynomial({-r, 1.0});
  return p;
}

void UnivariatePolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

double UnivariatePolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (cplx c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx UnivariatePolynomial::operator()(cplx x) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UnivariatePolynomial UnivariatePolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return UnivariatePolynomial(std::move(d));
}

UnivariatePolynomial UnivariatePolynomial::operator+(const UnivariatePolynomial& o) const {
  std::vector<cplx> c(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeff(k) + o.coeff(k);
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::operator-(const UnivariatePolynomial& o) const {
  std::vector<cplx> c(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeff(k) - o.coeff(k);
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::operator*(const UnivariatePolynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<cplx> c(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::operator*(cplx s) const {
  auto c = coeffs_;
  for (auto& x : c) x *= s;
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::trimmed(double rel) const {
  return trim_leading_abs(*this, rel * max_abs_coeff());
}

UnivariatePolynomial exact_quotient(const UnivariatePolynomial& a,
                                    const UnivariatePolynomial& b) {
  if (b.is_zero()) throw NumericalError("division by the zero polynomial");
  if (a.degree() < b.degree()) return {};
  std::vector<cplx> rem = a.coeffs();
  const auto& bc = b.coeffs();
  const int db = b.degree();
  std::vector<cplx> q(a.degree() - db + 1);
  for (int k = a.degree() - db; k >= 0; --k) {
    q[k] = rem[k + db] / bc[db];
    for (int j = 0; j <= db; ++j) rem[k + j] -= q[k] * bc[j];
  }
  return UnivariatePolynomial(std::move(q));
}

BivariatePolynomial::BivariatePolynomial(std::vector<UnivariatePolynomial> w_ascending)
    : w_coeffs_(std::move(w_ascending)) {
  while (!w_coeffs_.empty() && w_coeffs_.back().is_zero()) w_coeffs_.pop_back();
  if (w_coeffs_.size() < 3)
    throw InputError("f must have degree at least 2 in w");
  if (w_coeffs_.back().degree() != 0)
    throw InputError(
        "leading coefficient in w must be a nonzero constant (f has poles otherwise)");
}

int BivariatePolynomial::z_degree() const {
  int d = 0;
  for (const auto& c : w_coeffs_) d = std::max(d, c.degree());
  return d;
}

cplx BivariatePolynomial::operator()(cplx z, cplx w) const {
  cplx acc{};
  for (auto it = w_coeffs_.rbegin(); it != w_coeffs_.rend(); ++it) acc = acc * w + (*it)(z);
  return acc;
}

UnivariatePolynomial BivariatePolynomial::fiber(cplx z) const {
  std::vector<cplx> c(w_coeffs_.size());
  fiber_coeffs(z, c);
  return UnivariatePolynomial(std::move(c));
}

void BivariatePolynomial::fiber_coeffs(cplx z, std::span<cplx> out) const {
  for (std::size_t i = 0; i < w_coeffs_.size(); ++i) out[i] = w_coeffs_[i](z);
}

cplx BivariatePolynomial::d_dw(cplx z, cplx w) const {
  cplx acc{};
  for (int i = n(); i >= 1; --i) acc = acc * w + static_cast<double>(i) * w_coeffs_[i](z);
  return acc;
}

cplx BivariatePolynomial::d2_dw2(cplx z, cplx w) const {
  cplx acc{};
  for (int i = n(); i >= 2; --i)
    acc = acc * w + static_cast<double>(i * (i - 1)) * w_coeffs_[i](z);
  return acc;
}

cplx BivariatePolynomial::d_dz(cplx z, cplx w) const {
  cplx acc{};
  for (auto it = w_coeffs_.rbegin(); it != w_coeffs_.rend(); ++it)
    acc = acc * w + it->derivative()(z);
  return acc;
}

BivariatePolynomial BivariatePolynomial::plus_w_term(cplx eps) const {
  auto c = w_coeffs_;
  c[1] = c[1] + UnivariatePolynomial::constant(eps);
  return BivariatePolynomial(std::move(c));
}

BivariatePolynomial BivariatePolynomial::plus_constant(cplx k) const {
  auto c = w_coeffs_;
  c[0] = c[0] + UnivariatePolynomial::constant(k);
  return BivariatePolynomial(std::move(c));
}

double BivariatePolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : w_coeffs_) m = std::max(m, c.max_abs_coeff());
  return m;
}

std::string BivariatePolynomial::to_string() const {
  std::string out;
  for (int i = n(); i >= 0; --i) {
    const auto& c = w_coeffs_[i].coeffs();
    for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) {
      if (c[j] == cplx{}) continue;
      std::string mono;
      if (i > 0) mono += i == 1 ? "w" : "w^" + std::to_string(i);
      if (j > 0) {
        if (!mono.empty()) mono += '*';
        mono += j == 1 ? "z" : "z^" + std::to_string(j);
      }
      cplx coef = c[j];
      bool negative = coef.imag() == 0.0 && coef.real() < 0.0;
      if (negative) coef = -coef;
      std::string term;
      if (mono.empty())
        term = format_coeff(coef);
      else if (coef == cplx{1.0, 0.0})
        term = mono;
      else
        term = format_coeff(coef) + "*" + mono;
      if (out.empty())
        out = negative ? "-" + term : term;
      else
        out += (negative ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

int RootSet::count_with_multiplicity() const {
  return std::accumulate(multiplicity.begin(), multiplicity.end(), 0);
}

RootFindError::RootFindError(const std::string& what, std::vector<cplx> best,
                             double residual)
    : NumericalError(what,
                     [&] {
                       nlohmann::json j;
                       j["residual"] = residual;
                       for (cplx b : best) j["best_iterate"].push_back({b.real(), b.imag()});
                       return j.dump();
                     }()),
      best_(std::move(best)),
      residual_(residual) {}

double cauchy_bound(std::span<const cplx> a) {
  const std::size_t d = a.size() - 1;
  double m = 0.0;
  for (std::size_t k = 0; k < d; ++k) m = std::max(m, std::abs(a[k] / a[d]));
  return 1.0 + m;
}

double backward_error(std::span<const cplx> a, cplx x) {
  cplx p{};
  double s = 0.0;
  const double ax = std::abs(x);
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    p = p * x + *it;
    s = s * ax + std::abs(*it);
  }
  return s > 0.0 ? std::abs(p) / s : 0.0;
}

std::vector<cplx> aberth_seeds(std::span<const cplx> a) {
  const int d = static_cast<int>(a.size()) - 1;
  const double radius = cauchy_bound(a);
  // Shift the seed circle to the root centroid; the odd phase offset keeps
  // seeds off symmetry axes of real or binomial polynomials.
  const cplx center = -a[d - 1] / (static_cast<double>(d) * a[d]);
  std::vector<cplx> seeds(d);
  for (int k = 0; k < d; ++k)
    seeds[k] = center + std::polar(radius, 2.0 * M_PI * k / d + 0.4);
  return seeds;
}

double aberth_refine(std::span<const cplx> a, std::span<cplx> z, int max_iterations) {
  const int d = static_cast<int>(a.size()) - 1;
  std::vector<bool> done(d, false);
  const double be_stop = 4.0 * kEps * (d + 1);
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      cplx p{}, dp{};
      double s = 0.0;
      const double ax = std::abs(z[i]);
      for (int k = d; k >= 0; --k) {
        dp = dp * z[i] + p;
        p = p * z[i] + a[k];
        s = s * ax + std::abs(a[k]);
      }
      if (s == 0.0 || std::abs(p) <= be_stop * s) {
        done[i] = true;
        continue;
      }
      all_done = false;
      cplx sum{};
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        cplx diff = z[i] - z[j];
        if (diff == cplx{}) diff = cplx{kEps * (1.0 + ax), kEps * (1.0 + ax)};
        sum += 1.0 / diff;
      }
      cplx ratio = dp == cplx{} ? cplx{kEps * (1.0 + ax), 0.0} : p / dp;
      cplx corr = ratio / (1.0 - ratio * sum);
      z[i] -= corr;
      if (std::abs(corr) <= kEps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }
  double worst = 0.0;
  for (int i = 0; i < d; ++i) worst = std::max(worst, backward_error(a, z[i]));
  return worst;
}

namespace {

std::vector<cplx> all_roots_raw(const std::vector<cplx>& a, const RootOptions& opts) {
  const int d = static_cast<int>(a.size()) - 1;
  if (d < 1) throw InputError("root finding needs degree >= 1");
  // Exact zero roots: the backward error cannot certify them iteratively.
  std::size_t zeros = 0;
  while (zeros < a.size() && a[zeros] == cplx{}) ++zeros;
  if (zeros > 0) {
    std::vector<cplx> rest(a.begin() + zeros, a.end());
    std::vector<cplx> z(zeros, cplx{});
    if (rest.size() > 1) {
      auto more = all_roots_raw(rest, opts);
      z.insert(z.end(), more.begin(), more.end());
    }
    return z;
  }
  if (d == 1) return {-a[0] / a[1]};
  auto z = aberth_seeds(a);
  double residual = aberth_refine(a, z, opts.max_iterations);
  if (!(residual <= opts.tol))
    throw RootFindError("root finder did not converge", z, residual);
  return z;
}

RootSet cluster_roots(const std::vector<cplx>& a, const std::vector<cplx>& raw,
                      const RootOptions& opts) {
  const int d = static_cast<int>(raw.size());
  const double radius = std::sqrt(opts.tol) * cauchy_bound(a);
  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(raw[i] - raw[j]) < radius) parent[find(j)] = find(i);

  struct Cluster {
    cplx sum{};
    int count = 0;
    std::vector<cplx> members;
  };
  std::vector<Cluster> clusters(d);
  for (int i = 0; i < d; ++i) {
    auto& c = clusters[find(i)];
    c.sum += raw[i];
    ++c.count;
    c.members.push_back(raw[i]);
  }

  std::vector<std::pair<cplx, int>> out;
  for (const auto& c : clusters) {
    if (c.count == 0) continue;
    cplx mean = c.sum / static_cast<double>(c.count);
    if (c.count > 1 && backward_error(a, mean) > opts.tol) {
      // Distinct roots closer than the merge radius; keep them apart.
      for (cplx m : c.members) out.push_back({m, 1});
    } else {
      out.push_back({mean, c.count});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    return x.first.imag() < y.first.imag();
  });

  RootSet rs;
  for (const auto& [r, m] : out) {
    rs.roots.push_back(r);
    rs.multiplicity.push_back(m);
    rs.residual = std::max(rs.residual, backward_error(a, r));
  }
  return rs;
}

}  // namespace

RootSet roots(const UnivariatePolynomial& p, const RootOptions& opts) {
  if (p.degree() < 1) throw InputError("root finding needs degree >= 1");
  const auto& a = p.coeffs();
  return cluster_roots(a, all_roots_raw(a, opts), opts);
}

RootSet fiber_roots(const BivariatePolynomial& f, cplx z, const RootOptions& opts) {
  std::vector<cplx> a(f.n() + 1);
  f.fiber_coeffs(z, a);
  return cluster_roots(a, all_roots_raw(a, opts), opts);
}

std::vector<cplx> raw_fiber_roots(const BivariatePolynomial& f, cplx z,
                                  const RootOptions& opts) {
  std::vector<cplx> a(f.n() + 1);
  f.fiber_coeffs(z, a);
  return all_roots_raw(a, opts);
}

UnivariatePolynomial polynomial_determinant(
    std::vector<std::vector<UnivariatePolynomial>> m) {
  const std::size_t size = m.size();
  if (size == 0) return UnivariatePolynomial::constant(1.0);
  if (size == 1) return m[0][0];
  if (size == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (size == 3) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }

  // Bareiss: every division below is exact in exact arithmetic. Leading
  // coefficients that are pure cancellation noise are trimmed relative to the
  // size of the terms that produced them.
  double sign = 1.0;
  UnivariatePolynomial prev = UnivariatePolynomial::constant(1.0);
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < size && m[r][k].is_zero()) ++r;
      if (r == size) return {};
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        auto p1 = m[k][k] * m[i][j];
        auto p2 = m[i][k] * m[k][j];
        double scale = std::max(p1.max_abs_coeff(), p2.max_abs_coeff());
        auto num = trim_leading_abs(p1 - p2, 64.0 * kEps * scale);
        m[i][j] = exact_quotient(num, prev);
      }
      m[i][k] = {};
    }
    prev = m[k][k];
  }
  return m[size - 1][size - 1] * cplx{sign, 0.0};
}

UnivariatePolynomial discriminant_w(const BivariatePolynomial& f) {
  const int n = f.n();
  const auto& a = f.w_coefficients();
  std::vector<UnivariatePolynomial> b(n);
  for (int i = 1; i <= n; ++i) b[i - 1] = a[i] * cplx{static_cast<double>(i), 0.0};

  const int size = 2 * n - 1;
  std::vector<std::vector<UnivariatePolynomial>> m(size,
                                                   std::vector<UnivariatePolynomial>(size));
  // n-1 rows of f, n rows of df/dw, coefficients in descending w-degree.
  for (int r = 0; r < n - 1; ++r)
    for (int i = 0; i <= n; ++i) m[r][r + (n - i)] = a[i];
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= n - 1; ++i) m[n - 1 + r][r + (n - 1 - i)] = b[i];

  auto res = polynomial_determinant(std::move(m));
  const double parity = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  auto disc = res * (parity / f.leading());

  const double scale = std::pow(std::max(1.0, f.max_abs_coeff()), 2 * n - 2);
  disc = trim_leading_abs(disc, 1e-13 * scale);
  if (disc.is_zero()) throw InputError("f has a repeated factor");
  return disc;
}

}  // namespace qpbraid
