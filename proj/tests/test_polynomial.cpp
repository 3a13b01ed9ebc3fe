#include <doctest.h>

#include <algorithm>
#include <random>

#include "qpbraid/errors.hpp"
#include "qpbraid/expr_parser.hpp"
#include "qpbraid/polynomial.hpp"

using namespace qpbraid;

namespace {

UnivariatePolynomial U(std::vector<cplx> c) { return UnivariatePolynomial(std::move(c)); }

// Every expected root is matched by a distinct found root within tol.
bool same_roots(std::vector<cplx> found, std::vector<cplx> expected, double tol) {
  if (found.size() != expected.size()) return false;
  for (cplx e : expected) {
    auto it = std::min_element(found.begin(), found.end(),
                               [e](cplx a, cplx b) { return std::abs(a - e) < std::abs(b - e); });
    if (std::abs(*it - e) > tol) return false;
    found.erase(it);
  }
  return true;
}

std::vector<cplx> expanded(const RootSet& r) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < r.roots.size(); ++i) out.insert(out.end(), r.multiplicity[i], r.roots[i]);
  return out;
}

// Product of squared root differences times f_0^(2n-2) from the fiber.
cplx disc_from_fiber(const BivariatePolynomial& f, cplx z) {
  auto w = raw_fiber_roots(f, z);
  cplx p = std::pow(f.leading(), 2 * f.n() - 2);
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t k = j + 1; k < w.size(); ++k) p *= (w[j] - w[k]) * (w[j] - w[k]);
  return p;
}

}  // namespace

TEST_CASE("univariate arithmetic") {
  auto p = U({1, 2, 3});
  auto q = U({-1, 1});
  CHECK((p * q).coeffs() == std::vector<cplx>{-1, -1, -1, 3});
  CHECK((p - p).is_zero());
  CHECK((p + q).degree() == 2);
  CHECK(p.derivative().coeffs() == std::vector<cplx>{2, 6});
  CHECK(p(cplx(2)) == cplx(17));
  CHECK(exact_quotient(p * q, q).coeffs() == p.coeffs());
  std::vector<cplx> r{1, cplx(0, 1)};
  auto fr = UnivariatePolynomial::from_roots(r);
  CHECK(std::abs(fr(1.0)) < 1e-15);
  CHECK(std::abs(fr(cplx(0, 1))) < 1e-15);
  CHECK(U({1, 0, 0}).degree() == 0);
}

TEST_CASE("roots of small polynomials") {
  auto r = roots(U({1, 0, 1}));
  CHECK(same_roots(r.roots, {cplx(0, 1), cplx(0, -1)}, 1e-12));

  r = roots(U({1, -2, 1}));
  REQUIRE(r.roots.size() == 1);
  CHECK(r.multiplicity[0] == 2);
  CHECK(std::abs(r.roots[0] - 1.0) < 1e-6);

  // 108 (1 - z^8): eighth roots of unity
  std::vector<cplx> c(9, 0.0);
  c[0] = 108, c[8] = -108;
  std::vector<cplx> unity;
  for (int k = 0; k < 8; ++k) unity.push_back(std::polar(1.0, 2 * M_PI * k / 8));
  r = roots(U(c));
  CHECK(same_roots(r.roots, unity, 1e-10));

  // exact zero roots
  r = roots(U({0, 0, -27}));
  CHECK(r.roots.size() == 1);
  CHECK(r.multiplicity[0] == 2);
  CHECK_THROWS_AS(roots(U({5})), InputError);
}

TEST_CASE("planted roots on a grid are recovered") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> g(-4, 4), deg(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<cplx> planted;
    const int d = deg(rng);
    while (static_cast<int>(planted.size()) < d) {
      cplx z(g(rng) * 0.5, g(rng) * 0.5);
      if (std::none_of(planted.begin(), planted.end(), [z](cplx p) { return p == z; }))
        planted.push_back(z);
    }
    auto r = roots(UnivariatePolynomial::from_roots(planted));
    CHECK(same_roots(expanded(r), planted, 1e-8 * 3.0));
  }
}

TEST_CASE("discriminants") {
  // w^2 - z: b^2 - 4ac = 4z
  auto f = parse_polynomial_expression("w^2 - z");
  auto d = discriminant_w(f);
  REQUIRE(d.degree() == 1);
  CHECK(std::abs(d.coeff(0)) < 1e-12);
  CHECK(std::abs(d.coeff(1) - 4.0) < 1e-12);

  // w^3 - 3w + 2 z^n: -4p^3 - 27q^2 = 108 (1 - z^(2n))
  for (int n = 1; n <= 4; ++n) {
    auto g = parse_polynomial_expression("w^3 - 3*w + 2*z^" + std::to_string(n));
    auto dg = discriminant_w(g);
    REQUIRE(dg.degree() == 2 * n);
    CHECK(std::abs(dg.coeff(0) - 108.0) < 1e-9);
    CHECK(std::abs(dg.coeff(2 * n) + 108.0) < 1e-9);
    for (int k = 1; k < 2 * n; ++k) CHECK(std::abs(dg.coeff(k)) < 1e-9);
  }

  // P(w)(w - z): B is the root set of P, each root counted twice
  auto h = parse_polynomial_expression("w*(w-1)*(w+1)*(w-z)");
  auto rs = roots(discriminant_w(h));
  CHECK(same_roots(rs.roots, {0.0, 1.0, -1.0}, 1e-5));
  for (int m : rs.multiplicity) CHECK(m == 2);

  CHECK_THROWS_WITH_AS(discriminant_w(parse_polynomial_expression("(w - z)^2")),
                       "f has a repeated factor", InputError);
}

TEST_CASE("discriminant equals the fiber product (Monte Carlo)") {
  const char* fixtures[] = {"w^2 - z", "w^3 - 3*w + 2*z^4", "w*(w-1)*(w+1)*(w-z) + 0.05",
                            "2*w^4 + z*w^2 - (1+i)*w + z^3 - 1", "w^5 - z^2*w + 3*z - 1"};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const char* expr : fixtures) {
    auto f = parse_polynomial_expression(expr);
    auto d = discriminant_w(f);
    for (int k = 0; k < 20; ++k) {
      cplx z(u(rng), u(rng));
      cplx a = d(z), b = disc_from_fiber(f, z);
      CHECK(std::abs(a - b) <= 1e-7 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("fiber roots") {
  auto f = parse_polynomial_expression("w^2 - z");
  CHECK(same_roots(fiber_roots(f, 1.0).roots, {1.0, -1.0}, 1e-12));
  auto r0 = fiber_roots(f, 0.0);
  REQUIRE(r0.roots.size() == 1);
  CHECK(r0.multiplicity[0] == 2);

  auto g = parse_polynomial_expression("w^3 - 3*w + 2*z");
  CHECK(same_roots(fiber_roots(g, 0.0).roots, {0.0, std::sqrt(3.0), -std::sqrt(3.0)}, 1e-12));
  auto r1 = fiber_roots(g, 1.0);  // (w - 1)^2 (w + 2)
  CHECK(r1.roots.size() == 2);
  CHECK(r1.count_with_multiplicity() == 3);
}

TEST_CASE("fiber roots move Lipschitz-continuously off B") {
  auto f = parse_polynomial_expression("w^3 - 3*w + 2*z^4");
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int k = 0; k < 30; ++k) {
    cplx z(u(rng), u(rng));
    auto a = raw_fiber_roots(f, z);
    const double delta = 1e-7;
    auto b = raw_fiber_roots(f, z + delta);
    CHECK(same_roots(b, a, 1e3 * delta));
  }
}

TEST_CASE("bivariate polynomial basics") {
  auto f = parse_polynomial_expression("w^3 - 3*w + 2*z^4");
  CHECK(f.n() == 3);
  CHECK(f.z_degree() == 4);
  cplx z(0.3, -0.2), w(0.7, 0.4);
  cplx direct = w * w * w - 3.0 * w + 2.0 * std::pow(z, 4);
  CHECK(std::abs(f(z, w) - direct) < 1e-14);
  CHECK(std::abs(f.d_dw(z, w) - (3.0 * w * w - 3.0)) < 1e-14);
  CHECK(std::abs(f.d2_dw2(z, w) - 6.0 * w) < 1e-14);
  CHECK(std::abs(f.d_dz(z, w) - 8.0 * std::pow(z, 3)) < 1e-14);
  CHECK(std::abs(f.plus_w_term(0.5)(z, w) - direct - 0.5 * w) < 1e-14);
  CHECK(std::abs(f.plus_constant(2.0)(z, w) - direct - 2.0) < 1e-14);

  CHECK_THROWS_AS(parse_polynomial_expression("z*w^2 + w"), InputError);  // pole
  CHECK_THROWS_AS(parse_polynomial_expression("w + z"), InputError);      // n < 2
}

TEST_CASE("expression parser") {
  cplx z(0.4, 0.9), w(-1.1, 0.3);
  auto g = parse_polynomial_expression("3*w^2 - (1+2*i)*w + 0.5*(z - 1)^2");
  cplx expect = 3.0 * w * w - cplx(1, 2) * w + 0.5 * (z - 1.0) * (z - 1.0);
  CHECK(std::abs(g(z, w) - expect) < 1e-13);
  auto h = parse_polynomial_expression("(w-1)*(w-z) + 0.05");
  CHECK(std::abs(h(z, w) - ((w - 1.0) * (w - z) + 0.05)) < 1e-13);
  // leading coefficient in w depends on z
  CHECK_THROWS_AS(parse_polynomial_expression("(2*z + 1)*w^2 + w"), InputError);
  CHECK_THROWS_AS(parse_polynomial_expression("w^2 +"), InputError);
  CHECK_THROWS_AS(parse_polynomial_expression("w^2 + x"), InputError);
  CHECK_THROWS_AS(parse_polynomial_expression("(w^2"), InputError);
  CHECK_THROWS_AS(parse_polynomial_expression("w^-1"), InputError);
}
