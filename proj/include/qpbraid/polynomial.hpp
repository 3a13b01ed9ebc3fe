#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qpbraid/errors.hpp"

namespace qpbraid {

using cplx = std::complex<double>;

/// Dense univariate polynomial, coefficients in ascending degree. Leading
/// zeros are trimmed, so the zero polynomial has no coefficients.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<cplx> ascending);
  static UnivariatePolynomial constant(cplx c);
  /// prod (x - r) over the given roots.
  static UnivariatePolynomial from_roots(std::span<const cplx> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx coeff(int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : cplx{};
  }
  cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
  double max_abs_coeff() const;

  cplx operator()(cplx x) const;
  UnivariatePolynomial derivative() const;

  UnivariatePolynomial operator+(const UnivariatePolynomial& o) const;
  UnivariatePolynomial operator-(const UnivariatePolynomial& o) const;
  UnivariatePolynomial operator*(const UnivariatePolynomial& o) const;
  UnivariatePolynomial operator*(cplx s) const;

  /// Drops leading coefficients below rel * max |coeff|.
  UnivariatePolynomial trimmed(double rel) const;

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// Quotient of an exact division a / b; the remainder is discarded.
UnivariatePolynomial exact_quotient(const UnivariatePolynomial& a,
                                    const UnivariatePolynomial& b);

/// f(z, w) = sum_i c_i(z) w^i with c_n a nonzero constant (no poles) and n >= 2.
class BivariatePolynomial {
 public:
  /// w_ascending[i] is the coefficient of w^i. Throws InputError when the
  /// leading coefficient depends on z or vanishes, or when n < 2.
  explicit BivariatePolynomial(std::vector<UnivariatePolynomial> w_ascending);

  int n() const { return static_cast<int>(w_coeffs_.size()) - 1; }
  const std::vector<UnivariatePolynomial>& w_coefficients() const { return w_coeffs_; }
  cplx leading() const { return w_coeffs_.back().coeff(0); }
  int z_degree() const;

  cplx operator()(cplx z, cplx w) const;
  /// The polynomial w -> f(z, w).
  UnivariatePolynomial fiber(cplx z) const;
  /// Coefficients of w -> f(z, w), ascending, without trimming.
  void fiber_coeffs(cplx z, std::span<cplx> out) const;
  cplx d_dw(cplx z, cplx w) const;
  cplx d2_dw2(cplx z, cplx w) const;
  cplx d_dz(cplx z, cplx w) const;

  /// f + eps * w.
  BivariatePolynomial plus_w_term(cplx eps) const;
  /// f + c.
  BivariatePolynomial plus_constant(cplx c) const;
  /// Largest coefficient magnitude over all monomials.
  double max_abs_coeff() const;

  std::string to_string() const;

 private:
  std::vector<UnivariatePolynomial> w_coeffs_;
};

/// Roots with multiplicity after clustering.
struct RootSet {
  std::vector<cplx> roots;
  std::vector<int> multiplicity;
  /// Largest backward error |p(r)| / sum |a_k| |r|^k over the reported roots.
  double residual = 0.0;

  int count_with_multiplicity() const;
};

struct RootOptions {
  double tol = 1e-10;
  int max_iterations = 200;
};

/// Raised when simultaneous iteration does not reach tolerance.
class RootFindError : public NumericalError {
 public:
  RootFindError(const std::string& what, std::vector<cplx> best, double residual);
  const std::vector<cplx>& best_iterate() const { return best_; }
  double residual() const { return residual_; }

 private:
  std::vector<cplx> best_;
  double residual_;
};

/// Cauchy upper bound on root moduli: 1 + max |a_k / a_d|.
double cauchy_bound(std::span<const cplx> ascending);

/// |p(x)| / sum |a_k| |x|^k.
double backward_error(std::span<const cplx> ascending, cplx x);

/// Aberth-Ehrlich iteration from the given seeds, updated in place. Returns
/// the largest backward error reached. Does not throw; callers judge.
double aberth_refine(std::span<const cplx> ascending, std::span<cplx> roots,
                     int max_iterations);

/// Deterministic seeds on a circle whose radius comes from the Cauchy bound.
std::vector<cplx> aberth_seeds(std::span<const cplx> ascending);

/// All roots of p (degree >= 1), clustered with radius sqrt(tol) * cauchy_bound.
RootSet roots(const UnivariatePolynomial& p, const RootOptions& opts = {});

/// Roots of w -> f(z, w).
RootSet fiber_roots(const BivariatePolynomial& f, cplx z, const RootOptions& opts = {});

/// Unclustered roots of w -> f(z, w), exactly n of them.
std::vector<cplx> raw_fiber_roots(const BivariatePolynomial& f, cplx z,
                                  const RootOptions& opts = {});

/// Discriminant in w, as a polynomial in z:
/// (-1)^{n(n-1)/2} Res_w(f, df/dw) / f_0, which equals
/// f_0^{2n-2} prod_{j<k} (w_j - w_k)^2 over the fiber. Throws InputError
/// "f has a repeated factor" when it vanishes identically.
UnivariatePolynomial discriminant_w(const BivariatePolynomial& f);

/// Determinant of a square matrix of univariate polynomials (fraction-free
/// elimination; cofactor expansion up to size 3).
UnivariatePolynomial polynomial_determinant(
    std::vector<std::vector<UnivariatePolynomial>> m);

}  // namespace qpbraid
