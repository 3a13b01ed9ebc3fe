#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpbraid/polynomial.hpp"

namespace qpbraid {

struct BranchPoint {
  cplx z;
  int multiplicity = 1;
};

struct BranchData {
  std::vector<BranchPoint> points;
  bool generic = false;
  double rotation_theta = 0.0;
  /// Smallest gap between sorted Re(e^{i theta} w) over all branch fibers.
  double rotation_margin = 0.0;
  /// eps of f + eps*w when perturb_generic changed f.
  std::optional<cplx> perturbation;

  std::vector<cplx> locations() const;
  /// Diameter of the bounding box of the points (0 when fewer than two).
  double bounding_diameter() const;
};

struct LocusOptions {
  RootOptions roots;
  /// Pairwise separation floor, relative to the larger of bounding_diameter(),
  /// 1 and the largest |z_j|.
  double separation_floor = 1e-4;
  /// Threshold on |df/dz| and |d2f/dw2| at the double root, relative to
  /// max(1, largest coefficient of f).
  double tangent_floor = 1e-8;
};

/// Roots of the discriminant with multiplicities; sorted by real then
/// imaginary part (real parts compared on a 1e-9 grid). `generic` is unset.
BranchData branch_points(const BivariatePolynomial& f, const LocusOptions& opts = {});

struct GenericityIssue {
  int point = -1;  ///< index into BranchData::points, -1 for global issues
  std::string reason;
};

struct GenericityReport {
  bool generic = true;
  double min_separation = 0.0;
  std::vector<GenericityIssue> issues;
};

/// Every branch point simple, its fiber n-1 distinct roots with one double
/// root where f_z != 0 and f_ww != 0, and points pairwise separated.
GenericityReport check_genericity(const BivariatePolynomial& f, const BranchData& b,
                                  const LocusOptions& opts = {});

struct Perturbation {
  BivariatePolynomial f;
  cplx eps;
};

/// f itself when already generic; otherwise f + eps*w for the smallest
/// passing eps in budget * 2^-k. Throws NumericalError when none passes.
Perturbation perturb_generic(const BivariatePolynomial& f, double budget,
                             const LocusOptions& opts = {});

/// Distinct fiber roots over each branch point (n-1 per point when generic).
std::vector<std::vector<cplx>> branch_fibers(const BivariatePolynomial& f,
                                            const BranchData& b,
                                            const LocusOptions& opts = {});

/// Minimum over fibers of the smallest gap between sorted Re(e^{i theta} w).
double rotation_margin(const std::vector<std::vector<cplx>>& fibers, double theta);

/// Margins on the uniform grid theta_k = 2 pi k / samples.
std::vector<double> rotation_margins(const std::vector<std::vector<cplx>>& fibers,
                                     int samples);
/// Serial reference for rotation_margins.
std::vector<double> rotation_margins_serial(const std::vector<std::vector<cplx>>& fibers,
                                            int samples);

struct RotationChoice {
  double theta = 0.0;
  double margin = 0.0;
};

/// 720-point grid scan plus golden-section refinement; prefers theta = 0
/// when it reaches half of the optimum margin.
RotationChoice select_rotation(const BivariatePolynomial& f, const BranchData& b,
                               const LocusOptions& opts = {});

struct Analysis {
  BivariatePolynomial f;  ///< the (possibly perturbed) polynomial actually used
  BranchData branch;
};

/// branch_points -> perturb_generic -> select_rotation, with an optional
/// fixed theta. Throws NumericalError when the result is not generic or the
/// fixed theta leaves two real parts equal over some branch point.
Analysis analyze(const BivariatePolynomial& f, double budget,
                 std::optional<double> theta_override = std::nullopt,
                 const LocusOptions& opts = {});

}  // namespace qpbraid
