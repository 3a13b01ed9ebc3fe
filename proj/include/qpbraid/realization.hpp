#pragma once

#include <vector>

#include "qpbraid/braid.hpp"
#include "qpbraid/branch_locus.hpp"
#include "qpbraid/loop_path.hpp"
#include "qpbraid/monodromy.hpp"

namespace qpbraid {

/// P(w)(w - z) + eps with P(w) = (w - 1)(w - 2)...(w - (n - 1)). Halves eps
/// (at most 8 times) until the branch data is generic; throws
/// NumericalError otherwise. Requires n >= 2 and 0 < |eps| <= 0.1.
BivariatePolynomial realization_curve(int n, double eps = 0.05);

struct GeneratorLoop {
  LoopPath path;
  BraidWord word;  ///< braid_along of path; freely equal to sigma_k
};

struct RealizationPlan {
  int n = 2;
  std::vector<double> p_roots;
  double epsilon = 0.05;
  Analysis analysis;  ///< f with generic branch data, theta = 0 when possible
  cplx basepoint;
  /// generator_loops[k - 1] is l_k.
  std::vector<GeneratorLoop> generator_loops;

  const BivariatePolynomial& f() const { return analysis.f; }
  const BranchData& branch() const { return analysis.branch; }
};

/// Curve, branch data and basepoint; no generator loops yet.
RealizationPlan start_plan(int n, double eps = 0.05);

/// Loop based at plan.basepoint whose word freely reduces to sigma_k.
/// Needs l_1 .. l_{k-1} in the plan. Tries at most 16 candidates and throws
/// NumericalError with their words when none verifies.
GeneratorLoop generator_loop(const RealizationPlan& plan, int k);

/// start_plan plus all generator loops.
RealizationPlan make_plan(int n, double eps = 0.05);

/// Concatenation of generator loops (reversed for negative letters).
LoopPath loop_for_word(const RealizationPlan& plan, const BraidWord& word);

struct Realization {
  BivariatePolynomial f;
  BranchData branch;
  LoopPath loop;
  BraidWord verification;
};

/// (f, loop) whose braid word freely equals expand_factorization(qpf).
/// Throws NumericalError on a verification mismatch.
Realization realize(const QuasipositiveFactorization& qpf, double eps = 0.05);
Realization realize(const QuasipositiveFactorization& qpf, const RealizationPlan& plan);

}  // namespace qpbraid
