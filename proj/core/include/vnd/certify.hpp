#pragma once

#include <string>

#include "vnd/poly.hpp"
#include "vnd/tuples.hpp"

namespace vnd {

// Numeric evidence that the matrix von Neumann inequality fails for the
// counterexample tuple: ||p(A)|| = 2 on the left against a certified sup
// bound strictly below 2 on the right.
struct FailureCertificate {
  MatrixPolynomial polynomial;  // 2x1, linear, four variables
  double lhs_norm = 0.0;
  TorusSupEstimate sup_estimate;
  double margin = 0.0;  // lhs_norm - certified_upper (0 when uncertified)
  CounterexampleParams params{};
  bool dilation_impossible = false;
  std::string conclusion;
};

enum class VnVerdict { kSatisfied, kViolated, kInconclusive };

struct VnReport {
  double lhs_norm = 0.0;
  double sup_lower = 0.0;
  std::optional<double> sup_certified_upper;
  VnVerdict verdict = VnVerdict::kInconclusive;
  double gap = 0.0;  // certified_upper - lhs when certified
};

// Output of the reduction of a polynomial on a column-form nilpotent family
// to a single contraction: p(A) = q(B) with B an average of the A_i.
struct SingleContractionReduction {
  ComplexMatrix b;
  MatrixPolynomial q;  // single-variable scalar polynomial
  double identity_residual = 0.0;
};

// The 2x1 linear polynomial whose rows are the conjugated entries of the
// orthonormalization of u1 = (1, 0, c1, c2), u2 = (0, 1, s1, i s2).
MatrixPolynomial failing_polynomial(const CounterexampleParams& params);

// Full failure certificate for the counterexample tuple.
FailureCertificate certify_matrix_vn_failure(const CommutingTuple& t,
                                             const CounterexampleParams& params,
                                             const SupNormOptions& opts = {});

// Scalar von Neumann check: compares ||p(A)|| with the certified torus sup.
VnReport check_scalar_vn(const CommutingTuple& t, const MatrixPolynomial& p,
                         const SupNormOptions& opts = {});

// Reduction of an arbitrary scalar polynomial on a column-form order-2
// nilpotent family to a single-variable polynomial at one contraction.
// Requires at least one nonzero linear coefficient.
SingleContractionReduction reduce_linear_to_single(const CommutingTuple& t,
                                                   const MatrixPolynomial& p);

}  // namespace vnd
