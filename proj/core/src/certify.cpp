#include "vnd/certify.hpp"

#include <sstream>

namespace vnd {

MatrixPolynomial failing_polynomial(const CounterexampleParams& params) {
  params.validate();
  ComplexVector u1(4), u2(4);
  u1 << 1.0, 0.0, params.c1(), params.c2();
  u2 << 0.0, 1.0, params.s1(), Complex(0.0, params.s2());
  const auto q = gram_schmidt({u1, u2});

  MatrixPolynomial p;
  p.num_vars = 4;
  p.out_rows = 2;
  p.out_cols = 1;
  for (int i = 0; i < 4; ++i) {
    MultiIndex k(4, 0);
    k[i] = 1;
    ComplexMatrix coeff(2, 1);
    coeff(0, 0) = std::conj(q[0][i]);
    coeff(1, 0) = std::conj(q[1][i]);
    p.add_term(k, coeff);
  }
  p.prune(1e-15);
  return p;
}

FailureCertificate certify_matrix_vn_failure(const CommutingTuple& t,
                                             const CounterexampleParams& params,
                                             const SupNormOptions& opts) {
  if (t.size() != 4 || t.dim != 3)
    throw invalid_input_error(
        "certify_matrix_vn_failure: expected four 3x3 matrices");
  FailureCertificate cert;
  cert.params = params;
  cert.polynomial = failing_polynomial(params);
  cert.lhs_norm = operator_norm(evaluate_matrix_tuple(cert.polynomial, t));
  // The certificate only needs the torus sup bounded away from the matrix
  // norm; chasing a tight gap would subdivide far past that point.
  SupNormOptions sup_opts = opts;
  sup_opts.target_gap = std::max(opts.target_gap, 1.5e-2);
  cert.sup_estimate = sup_norm_torus(cert.polynomial, sup_opts);
  if (cert.sup_estimate.certified_upper) {
    cert.margin = cert.lhs_norm - *cert.sup_estimate.certified_upper;
    cert.dilation_impossible =
        cert.margin > 0 && cert.sup_estimate.certified;
  } else {
    cert.margin = 0.0;
    cert.dilation_impossible = false;
  }
  std::ostringstream msg;
  if (cert.dilation_impossible) {
    msg << "||p(A)|| = " << cert.lhs_norm
        << " exceeds the certified supremum "
        << *cert.sup_estimate.certified_upper
        << " of ||p|| on the unit torus, so the von Neumann inequality fails "
           "for this commuting tuple of contractions. Consequently the tuple "
           "admits no simultaneous commuting unitary power dilation, and the "
           "evaluation map on polynomials is not completely contractive for "
           "any joint dilation of these four contractions.";
  } else {
    msg << "no certified violation: ||p(A)|| = " << cert.lhs_norm
        << " does not exceed the certified torus bound.";
  }
  cert.conclusion = msg.str();
  return cert;
}

VnReport check_scalar_vn(const CommutingTuple& t, const MatrixPolynomial& p,
                         const SupNormOptions& opts) {
  if (!p.is_scalar())
    throw invalid_input_error("check_scalar_vn: polynomial must be scalar");
  VnReport report;
  report.lhs_norm = operator_norm(evaluate_matrix_tuple(p, t));
  const TorusSupEstimate sup = sup_norm_torus(p, opts);
  report.sup_lower = sup.lower;
  report.sup_certified_upper = sup.certified_upper;
  if (sup.certified && sup.certified_upper) {
    report.gap = *sup.certified_upper - report.lhs_norm;
    if (report.lhs_norm > *sup.certified_upper)
      report.verdict = VnVerdict::kViolated;
    else if (report.lhs_norm <= sup.lower)
      report.verdict = VnVerdict::kSatisfied;
    else
      report.verdict = VnVerdict::kInconclusive;
  } else {
    report.verdict = report.lhs_norm <= sup.lower ? VnVerdict::kSatisfied
                                                  : VnVerdict::kInconclusive;
  }
  return report;
}

SingleContractionReduction reduce_linear_to_single(const CommutingTuple& t,
                                                   const MatrixPolynomial& p) {
  if (!p.is_scalar())
    throw invalid_input_error(
        "reduce_linear_to_single: polynomial must be scalar");
  if (static_cast<int>(t.size()) != p.num_vars)
    throw invalid_input_error("reduce_linear_to_single: tuple size mismatch");
  // validates the rank-one order-2 structure of the family
  (void)decompose_nilpotents(t);

  Complex c0 = 0.0;
  ComplexMatrix sum = ComplexMatrix::Zero(t.dim, t.dim);
  for (const auto& [k, c] : p.terms) {
    const int deg = total_degree(k);
    if (deg == 0) {
      c0 = c(0, 0);
    } else if (deg == 1) {
      for (int i = 0; i < p.num_vars; ++i)
        if (k[i] == 1) sum += c(0, 0) * t.matrices[i];
    }
    // monomials of total degree >= 2 annihilate the family
  }
  const double s = operator_norm(sum);
  if (s <= 1e-14)
    throw degeneracy_error(
        "reduce_linear_to_single: the linear part vanishes on this family");

  SingleContractionReduction out;
  out.b = sum / s;
  out.q = MatrixPolynomial::scalar(1);
  out.q.add_scalar_term({0}, c0);
  out.q.add_scalar_term({1}, s);
  out.q.prune(0.0);

  const ComplexMatrix lhs = evaluate_matrix_tuple(p, t);
  const CommutingTuple single = CommutingTuple::make({out.b});
  const ComplexMatrix rhs = evaluate_matrix_tuple(out.q, single);
  out.identity_residual = operator_norm(lhs - rhs);
  return out;
}

}  // namespace vnd
