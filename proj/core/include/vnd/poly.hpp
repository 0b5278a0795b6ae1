#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vnd/linalg.hpp"
#include "vnd/tuples.hpp"

namespace vnd {

// Exponent vector of a monomial z_1^{k_1} ... z_n^{k_n}.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& k);

// Polynomial in num_vars variables with matrix coefficients of common shape
// out_rows x out_cols. Scalar polynomials are the 1x1 case.
struct MatrixPolynomial {
  int num_vars = 1;
  Eigen::Index out_rows = 1;
  Eigen::Index out_cols = 1;
  std::map<MultiIndex, ComplexMatrix> terms;

  static MatrixPolynomial scalar(int num_vars);

  // Accumulates into an existing term of the same multi-index.
  void add_term(const MultiIndex& k, const ComplexMatrix& coeff);
  void add_scalar_term(const MultiIndex& k, Complex coeff);

  // Drop terms with negligible coefficients.
  void prune(double tol = 0.0);

  int max_total_degree() const;
  bool is_scalar() const { return out_rows == 1 && out_cols == 1; }

  // Conservative bound on the angular derivative of z -> p(z) on the torus:
  // sum over terms of (total degree) * ||coefficient||.
  double torus_lipschitz_bound() const;

  void validate() const;
};

struct TorusSupEstimate {
  double lower = 0.0;
  std::optional<double> certified_upper;
  std::vector<double> argmax_point;  // angles in [0, 2*pi)
  int mesh = 0;
  bool certified = false;
};

struct SupNormOptions {
  int mesh = 64;
  int refine_iters = 40;
  // Subdivision of near-maximal cells stops once the certification gap is
  // below this value (or a budget below is exhausted).
  double target_gap = 5e-3;
  int max_levels = 8;
  std::size_t max_cells = 20'000'000;
  // Cap on the number of base grid evaluations (mesh^num_vars).
  std::size_t grid_cap = 100'000'000;
};

// p(z) = sum_k C_k z^k at a scalar point.
ComplexMatrix evaluate_scalar_point(const MatrixPolynomial& p,
                                    const std::vector<Complex>& z);

// Block evaluation at a commuting tuple: block (i, j) of the result is
// sum_k (C_k)_{ij} A_1^{k_1} ... A_n^{k_n}. Refuses tuples whose
// commutation residual exceeds 1e-8.
ComplexMatrix evaluate_matrix_tuple(const MatrixPolynomial& p,
                                    const CommutingTuple& t);

// Certified sup of ||p(z)|| over the torus |z_i| = 1. The lower bound comes
// from a lexicographic grid scan plus deterministic coordinate-descent
// refinement; the upper bound from a per-cell Lipschitz certificate with
// adaptive subdivision of near-maximal cells.
TorusSupEstimate sup_norm_torus(const MatrixPolynomial& p,
                                const SupNormOptions& opts = {});

// Disc automorphism b(z) = (z - lambda) / (1 - conj(lambda) z).
Complex mobius(Complex lambda, Complex z);

// Inverse map w -> (w + lambda) / (1 + conj(lambda) w).
Complex mobius_inverse(Complex lambda, Complex w);

// Matrix Moebius calculus: (M - lambda I)(I - conj(lambda) M)^{-1}, or the
// inverse orientation (M + lambda I)(I + conj(lambda) M)^{-1}. Requires
// ||M|| <= 1 + 1e-10 and |lambda| < 1.
ComplexMatrix mobius_of_matrix(Complex lambda, const ComplexMatrix& m,
                               bool inverse = false);

// Sampled (uncertified) sup of z -> ||p(b_1^{-1}(z_1), ..., b_n^{-1}(z_n))||
// over the torus grid.
TorusSupEstimate sample_sup_composed(const MatrixPolynomial& p,
                                     const std::vector<Complex>& lambdas,
                                     const SupNormOptions& opts = {});

// Scalar polynomial with coefficients drawn i.i.d. complex normal over all
// multi-indices of total degree <= degree, then rescaled so the torus
// Lipschitz bound equals `lipschitz` (when any nonconstant term is present).
MatrixPolynomial random_scalar_polynomial(int num_vars, int degree,
                                          std::uint64_t seed,
                                          double lipschitz = 0.2);

}  // namespace vnd
