#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vnd/linalg.hpp"
#include "vnd/poly.hpp"
#include "vnd/tuples.hpp"

namespace vnd {

// Commuting 2x2 unitaries with U_i v_j = U_j v_i and U_i v_1 = v_i for three
// given unit vectors in C^2.
struct UnitaryTripleResult {
  std::array<ComplexMatrix, 3> unitaries;  // in the original frame
  bool dependent_branch = false;
  // Present only in the independent branch: U_3 = a U_1 + b U_2 holds for
  // the phase-normalized matrices.
  std::optional<double> a;
  std::optional<double> b;
  Complex sigma2{1.0, 0.0};
  Complex sigma3{1.0, 0.0};
  // 2x2 unitary with Q v_1 = (0, 1).
  ComplexMatrix basis_rotation;
  // Unitaries conjugated into the rotated frame, Q U_i Q^*. These are the
  // factors used by the shift-tensor dilation.
  std::array<ComplexMatrix, 3> rotated_unitaries;
};

// D x D unitary M with (M^m)_{11} = a^m for 0 <= m <= D - 2: a scalar
// damping window realized at finite size.
struct CornerUnitary {
  Complex a{0.0, 0.0};
  double d = 0.0;  // sqrt(1 - |a|^2)
  int window = 0;  // D
  ComplexMatrix matrix;
};

// One output operator of a dilation. Either a dense unitary, or a Kronecker
// product of the stored factors, optionally composed with the inverse
// Moebius map w -> (w + lambda)/(1 + conj(lambda) w) and/or an adjoint.
struct DilationOperator {
  ComplexMatrix dense;                  // used when factors is empty
  std::vector<ComplexMatrix> factors;   // kron(factors[0], factors[1], ...)
  std::optional<Complex> mobius_lambda;
  bool adjoint = false;

  bool is_dense() const { return factors.empty(); }
};

struct DilationResult {
  std::int64_t space_dim = 0;
  int window = 0;                  // N, cells of the cyclic shift
  std::vector<int> scale_windows;  // D_i per coordinate (empty if unused)
  int max_degree = 0;              // K
  std::vector<DilationOperator> unitaries;
  // Isometric columns identifying H = C^3. For factored operators the
  // embedding acts on the first tensor factor; each remaining slot is
  // entered at its first basis vector, so the embedding into the full
  // space is kron(embedding, e_1, ..., e_1).
  ComplexMatrix embedding;
  std::map<MultiIndex, double> error_table;
  double max_error = 0.0;
  // Certified residual bounds for the output operators.
  double unitarity_residual = 0.0;
  double commutation_residual = 0.0;
};

// Lemma-style three-vector construction. Inputs must be unit vectors in C^2.
UnitaryTripleResult three_vector_unitaries(const ComplexVector& v1,
                                           const ComplexVector& v2,
                                           const ComplexVector& v3);

// Corner unitary of window D >= 3 for |a| <= 1.
CornerUnitary corner_unitary(Complex a, int window);

// Commuting unitary power dilation of a column-form family of (up to) three
// unit-vector nilpotents v_i f* on dimension 2N; compressions are exact for
// total degree <= N - 2.
DilationResult dilate_unit_nilpotent_triple(const NilpotentStructure& structure,
                                            int window);

// Full chain for three commuting scalar-plus-nilpotent 3x3 contractions:
// Moebius to nilpotents, normalization, shift-tensor dilation, corner-window
// scaling, Moebius back. The output operators are held in tensor-factor form;
// compressions are evaluated through the factors.
DilationResult dilate_triple(const CommutingTuple& t, int window,
                             int scale_window, int max_degree);

// Single-operator isometric coextension on C^n stacked (depth+1) times:
// S(h, x_1, ..., x_depth) = (A h, D_A h, x_1, ..., x_{depth-1}).
ComplexMatrix isometric_coextension_single(const ComplexMatrix& a, int depth);

struct VerificationTable {
  std::map<MultiIndex, double> errors;
  double max_error = 0.0;
  bool window_exceeded = false;  // K beyond the validity window
};

// Independent recomputation of ||E* (prod W_i^{k_i}) E - prod A_i^{k_i}||
// for every multi-index of total degree <= K.
VerificationTable verify_power_dilation(const DilationResult& r,
                                        const CommutingTuple& t, int max_degree);

}  // namespace vnd
