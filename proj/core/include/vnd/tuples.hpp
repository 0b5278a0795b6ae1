#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vnd/linalg.hpp"

namespace vnd {

// Angles for the four-contraction counterexample family. Both angles must
// lie strictly inside (0, pi/2) so that all of cos/sin are in (0, 1).
struct CounterexampleParams {
  double theta1;
  double theta2;

  double c1() const;
  double s1() const;
  double c2() const;
  double s2() const;

  // Throws invalid_input_error if an angle is outside the open interval.
  void validate() const;
};

// A family of square matrices of common dimension together with its maximal
// pairwise commutator norm.
struct CommutingTuple {
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> matrices;
  std::vector<std::string> labels;  // optional, may be empty
  double commutation_residual = 0.0;

  std::size_t size() const { return matrices.size(); }

  // Build from matrices, validating shapes and recomputing the residual.
  static CommutingTuple make(std::vector<ComplexMatrix> matrices,
                             std::vector<std::string> labels = {});

  CommutingTuple adjoint() const;
};

// Simultaneous rank-one normal form of a commuting order-2 nilpotent family:
// A_i = v_i f* (column form) or A_i = f v_i* (row form), with each v_i
// orthogonal to the unit vector f.
enum class NilpotentOrientation { kColumn, kRow };

struct NilpotentStructure {
  NilpotentOrientation orientation = NilpotentOrientation::kColumn;
  ComplexVector f;
  std::vector<ComplexVector> vs;
  double residual = 0.0;  // worst reconstruction error over the family

  ComplexMatrix reconstruct(std::size_t i) const;
};

// Decomposition A_i = lambda_i I + N_i with N_i^2 = 0.
struct ScalarNilpotentSplit {
  std::vector<Complex> lambdas;
  std::vector<ComplexMatrix> nilpotents;
  std::vector<bool> pure_scalar;  // |lambda_i| >= 1 - 1e-12
};

// The four 3x3 contractions, in the basis order (f, e1, e2): each is a
// rank-one column matrix with unit column (0, *, *) in column 0, and all
// sixteen pairwise products vanish exactly.
CommutingTuple build_counterexample(const CounterexampleParams& params);

// Split each matrix as trace(A)/dim * I + N, accepting only when every
// residual ||N^2|| is below 1e-10 * max(1, ||N||^2).
ScalarNilpotentSplit split_scalar_nilpotent(const CommutingTuple& t);

// Normal form of a commuting family of 3x3 order-2 nilpotents. Zero
// matrices are carried with v_i = 0. Column form is preferred when both
// orientations are available.
NilpotentStructure decompose_nilpotents(const CommutingTuple& t);

enum class RandomScheme {
  kPolyOfSeedMatrix,
  kStructuredNilpotent,
  kScalarPlusNilpotent,
};

// Deterministic-per-seed commuting contraction families. Each matrix is
// scaled to norm <= 1 - 1e-6 and the tuple's commutation residual is below
// 1e-12 by construction.
CommutingTuple random_commuting_contractions(int dim, int count,
                                             std::uint64_t seed,
                                             RandomScheme scheme);

}  // namespace vnd
