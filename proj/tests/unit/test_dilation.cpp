#include <numbers>

#include "doctest.h"
#include "vnd/dilation.hpp"
#include "vnd/rng.hpp"

using namespace vnd;

namespace {

// Dense oracle for a factored operator: Kronecker product of the factors,
// then the inverse disc automorphism, ignoring the adjoint marker.
ComplexMatrix dense_operator(const DilationOperator& op) {
  ComplexMatrix m = op.is_dense() ? op.dense : op.factors[0];
  for (std::size_t j = 1; j < op.factors.size(); ++j) m = kronecker(m, op.factors[j]);
  if (op.mobius_lambda) m = mobius_of_matrix(*op.mobius_lambda, m, true);
  return m;
}

double unitarity_defect(const ComplexMatrix& u) {
  return operator_norm(ComplexMatrix(
      u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())));
}

CommutingTuple random_scalar_nilpotent_triple(std::uint64_t seed) {
  return random_commuting_contractions(3, 3, seed,
                                       RandomScheme::kScalarPlusNilpotent);
}

}  // namespace

TEST_CASE("three-vector unitaries satisfy the defining relations") {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexVector v1 = rng.unit_vector(2);
    ComplexVector v2 = rng.unit_vector(2);
    ComplexVector v3 = rng.unit_vector(2);
    const bool force_dependent = trial % 5 == 0;
    if (force_dependent) v2 = rng.unimodular() * v1;
    const UnitaryTripleResult r = three_vector_unitaries(v1, v2, v3);
    const std::array<ComplexVector, 3> vs{v1, v2, v3};
    for (int i = 0; i < 3; ++i) {
      CHECK(unitarity_defect(r.unitaries[i]) < 1e-12);
      CHECK((r.unitaries[i] * v1 - vs[i]).norm() < 1e-12);
      for (int j = 0; j < 3; ++j) {
        CHECK(commutation_residual(r.unitaries[i], r.unitaries[j]) < 1e-12);
        CHECK((r.unitaries[i] * vs[j] - r.unitaries[j] * vs[i]).norm() <
              1e-12);
      }
    }
    if (force_dependent) CHECK(r.dependent_branch);
  }
}

TEST_CASE("three-vector unitaries reproduce the canonical example") {
  ComplexVector v1(2), v2(2), v3(2);
  v1 << 1.0, 0.0;
  v2 << 0.0, 1.0;
  v3 << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  const UnitaryTripleResult r = three_vector_unitaries(v1, v2, v3);
  REQUIRE(!r.dependent_branch);
  REQUIRE(r.a);
  REQUIRE(r.b);
  CHECK(*r.a == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-12));
  CHECK(*r.b == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-12));
  // U_1 = I; the phase-normalized combination a U_1 + b U_2 equals U_3
  CHECK(operator_norm(ComplexMatrix(r.unitaries[0] -
                                    ComplexMatrix::Identity(2, 2))) < 1e-12);
  const ComplexMatrix u2n = r.sigma2 * r.unitaries[1];
  const ComplexMatrix u3n = r.sigma3 * r.unitaries[2];
  CHECK(operator_norm(ComplexMatrix(*r.a * ComplexMatrix::Identity(2, 2) +
                                    *r.b * u2n - u3n)) < 1e-12);
}

TEST_CASE("three-vector unitaries reject non-unit input") {
  ComplexVector v1(2), ok(2);
  v1 << 2.0, 0.0;
  ok << 1.0, 0.0;
  CHECK_THROWS_AS(three_vector_unitaries(v1, ok, ok), invalid_input_error);
}

TEST_CASE("corner unitary realizes a damping window") {
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex a = std::sqrt(rng.uniform()) * rng.unimodular();
    const int window = 4 + trial;
    const CornerUnitary c = corner_unitary(a, window);
    CHECK(unitarity_defect(c.matrix) < 1e-13);
    ComplexMatrix power = ComplexMatrix::Identity(window, window);
    for (int m = 0; m <= window - 2; ++m) {
      CHECK(std::abs(power(0, 0) - std::pow(a, m)) < 1e-12);
      power = c.matrix * power;
    }
  }
  // boundary values
  CHECK(corner_unitary(Complex(0), 4).d == doctest::Approx(1.0));
  CHECK(corner_unitary(Complex(1), 4).d == doctest::Approx(0.0));
}

TEST_CASE("unit nilpotent triple dilation is exact below the wrap degree") {
  Rng rng(53);
  const ComplexVector f = ComplexVector::Unit(3, 0);
  std::vector<ComplexMatrix> mats;
  NilpotentStructure st;
  st.orientation = NilpotentOrientation::kColumn;
  st.f = f;
  for (int i = 0; i < 3; ++i) {
    ComplexVector v = rng.vector(3);
    v -= f * f.dot(v);
    v /= v.norm();
    st.vs.push_back(v);
  }
  const int window = 6;
  const DilationResult r = dilate_unit_nilpotent_triple(st, window);
  CHECK(r.max_error <= 1e-12);
  CHECK(r.unitarity_residual <= 1e-12);
  CHECK(r.commutation_residual <= 1e-12);
  CHECK(r.max_degree == window - 2);
  // every multi-index up to the window is present in the table
  int expected = 0;
  for (int k1 = 0; k1 <= window - 2; ++k1)
    for (int k2 = 0; k1 + k2 <= window - 2; ++k2)
      for (int k3 = 0; k1 + k2 + k3 <= window - 2; ++k3) ++expected;
  CHECK(static_cast<int>(r.error_table.size()) == expected);
  // embedding is an isometry
  CHECK(operator_norm(ComplexMatrix(r.embedding.adjoint() * r.embedding -
                                    ComplexMatrix::Identity(3, 3))) < 1e-13);
}

TEST_CASE("scalar-plus-nilpotent dilation matches its dense materialization") {
  const CommutingTuple t = random_scalar_nilpotent_triple(61);
  const int window = 4, scale = 4, degree = 2;
  const DilationResult r = dilate_triple(t, window, scale, degree);
  REQUIRE(r.unitaries.size() == 3);
  CHECK(r.space_dim == 2 * window * scale * scale * scale);

  std::vector<ComplexMatrix> dense;
  for (const auto& op : r.unitaries) {
    dense.push_back(dense_operator(op));
    CHECK(unitarity_defect(dense.back()) < 1e-11);
    CHECK(!op.adjoint);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(commutation_residual(dense[i], dense[j]) <
            std::max(1e-11, 10 * r.commutation_residual));

  // full-space embedding: corner slots are entered at their first basis
  // vector (see the embedding convention in the dilation header)
  ComplexMatrix embed = r.embedding;
  const ComplexMatrix e1 = ComplexMatrix::Identity(scale, 1);
  for (int j = 0; j < 3; ++j) embed = kronecker(embed, e1);
  CHECK(operator_norm(ComplexMatrix(embed.adjoint() * embed -
                                    ComplexMatrix::Identity(3, 3))) < 1e-13);

  // independent compression for every table entry
  for (const auto& [k, err] : r.error_table) {
    ComplexMatrix x = ComplexMatrix::Identity(r.space_dim, r.space_dim);
    ComplexMatrix a = ComplexMatrix::Identity(t.dim, t.dim);
    for (int i = 0; i < 3; ++i)
      for (int e = 0; e < k[i]; ++e) {
        x = x * dense[i];
        a = a * t.matrices[i];
      }
    const ComplexMatrix comp = embed.adjoint() * x * embed;
    const double err_oracle = operator_norm(ComplexMatrix(comp - a));
    CHECK(std::abs(err - err_oracle) < 1e-9);
  }
}

TEST_CASE("row-form families dilate through the adjoint chain") {
  const CommutingTuple col = random_scalar_nilpotent_triple(62);
  const CommutingTuple row = col.adjoint();
  const DilationResult r = dilate_triple(row, 4, 4, 2);
  for (const auto& op : r.unitaries) CHECK(op.adjoint);
  const VerificationTable v = verify_power_dilation(r, row, 2);
  CHECK(v.max_error == doctest::Approx(r.max_error).epsilon(1e-9));
  CHECK(!v.window_exceeded);
}

TEST_CASE("verification flags degrees beyond the validity window") {
  const CommutingTuple t = random_scalar_nilpotent_triple(63);
  const DilationResult r = dilate_triple(t, 4, 4, 2);
  const VerificationTable v = verify_power_dilation(r, t, 3);
  CHECK(v.window_exceeded);
}

TEST_CASE("larger windows shrink the compression error") {
  const CommutingTuple t = random_scalar_nilpotent_triple(64);
  const DilationResult small = dilate_triple(t, 8, 8, 3);
  const DilationResult large = dilate_triple(t, 16, 16, 3);
  CHECK(large.max_error < small.max_error);
  CHECK(small.unitarity_residual < 1e-12);
  CHECK(large.unitarity_residual < 1e-12);
}

TEST_CASE("pure scalar members stay exact through the chain") {
  // one slot is a plain scalar multiple of the identity
  const Complex lambda(0.4, 0.3);
  ComplexMatrix n = ComplexMatrix::Zero(3, 3);
  n(0, 1) = 0.2;
  const ComplexMatrix a = Complex(0.35, -0.2) * ComplexMatrix::Identity(3, 3);
  const ComplexMatrix b =
      lambda * ComplexMatrix::Identity(3, 3) + n;
  ComplexMatrix c = ComplexMatrix::Zero(3, 3);
  c(0, 2) = 0.5;
  const CommutingTuple t = CommutingTuple::make({a, b, c});
  const DilationResult r = dilate_triple(t, 6, 6, 2);
  CHECK(r.unitarity_residual < 1e-12);
  const VerificationTable v = verify_power_dilation(r, t, 2);
  CHECK(v.max_error < 0.2);
}

TEST_CASE("single-operator isometric coextension") {
  Rng rng(54);
  ComplexMatrix a = rng.matrix(3, 3);
  a /= operator_norm(a) * 1.25;
  const int depth = 4;
  const ComplexMatrix s = isometric_coextension_single(a, depth);
  // isometric on everything except the final (dropped) slot
  const ComplexMatrix gram = s.adjoint() * s;
  CHECK(operator_norm(ComplexMatrix(
            gram.topLeftCorner(3 * depth, 3 * depth) -
            ComplexMatrix::Identity(3 * depth, 3 * depth))) < 1e-13);
  // the top-left corner of S^k is A^k (coextension: lower block triangular)
  ComplexMatrix sk = ComplexMatrix::Identity(s.rows(), s.rows());
  ComplexMatrix ak = ComplexMatrix::Identity(3, 3);
  for (int k = 0; k <= depth; ++k) {
    CHECK(operator_norm(ComplexMatrix(sk.topLeftCorner(3, 3) - ak)) < 1e-13);
    sk = s * sk;
    ak = a * ak;
  }
  CHECK_THROWS_AS(isometric_coextension_single(2.0 * a, depth),
                  invalid_input_error);
}
