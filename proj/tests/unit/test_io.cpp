#include <cstdio>
#include <numbers>

#include "doctest.h"
#include "vnd/certify.hpp"
#include "vnd/dilation.hpp"
#include "vnd/io.hpp"
#include "vnd/rng.hpp"

using namespace vnd;

TEST_CASE("matrix serialization roundtrips exactly") {
  Rng rng(71);
  const ComplexMatrix m = rng.matrix(3, 5);
  const ComplexMatrix back = matrix_from_json(matrix_to_json(m));
  CHECK(back == m);  // doubles survive JSON verbatim
}

TEST_CASE("matrix deserialization validates its input") {
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 2}}), invalid_input_error);
  json j = matrix_to_json(ComplexMatrix::Identity(2, 2));
  j["re"] = json::array({json::array({1.0})});
  CHECK_THROWS_AS(matrix_from_json(j), invalid_input_error);
}

TEST_CASE("polynomial serialization roundtrips exactly") {
  const MatrixPolynomial p = failing_polynomial(
      {std::numbers::pi / 4, std::numbers::pi / 4});
  const MatrixPolynomial back = polynomial_from_json(polynomial_to_json(p));
  REQUIRE(back.terms.size() == p.terms.size());
  CHECK(back.num_vars == p.num_vars);
  for (auto ita = p.terms.begin(), itb = back.terms.begin();
       ita != p.terms.end(); ++ita, ++itb) {
    CHECK(ita->first == itb->first);
    CHECK(ita->second == itb->second);
  }
}

TEST_CASE("tuple serialization preserves matrices and recomputes residuals") {
  const CommutingTuple t =
      build_counterexample({std::numbers::pi / 4, std::numbers::pi / 4});
  const json j = tuple_to_json(t, json{{"note", "roundtrip"}});
  const CommutingTuple back = tuple_from_json(j);
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(back.matrices[i] == t.matrices[i]);
  CHECK(back.commutation_residual == t.commutation_residual);
  CHECK(j.at("meta").at("note") == "roundtrip");
}

TEST_CASE("sup estimate serialization keeps the optional bound") {
  TorusSupEstimate e;
  e.lower = 1.5;
  e.argmax_point = {0.25, 1.0};
  e.mesh = 32;
  e.certified = true;
  e.certified_upper = 1.625;
  TorusSupEstimate back = sup_estimate_from_json(sup_estimate_to_json(e));
  CHECK(back.lower == e.lower);
  CHECK(back.argmax_point == e.argmax_point);
  REQUIRE(back.certified_upper);
  CHECK(*back.certified_upper == 1.625);

  e.certified = false;
  e.certified_upper.reset();
  back = sup_estimate_from_json(sup_estimate_to_json(e));
  CHECK(!back.certified_upper);
}

TEST_CASE("dilation results roundtrip including factored operators") {
  const CommutingTuple t = random_commuting_contractions(
      3, 3, 81, RandomScheme::kScalarPlusNilpotent);
  const DilationResult r = dilate_triple(t, 4, 4, 2);
  const DilationResult back =
      dilation_result_from_json(dilation_result_to_json(r));
  CHECK(back.space_dim == r.space_dim);
  CHECK(back.window == r.window);
  CHECK(back.scale_windows == r.scale_windows);
  CHECK(back.max_error == r.max_error);
  CHECK(back.embedding == r.embedding);
  REQUIRE(back.unitaries.size() == r.unitaries.size());
  for (std::size_t i = 0; i < r.unitaries.size(); ++i) {
    REQUIRE(back.unitaries[i].factors.size() == r.unitaries[i].factors.size());
    for (std::size_t f = 0; f < r.unitaries[i].factors.size(); ++f)
      CHECK(back.unitaries[i].factors[f] == r.unitaries[i].factors[f]);
    CHECK(back.unitaries[i].mobius_lambda == r.unitaries[i].mobius_lambda);
    CHECK(back.unitaries[i].adjoint == r.unitaries[i].adjoint);
  }
  CHECK(back.error_table == r.error_table);
  // the reloaded dilation verifies identically
  const VerificationTable v = verify_power_dilation(back, t, 2);
  CHECK(v.max_error == doctest::Approx(r.max_error).epsilon(1e-12));
}

TEST_CASE("file save and load roundtrip through disk") {
  const std::string path = "io_roundtrip_test.json";
  const json j{{"alpha", 1.0}, {"beta", json::array({1, 2, 3})}};
  save_json_file(path, j);
  CHECK(load_json_file(path) == j);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_json_file(path), invalid_input_error);
}
