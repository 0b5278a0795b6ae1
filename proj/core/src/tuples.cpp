#include "vnd/tuples.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vnd/rng.hpp"

namespace vnd {

double CounterexampleParams::c1() const { return std::cos(theta1); }
double CounterexampleParams::s1() const { return std::sin(theta1); }
double CounterexampleParams::c2() const { return std::cos(theta2); }
double CounterexampleParams::s2() const { return std::sin(theta2); }

void CounterexampleParams::validate() const {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(theta1 > 0.0 && theta1 < half_pi && theta2 > 0.0 && theta2 < half_pi)) {
    std::ostringstream msg;
    msg << "counterexample angles must lie strictly in (0, pi/2); got ("
        << theta1 << ", " << theta2 << ")";
    throw invalid_input_error(msg.str());
  }
}

CommutingTuple CommutingTuple::make(std::vector<ComplexMatrix> matrices,
                                    std::vector<std::string> labels) {
  if (matrices.empty())
    throw invalid_input_error("CommutingTuple: empty matrix list");
  CommutingTuple t;
  t.dim = matrices[0].rows();
  for (const auto& m : matrices) {
    if (m.rows() != m.cols() || m.rows() != t.dim)
      throw invalid_input_error(
          "CommutingTuple: matrices must be square and of equal dimension");
    if (!all_finite(m))
      throw invalid_input_error("CommutingTuple: non-finite entries");
  }
  if (!labels.empty() && labels.size() != matrices.size())
    throw invalid_input_error("CommutingTuple: label count mismatch");
  t.matrices = std::move(matrices);
  t.labels = std::move(labels);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.matrices.size(); ++i)
    for (std::size_t j = i + 1; j < t.matrices.size(); ++j)
      worst = std::max(
          worst, vnd::commutation_residual(t.matrices[i], t.matrices[j]));
  t.commutation_residual = worst;
  return t;
}

CommutingTuple CommutingTuple::adjoint() const {
  std::vector<ComplexMatrix> adj;
  adj.reserve(matrices.size());
  for (const auto& m : matrices) adj.push_back(m.adjoint());
  return CommutingTuple::make(std::move(adj), labels);
}

ComplexMatrix NilpotentStructure::reconstruct(std::size_t i) const {
  if (orientation == NilpotentOrientation::kColumn)
    return vs[i] * f.adjoint();
  return f * vs[i].adjoint();
}

CommutingTuple build_counterexample(const CounterexampleParams& params) {
  params.validate();
  const Eigen::Index d = 3;
  auto column_matrix = [&](Complex x1, Complex x2) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(1, 0) = x1;
    m(2, 0) = x2;
    return m;
  };
  std::vector<ComplexMatrix> ms;
  ms.push_back(column_matrix(1.0, 0.0));
  ms.push_back(column_matrix(0.0, 1.0));
  ms.push_back(column_matrix(params.c1(), params.s1()));
  ms.push_back(column_matrix(params.c2(), Complex(0.0, params.s2())));
  return CommutingTuple::make(std::move(ms), {"A1", "A2", "A3", "A4"});
}

ScalarNilpotentSplit split_scalar_nilpotent(const CommutingTuple& t) {
  ScalarNilpotentSplit out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const ComplexMatrix& a = t.matrices[i];
    const Complex lambda = a.trace() / static_cast<double>(t.dim);
    ComplexMatrix n = a - lambda * ComplexMatrix::Identity(t.dim, t.dim);
    const double n_norm = operator_norm(n.rows() ? n : n);
    const double sq_norm = operator_norm(ComplexMatrix(n * n));
    if (sq_norm > 1e-10 * std::max(1.0, n_norm * n_norm)) {
      std::ostringstream msg;
      msg << "split_scalar_nilpotent: matrix " << i
          << " is not scalar plus order-2 nilpotent (||N^2|| = " << sq_norm
          << ")";
      throw structure_error(msg.str());
    }
    out.lambdas.push_back(lambda);
    out.pure_scalar.push_back(std::abs(lambda) >= 1.0 - 1e-12);
    out.nilpotents.push_back(std::move(n));
  }
  return out;
}

namespace {

bool spans_are_aligned(const std::vector<ComplexVector>& ys) {
  for (std::size_t i = 0; i < ys.size(); ++i)
    for (std::size_t j = i + 1; j < ys.size(); ++j)
      if (std::abs(ys[i].dot(ys[j])) < 1.0 - 1e-10) return false;
  return true;
}

}  // namespace

NilpotentStructure decompose_nilpotents(const CommutingTuple& t) {
  if (t.dim != 3)
    throw invalid_input_error("decompose_nilpotents: dimension must be 3");
  if (t.commutation_residual > 1e-10)
    throw invalid_input_error(
        "decompose_nilpotents: tuple does not commute within 1e-10");
  std::vector<std::size_t> nonzero;
  std::vector<ComplexVector> xs, ys;  // A_i = x_i y_i*
  for (std::size_t i = 0; i < t.size(); ++i) {
    const ComplexMatrix& a = t.matrices[i];
    const double a_norm = operator_norm(a);
    if (a_norm <= 1e-14) continue;
    const double sq = operator_norm(ComplexMatrix(a * a));
    if (sq > 1e-10) {
      std::ostringstream msg;
      msg << "decompose_nilpotents: matrix " << i
          << " is not nilpotent of order 2 (||A^2|| = " << sq << ")";
      throw structure_error(msg.str());
    }
    auto [v, f] = rank_one_factor(a);
    nonzero.push_back(i);
    xs.push_back(std::move(v));
    ys.push_back(std::move(f));
  }

  NilpotentStructure out;
  if (nonzero.empty()) {
    // all-zero family: any normal form works; fix f = e1
    out.orientation = NilpotentOrientation::kColumn;
    out.f = ComplexVector::Zero(3);
    out.f[0] = 1.0;
    out.vs.assign(t.size(), ComplexVector::Zero(3));
    out.residual = 0.0;
    return out;
  }

  std::vector<ComplexVector> x_units;
  for (const auto& x : xs) x_units.push_back(x.normalized());

  if (spans_are_aligned(ys)) {
    out.orientation = NilpotentOrientation::kColumn;
    out.f = ys[0];
  } else if (spans_are_aligned(x_units)) {
    out.orientation = NilpotentOrientation::kRow;
    // rank_one_factor's phase convention lives on the f side; re-anchor it
    // on the shared left vector.
    ComplexVector f = x_units[0];
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (std::abs(f[i]) > 1e-12) {
        f *= std::conj(f[i] / std::abs(f[i]));
        break;
      }
    }
    out.f = f;
  } else {
    throw structure_error(
        "decompose_nilpotents: neither left nor right vectors span a line; "
        "input violates the commuting order-2 nilpotent hypotheses");
  }

  out.vs.assign(t.size(), ComplexVector::Zero(3));
  double worst = 0.0;
  for (std::size_t idx = 0; idx < nonzero.size(); ++idx) {
    const std::size_t i = nonzero[idx];
    const ComplexMatrix& a = t.matrices[i];
    // v_i is recovered exactly from the action on f.
    ComplexVector v = (out.orientation == NilpotentOrientation::kColumn)
                          ? ComplexVector(a * out.f)
                          : ComplexVector(a.adjoint() * out.f);
    out.vs[i] = std::move(v);
    worst = std::max(worst, operator_norm(ComplexMatrix(a - out.reconstruct(i))));
    const double ortho = std::abs(out.f.dot(out.vs[i]));
    if (ortho > 1e-10) {
      std::ostringstream msg;
      msg << "decompose_nilpotents: v_" << i
          << " is not orthogonal to f (|<v,f>| = " << ortho << ")";
      throw structure_error(msg.str());
    }
  }
  if (worst > 1e-10) {
    std::ostringstream msg;
    msg << "decompose_nilpotents: reconstruction residual " << worst
        << " exceeds tolerance";
    throw structure_error(msg.str());
  }
  out.residual = worst;
  return out;
}

namespace {

// Orthonormal basis of the orthogonal complement of a unit vector, chosen
// deterministically by completing with standard basis vectors.
std::vector<ComplexVector> complement_basis(const ComplexVector& f) {
  const Eigen::Index dim = f.size();
  std::vector<ComplexVector> inputs{f};
  std::vector<ComplexVector> ortho{f.normalized()};
  for (Eigen::Index j = 0; j < dim && ortho.size() < std::size_t(dim); ++j) {
    ComplexVector e = ComplexVector::Zero(dim);
    e[j] = 1.0;
    ComplexVector q = e;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : ortho) q -= u.dot(q) * u;
    if (q.norm() > 1e-4) ortho.push_back(q.normalized());
  }
  return {ortho.begin() + 1, ortho.end()};
}

CommutingTuple random_poly_of_seed_matrix(int dim, int count, Rng& rng) {
  ComplexMatrix t = rng.matrix(dim, dim);
  t /= 2.0 * operator_norm(t);
  std::vector<ComplexMatrix> ms;
  for (int i = 0; i < count; ++i) {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix power = ComplexMatrix::Identity(dim, dim);
    for (int d = 0; d < dim; ++d) {
      a += rng.complex_normal() * power;
      power = ComplexMatrix(power * t);
    }
    const double norm = operator_norm(a);
    if (norm > 0) a *= (1.0 - 1e-6) / norm;
    ms.push_back(std::move(a));
  }
  return CommutingTuple::make(std::move(ms));
}

CommutingTuple random_structured_nilpotent(int dim, int count, Rng& rng) {
  const ComplexVector f = rng.unit_vector(dim);
  const auto comp = complement_basis(f);
  std::vector<ComplexMatrix> ms;
  for (int i = 0; i < count; ++i) {
    ComplexVector v = ComplexVector::Zero(dim);
    for (const auto& g : comp) v += rng.complex_normal() * g;
    const double scale = (1.0 - 1e-6) * rng.uniform(0.2, 1.0) / v.norm();
    v *= scale;
    ms.push_back(ComplexMatrix(v * f.adjoint()));
  }
  return CommutingTuple::make(std::move(ms));
}

CommutingTuple random_scalar_plus_nilpotent(int dim, int count, Rng& rng) {
  const ComplexVector f = rng.unit_vector(dim);
  const auto comp = complement_basis(f);
  std::vector<ComplexMatrix> ms;
  for (int i = 0; i < count; ++i) {
    const Complex lambda =
        0.7 * std::sqrt(rng.uniform()) * rng.unimodular();
    ComplexVector v = ComplexVector::Zero(dim);
    for (const auto& g : comp) v += rng.complex_normal() * g;
    v.normalize();
    const ComplexMatrix nil = v * f.adjoint();
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    // largest nilpotent coefficient keeping ||lambda I + t N|| <= 1 - 1e-6,
    // found by bisection (the norm is increasing in t)
    const double cap = 1.0 - 1e-6;
    double lo = 0.0, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (operator_norm(ComplexMatrix(lambda * id + mid * nil)) <= cap ? lo : hi) =
          mid;
    }
    const double t = lo * rng.uniform();
    ms.push_back(ComplexMatrix(lambda * id + t * nil));
  }
  return CommutingTuple::make(std::move(ms));
}

}  // namespace

CommutingTuple random_commuting_contractions(int dim, int count,
                                             std::uint64_t seed,
                                             RandomScheme scheme) {
  if (dim < 2 || dim > 4)
    throw invalid_input_error("random_commuting_contractions: dim must be 2..4");
  if (count < 2)
    throw invalid_input_error("random_commuting_contractions: count must be >= 2");
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(scheme)));
  switch (scheme) {
    case RandomScheme::kPolyOfSeedMatrix:
      return random_poly_of_seed_matrix(dim, count, rng);
    case RandomScheme::kStructuredNilpotent:
      return random_structured_nilpotent(dim, count, rng);
    case RandomScheme::kScalarPlusNilpotent:
      return random_scalar_plus_nilpotent(dim, count, rng);
  }
  throw invalid_input_error("random_commuting_contractions: unknown scheme");
}

}  // namespace vnd
