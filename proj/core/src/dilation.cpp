#include "vnd/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace vnd {

namespace {

void require_unit(const ComplexVector& v, const char* what) {
  if (v.size() != 2 || std::abs(v.norm() - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << what << " must be a unit vector in C^2 (norm " << v.norm() << ")";
    throw invalid_input_error(msg.str());
  }
}

// 2x2 unitary built from its second column (alpha, beta), first column
// chosen as (conj(beta), -conj(alpha)).
ComplexMatrix unitary_from_column(Complex alpha, Complex beta) {
  ComplexMatrix u(2, 2);
  u(0, 0) = std::conj(beta);
  u(0, 1) = alpha;
  u(1, 0) = -std::conj(alpha);
  u(1, 1) = beta;
  return u;
}

}  // namespace

UnitaryTripleResult three_vector_unitaries(const ComplexVector& v1,
                                           const ComplexVector& v2,
                                           const ComplexVector& v3) {
  require_unit(v1, "v1");
  require_unit(v2, "v2");
  require_unit(v3, "v3");

  // rotation with Q v1 = (0, 1), deterministic phase
  ComplexMatrix q(2, 2);
  q(0, 0) = -v1[1];
  q(0, 1) = v1[0];
  q(1, 0) = std::conj(v1[0]);
  q(1, 1) = std::conj(v1[1]);
  const ComplexVector w2 = q * v2;
  const ComplexVector w3 = q * v3;

  UnitaryTripleResult out;
  out.basis_rotation = q;
  std::array<ComplexMatrix, 3> rot;
  rot[0] = ComplexMatrix::Identity(2, 2);

  if (std::abs(1.0 - std::abs(v1.dot(v2))) < 1e-12) {
    // v2 = e^{i theta} v1: scalar unitary for the second slot
    out.dependent_branch = true;
    const Complex phase = w2[1];
    rot[1] = phase * ComplexMatrix::Identity(2, 2);
    rot[2] = unitary_from_column(w3[0], w3[1]);
    out.sigma2 = Complex(1.0);
    out.sigma3 = Complex(1.0);
  } else {
    // solve w3 = a0 * (0,1) + b0 * w2
    ComplexMatrix sys(2, 2);
    sys(0, 0) = 0.0;
    sys(1, 0) = 1.0;
    sys(0, 1) = w2[0];
    sys(1, 1) = w2[1];
    const ComplexVector ab = sys.fullPivLu().solve(w3);
    const Complex a0 = ab[0], b0 = ab[1];
    const Complex s3 =
        std::abs(a0) > 0 ? std::exp(Complex(0.0, -std::arg(a0))) : Complex(1.0);
    const Complex s2 = std::abs(b0) > 0
                           ? std::exp(Complex(0.0, std::arg(b0 * s3)))
                           : Complex(1.0);
    const ComplexVector w2p = s2 * w2;
    const ComplexVector w3p = s3 * w3;
    rot[1] = std::conj(s2) * unitary_from_column(w2p[0], w2p[1]);
    rot[2] = std::conj(s3) * unitary_from_column(w3p[0], w3p[1]);
    out.sigma2 = s2;
    out.sigma3 = s3;
    out.a = std::abs(a0);
    out.b = std::abs(b0);
  }

  out.rotated_unitaries = rot;
  for (int i = 0; i < 3; ++i) out.unitaries[i] = q.adjoint() * rot[i] * q;
  return out;
}

CornerUnitary corner_unitary(Complex a, int window) {
  if (window < 3)
    throw invalid_input_error("corner_unitary: window must be >= 3");
  if (std::abs(a) > 1.0 + 1e-12)
    throw invalid_input_error("corner_unitary: |a| must be <= 1");
  CornerUnitary out;
  out.a = a;
  out.d = std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
  out.window = window;
  ComplexMatrix m = ComplexMatrix::Zero(window, window);
  m(0, 0) = a;
  m(1, 0) = out.d;
  for (int j = 1; j < window - 1; ++j) m(j + 1, j) = 1.0;
  m(0, window - 1) = -out.d;
  m(1, window - 1) = std::conj(a);
  out.matrix = std::move(m);
  return out;
}

namespace {

// Orthonormal basis of the orthogonal complement of a unit vector in C^3.
ComplexMatrix complement_of(const ComplexVector& f) {
  ComplexMatrix g(3, 2);
  std::vector<ComplexVector> ortho{f.normalized()};
  int col = 0;
  for (Eigen::Index j = 0; j < 3 && col < 2; ++j) {
    ComplexVector e = ComplexVector::Zero(3);
    e[j] = 1.0;
    ComplexVector w = e;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : ortho) w -= u.dot(w) * u;
    if (w.norm() > 1e-4) {
      w.normalize();
      ortho.push_back(w);
      g.col(col++) = w;
    }
  }
  return g;
}

struct Frame {
  ComplexVector f;
  ComplexMatrix g;  // 3x2 complement of f
  UnitaryTripleResult triple;
  std::array<ComplexMatrix, 3> w;  // cyclic_shift(N) (x) rotated U_i
  ComplexMatrix e;                 // 2N x 3 embedding
};

// Shared shift-tensor frame: rotated-frame unitaries on 2N cells and the
// embedding of C^3 at cells 0-1.
Frame build_frame(const std::array<ComplexVector, 3>& xs, const ComplexVector& f,
                  int window) {
  Frame fr;
  fr.f = f;
  fr.g = complement_of(f);
  fr.triple = three_vector_unitaries(xs[0], xs[1], xs[2]);
  const ComplexMatrix shift = cyclic_shift(window);
  for (int i = 0; i < 3; ++i)
    fr.w[i] = kronecker(shift, fr.triple.rotated_unitaries[i]);
  ComplexMatrix e_cells = ComplexMatrix::Zero(2 * window, 3);
  e_cells(1, 0) = 1.0;  // cell 0, second coordinate
  e_cells(2, 1) = 1.0;  // cell 1, first coordinate
  e_cells(3, 2) = 1.0;  // cell 1, second coordinate
  ComplexMatrix t3(3, 3);
  t3.row(0) = f.adjoint();
  t3.bottomRows(2) = fr.triple.basis_rotation * fr.g.adjoint();
  fr.e = e_cells * t3;
  return fr;
}

// ((w + lambda) / (1 + conj(lambda) w))^k as a truncated power series.
std::vector<Complex> inverse_mobius_power_series(Complex lambda, int k,
                                                 int trunc) {
  std::vector<Complex> base(trunc + 1, 0.0);
  // (w + lambda) * sum_m (-conj(lambda) w)^m
  Complex den = 1.0;  // (-conj(lambda))^m
  base[0] = lambda;
  for (int m = 1; m <= trunc; ++m) {
    base[m] = den + lambda * (den * -std::conj(lambda));
    den *= -std::conj(lambda);
  }
  std::vector<Complex> out(trunc + 1, 0.0);
  out[0] = 1.0;
  std::vector<Complex> next(trunc + 1);
  for (int rep = 0; rep < k; ++rep) {
    std::fill(next.begin(), next.end(), Complex(0.0));
    for (int m = 0; m <= trunc; ++m) {
      if (out[m] == Complex(0.0)) continue;
      for (int j = 0; j + m <= trunc; ++j) next[m + j] += out[m] * base[j];
    }
    out.swap(next);
  }
  return out;
}

// (F^m)_{11} for m = 0..trunc via vector iteration.
std::vector<Complex> corner_moments(const ComplexMatrix& f, int trunc) {
  std::vector<Complex> seq(trunc + 1);
  ComplexVector x = ComplexVector::Zero(f.rows());
  x[0] = 1.0;
  for (int m = 0; m <= trunc; ++m) {
    seq[m] = x[0];
    if (m < trunc) x = f * x;
  }
  return seq;
}

// Apply the e1-corner compression of op^k to the columns of x, where op acts
// on (first factor space) (x) (corner slots) and x lives in the first factor
// space. Returns sum_m coef[m] F0^m x with the slot moments folded into coef.
ComplexMatrix apply_compressed_power(const DilationOperator& op, int k,
                                     const ComplexMatrix& x, int trunc) {
  const ComplexMatrix& f0 = op.factors[0];
  std::vector<Complex> moments(trunc + 1, 1.0);
  for (std::size_t j = 1; j < op.factors.size(); ++j) {
    const auto seq = corner_moments(op.factors[j], trunc);
    for (int m = 0; m <= trunc; ++m) moments[m] *= seq[m];
  }
  if (!op.mobius_lambda) {
    ComplexMatrix out = x;
    for (int m = 0; m < k; ++m) out = f0 * out;
    return moments[std::min(k, trunc)] * out;
  }
  std::vector<Complex> coef =
      inverse_mobius_power_series(*op.mobius_lambda, k, trunc);
  double peak = 0.0;
  for (int m = 0; m <= trunc; ++m) {
    coef[m] *= moments[m];
    peak = std::max(peak, std::abs(coef[m]));
  }
  int last = trunc;
  while (last > 0 && std::abs(coef[last]) <= 1e-18 * std::max(1.0, peak))
    --last;
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  ComplexMatrix power = x;
  for (int m = 0; m <= last; ++m) {
    if (coef[m] != Complex(0.0)) out += coef[m] * power;
    if (m < last) power = f0 * power;
  }
  return out;
}

int series_truncation(const DilationResult& r) {
  int slot = 0;
  for (const auto& op : r.unitaries)
    for (std::size_t j = 1; j < op.factors.size(); ++j)
      slot = std::max(slot, static_cast<int>(op.factors[j].rows()));
  return std::min(2000, std::max(360, 6 * slot));
}

ComplexMatrix materialize_dense(const DilationOperator& op) {
  ComplexMatrix m = op.is_dense() ? op.dense : op.factors[0];
  if (!op.is_dense())
    for (std::size_t j = 1; j < op.factors.size(); ++j)
      m = kronecker(m, op.factors[j]);
  if (op.mobius_lambda) m = mobius_of_matrix(*op.mobius_lambda, m, true);
  if (op.adjoint) m = m.adjoint().eval();
  return m;
}

VerificationTable compute_error_table(const DilationResult& r,
                                      const CommutingTuple& t, int max_degree) {
  if (t.size() != r.unitaries.size())
    throw invalid_input_error("verify_power_dilation: operator count mismatch");
  if (t.size() != 3)
    throw invalid_input_error("verify_power_dilation: expected three operators");
  bool adj = r.unitaries[0].adjoint;
  for (const auto& op : r.unitaries)
    if (op.adjoint != adj)
      throw invalid_input_error(
          "verify_power_dilation: mixed adjoint orientation");

  const bool factored = !r.unitaries[0].is_dense();
  const int trunc = factored ? series_truncation(r) : 0;

  // dense path keeps the full operators; factored path works through the
  // first-factor space with corner moments folded into series coefficients
  std::array<ComplexMatrix, 3> dense_ops;
  if (!factored) {
    // the operator itself may carry adjoint/Moebius markers; compressions of
    // adjoints are handled below, so materialize the underlying matrices
    for (int i = 0; i < 3; ++i) {
      DilationOperator base = r.unitaries[i];
      base.adjoint = false;
      dense_ops[i] = materialize_dense(base);
    }
  }

  // powers of the target matrices
  const int kmax = max_degree;
  std::vector<std::vector<ComplexMatrix>> apow(3);
  for (int i = 0; i < 3; ++i) {
    apow[i].push_back(ComplexMatrix::Identity(t.dim, t.dim));
    for (int m = 1; m <= kmax; ++m)
      apow[i].push_back(ComplexMatrix(t.matrices[i] * apow[i].back()));
  }

  VerificationTable table;
  auto apply = [&](int i, int k, const ComplexMatrix& x) {
    if (factored) return apply_compressed_power(r.unitaries[i], k, x, trunc);
    ComplexMatrix out = x;
    for (int m = 0; m < k; ++m) out = dense_ops[i] * out;
    return out;
  };

  for (int k3 = 0; k3 <= kmax; ++k3) {
    const ComplexMatrix x3 = apply(2, k3, r.embedding);
    for (int k2 = 0; k2 + k3 <= kmax; ++k2) {
      const ComplexMatrix x23 = apply(1, k2, x3);
      for (int k1 = 0; k1 + k2 + k3 <= kmax; ++k1) {
        const ComplexMatrix x123 = apply(0, k1, x23);
        ComplexMatrix comp = r.embedding.adjoint() * x123;
        if (adj) comp = comp.adjoint().eval();
        const ComplexMatrix truth = apow[0][k1] * apow[1][k2] * apow[2][k3];
        const double err = operator_norm(comp - truth);
        table.errors[{k1, k2, k3}] = err;
        table.max_error = std::max(table.max_error, err);
      }
    }
  }
  table.window_exceeded = max_degree > r.window - 2;
  return table;
}

}  // namespace

DilationResult dilate_unit_nilpotent_triple(const NilpotentStructure& structure,
                                            int window) {
  if (structure.orientation != NilpotentOrientation::kColumn)
    throw invalid_input_error(
        "dilate_unit_nilpotent_triple: column-form structure required; dilate "
        "the adjoint family for row form");
  if (structure.vs.size() != 3)
    throw invalid_input_error(
        "dilate_unit_nilpotent_triple: exactly three operators required");
  if (structure.f.size() != 3)
    throw invalid_input_error("dilate_unit_nilpotent_triple: dimension must be 3");
  if (window < 3)
    throw invalid_input_error("dilate_unit_nilpotent_triple: window must be >= 3");
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(structure.vs[i].norm() - 1.0) > 1e-8) {
      std::ostringstream msg;
      msg << "dilate_unit_nilpotent_triple: v_" << i
          << " must be a unit vector (norm " << structure.vs[i].norm() << ")";
      throw invalid_input_error(msg.str());
    }

  const ComplexVector f = structure.f.normalized();
  const ComplexMatrix g = complement_of(f);
  std::array<ComplexVector, 3> xs;
  for (int i = 0; i < 3; ++i) {
    ComplexVector x = g.adjoint() * structure.vs[i];
    xs[i] = x.normalized();
  }
  Frame fr = build_frame(xs, f, window);

  DilationResult out;
  out.space_dim = 2 * window;
  out.window = window;
  out.max_degree = window - 2;
  out.embedding = fr.e;
  for (int i = 0; i < 3; ++i) {
    DilationOperator op;
    op.dense = fr.w[i];
    out.unitaries.push_back(std::move(op));
  }

  double unit_res = 0.0, comm_res = 0.0;
  for (int i = 0; i < 3; ++i) {
    unit_res = std::max(
        unit_res, operator_norm(ComplexMatrix(fr.w[i].adjoint() * fr.w[i]) -
                                ComplexMatrix::Identity(2 * window, 2 * window)));
    for (int j = i + 1; j < 3; ++j)
      comm_res = std::max(comm_res, commutation_residual(fr.w[i], fr.w[j]));
  }
  out.unitarity_residual = unit_res;
  out.commutation_residual = comm_res;

  std::vector<ComplexMatrix> targets;
  for (std::size_t i = 0; i < 3; ++i) targets.push_back(structure.reconstruct(i));
  const CommutingTuple t = CommutingTuple::make(std::move(targets));
  VerificationTable table = compute_error_table(out, t, out.max_degree);
  out.error_table = std::move(table.errors);
  out.max_error = table.max_error;
  return out;
}

DilationResult dilate_triple(const CommutingTuple& t, int window,
                             int scale_window, int max_degree) {
  if (t.size() != 3 || t.dim != 3)
    throw invalid_input_error("dilate_triple: expected three 3x3 matrices");
  if (window < 3 || scale_window < 3)
    throw invalid_input_error("dilate_triple: windows must be >= 3");
  if (max_degree < 0)
    throw invalid_input_error("dilate_triple: max_degree must be >= 0");
  for (std::size_t i = 0; i < 3; ++i)
    if (operator_norm(t.matrices[i]) > 1.0 + 1e-10) {
      std::ostringstream msg;
      msg << "dilate_triple: matrix " << i << " is not a contraction (norm "
          << operator_norm(t.matrices[i]) << ")";
      throw invalid_input_error(msg.str());
    }

  CommutingTuple work = t;
  bool adjoint_mode = false;
  ScalarNilpotentSplit split = split_scalar_nilpotent(work);
  auto masked_nilpotents = [&]() {
    std::vector<ComplexMatrix> ns;
    for (std::size_t i = 0; i < 3; ++i)
      ns.push_back(split.pure_scalar[i]
                       ? ComplexMatrix(ComplexMatrix::Zero(3, 3))
                       : split.nilpotents[i]);
    return CommutingTuple::make(std::move(ns));
  };
  NilpotentStructure st = decompose_nilpotents(masked_nilpotents());
  if (st.orientation == NilpotentOrientation::kRow) {
    adjoint_mode = true;
    work = t.adjoint();
    split = split_scalar_nilpotent(work);
    st = decompose_nilpotents(masked_nilpotents());
    if (st.orientation != NilpotentOrientation::kColumn)
      throw structure_error(
          "dilate_triple: adjoint family is not column-form");
  }

  const ComplexVector f =
      st.f.norm() > 0 ? ComplexVector(st.f.normalized()) : st.f;
  const ComplexMatrix g = complement_of(f);

  std::array<double, 3> radius{0.0, 0.0, 0.0};
  std::array<ComplexVector, 3> xs;
  std::array<bool, 3> fabricated{false, false, false};
  for (int i = 0; i < 3; ++i) {
    if (split.pure_scalar[i]) {
      fabricated[i] = true;
      continue;
    }
    const ComplexMatrix b = mobius_of_matrix(split.lambdas[i], work.matrices[i]);
    double r = operator_norm(b);
    if (r > 1.0 + 1e-8) {
      std::ostringstream msg;
      msg << "dilate_triple: Moebius image of matrix " << i
          << " has norm " << r << " > 1";
      throw invalid_input_error(msg.str());
    }
    radius[i] = std::min(r, 1.0);
    if (st.vs[i].norm() > 1e-12) {
      ComplexVector x = g.adjoint() * st.vs[i];
      xs[i] = x.normalized();
    } else {
      radius[i] = 0.0;
      fabricated[i] = true;
    }
  }
  // fabricate direction vectors for scalar or zero-nilpotent slots: reuse the
  // first genuine one so the dependent branch keeps the construction exact
  ComplexVector fallback(2);
  fallback << 1.0, 0.0;
  for (int i = 0; i < 3; ++i)
    if (!fabricated[i]) {
      fallback = xs[i];
      break;
    }
  for (int i = 0; i < 3; ++i)
    if (fabricated[i]) xs[i] = fallback;

  Frame fr = build_frame(xs, f, window);
  const ComplexMatrix slot_id =
      ComplexMatrix::Identity(scale_window, scale_window);

  DilationResult out;
  out.window = window;
  out.scale_windows = {scale_window, scale_window, scale_window};
  out.max_degree = max_degree;
  out.embedding = fr.e;
  out.space_dim = static_cast<std::int64_t>(2 * window) * scale_window *
                  scale_window * scale_window;

  std::array<double, 3> amp{0.0, 0.0, 0.0};
  std::array<double, 3> factor_unit_res{0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    DilationOperator op;
    op.adjoint = adjoint_mode;
    if (split.pure_scalar[i]) {
      op.factors.push_back(split.lambdas[i] *
                           ComplexMatrix::Identity(2 * window, 2 * window));
      for (int j = 0; j < 3; ++j) op.factors.push_back(slot_id);
      factor_unit_res[i] = std::abs(std::norm(split.lambdas[i]) - 1.0);
    } else {
      op.factors.push_back(fr.w[i]);
      for (int j = 0; j < 3; ++j)
        op.factors.push_back(j == i ? corner_unitary(radius[i], scale_window).matrix
                                    : slot_id);
      op.mobius_lambda = split.lambdas[i];
      amp[i] = 1.0 + 2.0 * std::abs(split.lambdas[i]);
      double eps = 1.0;
      for (const auto& fm : op.factors)
        eps *= 1.0 + operator_norm(ComplexMatrix(
                         fm.adjoint() * fm -
                         ComplexMatrix::Identity(fm.rows(), fm.cols())));
      eps -= 1.0;
      const double lam = std::abs(split.lambdas[i]);
      factor_unit_res[i] = eps * (1.0 + lam) / (1.0 - lam);
    }
    out.unitaries.push_back(std::move(op));
  }
  out.unitarity_residual =
      *std::max_element(factor_unit_res.begin(), factor_unit_res.end());

  double comm = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      if (split.pure_scalar[i] || split.pure_scalar[j]) continue;
      comm = std::max(comm, amp[i] * amp[j] *
                                commutation_residual(fr.w[i], fr.w[j]));
    }
  out.commutation_residual = comm;

  VerificationTable table = compute_error_table(out, t, max_degree);
  out.error_table = std::move(table.errors);
  out.max_error = table.max_error;
  return out;
}

ComplexMatrix isometric_coextension_single(const ComplexMatrix& a, int depth) {
  if (a.rows() != a.cols())
    throw invalid_input_error("isometric_coextension_single: square input required");
  if (depth < 2)
    throw invalid_input_error("isometric_coextension_single: depth must be >= 2");
  if (operator_norm(a) > 1.0 + 1e-12)
    throw invalid_input_error(
        "isometric_coextension_single: input is not a contraction");
  const Eigen::Index n = a.rows();
  const ComplexMatrix gram =
      ComplexMatrix::Identity(n, n) - ComplexMatrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix defect = eig.eigenvectors() * vals.asDiagonal() *
                               eig.eigenvectors().adjoint();

  const Eigen::Index dim = n * (depth + 1);
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  s.block(0, 0, n, n) = a;
  s.block(n, 0, n, n) = defect;
  for (int j = 1; j < depth; ++j)
    s.block((j + 1) * n, j * n, n, n) = ComplexMatrix::Identity(n, n);
  return s;
}

VerificationTable verify_power_dilation(const DilationResult& r,
                                        const CommutingTuple& t,
                                        int max_degree) {
  if (r.embedding.cols() != t.dim)
    throw invalid_input_error(
        "verify_power_dilation: embedding does not match the tuple dimension");
  if (max_degree < 0)
    throw invalid_input_error("verify_power_dilation: max_degree must be >= 0");
  return compute_error_table(r, t, max_degree);
}

}  // namespace vnd
