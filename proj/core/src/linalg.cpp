#include "vnd/linalg.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace vnd {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw invalid_input_error("operator_norm: empty matrix");
  if (!all_finite(m))
    throw invalid_input_error("operator_norm: non-finite entries");
  // A single row or column is its own singular vector.
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  if (m.rows() <= 64 && m.cols() <= 64) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

std::vector<ComplexVector> gram_schmidt(const std::vector<ComplexVector>& vs) {
  if (vs.empty()) throw invalid_input_error("gram_schmidt: empty input");
  const Eigen::Index dim = vs[0].size();
  std::vector<ComplexVector> out;
  out.reserve(vs.size());
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const ComplexVector& v = vs[k];
    if (v.size() != dim)
      throw invalid_input_error("gram_schmidt: mixed dimensions");
    if (!all_finite(v))
      throw invalid_input_error("gram_schmidt: non-finite entries");
    const double input_norm = v.norm();
    ComplexVector q = v;
    // modified Gram-Schmidt, then one re-orthogonalization pass
    for (int pass = 0; pass < 2; ++pass)
      for (const ComplexVector& e : out) q -= e.dot(q) * e;
    const double residual = q.norm();
    if (residual < 1e-8 * input_norm) {
      std::ostringstream msg;
      msg << "gram_schmidt: input " << k
          << " is numerically dependent on its predecessors (residual "
          << residual << " vs norm " << input_norm << ")";
      throw degeneracy_error(msg.str());
    }
    q /= residual;
    // phase convention: <output, input> real and positive
    const Complex ip = q.dot(v);  // conj(q) . v
    if (std::abs(ip) > 0) q *= ip / std::abs(ip);
    out.push_back(std::move(q));
  }
  return out;
}

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b,
                        Eigen::Index cap) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > cap || cols > cap) {
    std::ostringstream msg;
    msg << "kronecker: result dimension " << rows << "x" << cols
        << " exceeds cap " << cap;
    throw capacity_error(msg.str());
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix cyclic_shift(int n) {
  if (n < 2) throw invalid_input_error("cyclic_shift: N must be >= 2");
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) c((j + 1) % n, j) = 1.0;
  return c;
}

std::pair<ComplexVector, ComplexVector> rank_one_factor(const ComplexMatrix& a) {
  if (!all_finite(a))
    throw invalid_input_error("rank_one_factor: non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double s0 = sv(0);
  const double s1 = sv.size() > 1 ? sv(1) : 0.0;
  if (s0 <= 0 || s1 > 1e-10 * s0) {
    std::ostringstream msg;
    msg << "rank_one_factor: input is not numerically rank one (sigma_1 = "
        << s0 << ", sigma_2 = " << s1 << ")";
    throw structure_error(msg.str());
  }
  ComplexVector v = s0 * svd.matrixU().col(0);
  ComplexVector f = svd.matrixV().col(0);
  // phase convention: first nonzero entry of f real and positive
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) > 1e-12) {
      const Complex phase = f[i] / std::abs(f[i]);
      f *= std::conj(phase);
      v *= std::conj(phase);
      break;
    }
  }
  return {std::move(v), std::move(f)};
}

double commutation_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw invalid_input_error(
        "commutation_residual: matrices must be square and of equal size");
  return operator_norm(a * b - b * a);
}

}  // namespace vnd
