#include "vnd/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "vnd/rng.hpp"

namespace vnd {

int total_degree(const MultiIndex& k) {
  int d = 0;
  for (int e : k) d += e;
  return d;
}

MatrixPolynomial MatrixPolynomial::scalar(int num_vars) {
  MatrixPolynomial p;
  p.num_vars = num_vars;
  p.out_rows = 1;
  p.out_cols = 1;
  return p;
}

void MatrixPolynomial::add_term(const MultiIndex& k, const ComplexMatrix& coeff) {
  if (static_cast<int>(k.size()) != num_vars)
    throw invalid_input_error("add_term: multi-index length mismatch");
  for (int e : k)
    if (e < 0) throw invalid_input_error("add_term: negative exponent");
  if (coeff.rows() != out_rows || coeff.cols() != out_cols)
    throw invalid_input_error("add_term: coefficient shape mismatch");
  auto it = terms.find(k);
  if (it == terms.end())
    terms.emplace(k, coeff);
  else
    it->second += coeff;
}

void MatrixPolynomial::add_scalar_term(const MultiIndex& k, Complex coeff) {
  ComplexMatrix m(1, 1);
  m(0, 0) = coeff;
  add_term(k, m);
}

void MatrixPolynomial::prune(double tol) {
  for (auto it = terms.begin(); it != terms.end();)
    it = (it->second.norm() <= tol) ? terms.erase(it) : std::next(it);
}

int MatrixPolynomial::max_total_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms) d = std::max(d, total_degree(k));
  return d;
}

double MatrixPolynomial::torus_lipschitz_bound() const {
  double l = 0.0;
  for (const auto& [k, c] : terms)
    l += static_cast<double>(total_degree(k)) * operator_norm(c);
  return l;
}

void MatrixPolynomial::validate() const {
  if (num_vars < 1)
    throw invalid_input_error("MatrixPolynomial: num_vars must be >= 1");
  if (out_rows < 1 || out_cols < 1)
    throw invalid_input_error("MatrixPolynomial: empty coefficient shape");
  for (const auto& [k, c] : terms) {
    if (static_cast<int>(k.size()) != num_vars)
      throw invalid_input_error("MatrixPolynomial: multi-index length mismatch");
    for (int e : k)
      if (e < 0) throw invalid_input_error("MatrixPolynomial: negative exponent");
    if (c.rows() != out_rows || c.cols() != out_cols)
      throw invalid_input_error("MatrixPolynomial: coefficient shape mismatch");
    if (!all_finite(c))
      throw invalid_input_error("MatrixPolynomial: non-finite coefficient");
  }
}

ComplexMatrix evaluate_scalar_point(const MatrixPolynomial& p,
                                    const std::vector<Complex>& z) {
  p.validate();
  if (static_cast<int>(z.size()) != p.num_vars)
    throw invalid_input_error("evaluate_scalar_point: point length mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(p.out_rows, p.out_cols);
  for (const auto& [k, c] : p.terms) {
    Complex mono = 1.0;
    for (int i = 0; i < p.num_vars; ++i)
      for (int e = 0; e < k[i]; ++e) mono *= z[i];
    out += mono * c;
  }
  return out;
}

ComplexMatrix evaluate_matrix_tuple(const MatrixPolynomial& p,
                                    const CommutingTuple& t) {
  p.validate();
  if (static_cast<int>(t.size()) != p.num_vars)
    throw invalid_input_error("evaluate_matrix_tuple: tuple size mismatch");
  if (t.commutation_residual > 1e-8) {
    std::ostringstream msg;
    msg << "evaluate_matrix_tuple: commutation residual "
        << t.commutation_residual << " exceeds 1e-8";
    throw invalid_input_error(msg.str());
  }
  const Eigen::Index d = t.dim;
  std::map<MultiIndex, ComplexMatrix> monomials;
  monomials.emplace(MultiIndex(p.num_vars, 0), ComplexMatrix::Identity(d, d));
  // build each needed monomial by peeling one factor off the first active slot
  auto monomial = [&](const MultiIndex& k, auto&& self) -> const ComplexMatrix& {
    auto it = monomials.find(k);
    if (it != monomials.end()) return it->second;
    MultiIndex prev = k;
    int slot = 0;
    while (prev[slot] == 0) ++slot;
    --prev[slot];
    ComplexMatrix m = t.matrices[slot] * self(prev, self);
    return monomials.emplace(k, std::move(m)).first->second;
  };
  ComplexMatrix out = ComplexMatrix::Zero(p.out_rows * d, p.out_cols * d);
  for (const auto& [k, c] : p.terms) {
    const ComplexMatrix& m = monomial(k, monomial);
    for (Eigen::Index i = 0; i < p.out_rows; ++i)
      for (Eigen::Index j = 0; j < p.out_cols; ++j)
        out.block(i * d, j * d, d, d) += c(i, j) * m;
  }
  return out;
}

namespace {

double fast_norm(const ComplexMatrix& m) {
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  return operator_norm(m);
}

struct Term {
  MultiIndex k;  // suffix of exponents from the current level
  ComplexMatrix c;
};

// Lexicographic scan of the mesh^n grid, collapsing one variable per level.
// The callback receives the squared norm at each grid point.
template <typename Cb>
void scan_level(const std::vector<Term>& terms, int level, int num_vars,
                const std::vector<Complex>& circle,
                std::vector<std::uint32_t>& idx, Cb&& cb) {
  const int mesh = static_cast<int>(circle.size());
  int maxdeg = 0;
  for (const auto& t : terms) maxdeg = std::max(maxdeg, t.k[0]);
  std::vector<Complex> zpow(maxdeg + 1);
  if (level == num_vars - 1) {
    // innermost level: raw accumulation, no per-point allocations
    const Eigen::Index rows = terms[0].c.rows();
    const Eigen::Index cols = terms[0].c.cols();
    const std::size_t ncoef = static_cast<std::size_t>(rows) * cols;
    const bool vector_shape = rows == 1 || cols == 1;
    std::vector<Complex> accv(ncoef);
    ComplexMatrix m(rows, cols);
    for (int j = 0; j < mesh; ++j) {
      const Complex z = circle[j];
      zpow[0] = 1.0;
      for (int e = 1; e <= maxdeg; ++e) zpow[e] = zpow[e - 1] * z;
      idx[level] = static_cast<std::uint32_t>(j);
      std::fill(accv.begin(), accv.end(), Complex(0.0));
      for (const auto& t : terms) {
        const Complex mono = zpow[t.k[0]];
        const Complex* coef = t.c.data();
        for (std::size_t e = 0; e < ncoef; ++e) accv[e] += mono * coef[e];
      }
      double value_sq;
      if (vector_shape) {
        double sq = 0.0;
        for (const Complex& w : accv) sq += std::norm(w);
        value_sq = sq;
      } else {
        std::copy(accv.begin(), accv.end(), m.data());
        const double v = operator_norm(m);
        value_sq = v * v;
      }
      cb(idx, value_sq);
    }
    return;
  }
  for (int j = 0; j < mesh; ++j) {
    const Complex z = circle[j];
    zpow[0] = 1.0;
    for (int e = 1; e <= maxdeg; ++e) zpow[e] = zpow[e - 1] * z;
    idx[level] = static_cast<std::uint32_t>(j);
    {
      std::map<MultiIndex, ComplexMatrix> merged;
      for (const auto& t : terms) {
        MultiIndex suffix(t.k.begin() + 1, t.k.end());
        auto it = merged.find(suffix);
        if (it == merged.end())
          merged.emplace(std::move(suffix), ComplexMatrix(zpow[t.k[0]] * t.c));
        else
          it->second += zpow[t.k[0]] * t.c;
      }
      std::vector<Term> next;
      next.reserve(merged.size());
      for (auto& [k, c] : merged) next.push_back({k, std::move(c)});
      scan_level(next, level + 1, num_vars, circle, idx, cb);
    }
  }
}

template <typename Cb>
void scan_grid(const MatrixPolynomial& p, int mesh, Cb&& cb) {
  std::vector<Complex> circle(mesh);
  for (int j = 0; j < mesh; ++j) {
    const double t = 2.0 * std::numbers::pi * j / mesh;
    circle[j] = {std::cos(t), std::sin(t)};
  }
  std::vector<Term> terms;
  terms.reserve(p.terms.size());
  for (const auto& [k, c] : p.terms) terms.push_back({k, c});
  std::vector<std::uint32_t> idx(p.num_vars, 0);
  scan_level(terms, 0, p.num_vars, circle, idx, cb);
}

double value_at_angles(const MatrixPolynomial& p,
                       const std::vector<double>& angles) {
  std::vector<Complex> z(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i)
    z[i] = {std::cos(angles[i]), std::sin(angles[i])};
  return fast_norm(evaluate_scalar_point(p, z));
}

}  // namespace

TorusSupEstimate sup_norm_torus(const MatrixPolynomial& p,
                                const SupNormOptions& opts) {
  p.validate();
  if (opts.mesh < 2)
    throw invalid_input_error("sup_norm_torus: mesh must be >= 2");
  const int n = p.num_vars;

  TorusSupEstimate est;
  est.mesh = opts.mesh;
  est.argmax_point.assign(n, 0.0);

  if (p.terms.empty()) {
    est.lower = 0.0;
    est.certified_upper = 0.0;
    est.certified = true;
    return est;
  }
  if (p.max_total_degree() == 0) {
    est.lower = operator_norm(p.terms.begin()->second);
    est.certified_upper = est.lower;
    est.certified = true;
    return est;
  }

  double grid_points = 1.0;
  for (int i = 0; i < n; ++i) grid_points *= opts.mesh;
  if (grid_points > static_cast<double>(opts.grid_cap)) {
    std::ostringstream msg;
    msg << "sup_norm_torus: base grid of " << grid_points
        << " points exceeds cap " << opts.grid_cap;
    throw capacity_error(msg.str());
  }

  // --- certification setup: per-cell Lipschitz bound ---
  // Each grid point is the center of a cell of angular width h; on that cell
  // ||p|| <= value_at_center + L * h / 2 with the per-coordinate bound
  // |p(z) - p(w)| <= sum_k ||C_k|| sum_i k_i |theta_i - phi_i|.
  const double lipschitz = p.torus_lipschitz_bound();
  const int denom_shift = opts.max_levels + 1;
  const std::int64_t denom = static_cast<std::int64_t>(opts.mesh) << denom_shift;

  std::vector<Complex> table(denom);
  for (std::int64_t j = 0; j < denom; ++j) {
    const double t = 2.0 * std::numbers::pi * j / denom;
    table[j] = {std::cos(t), std::sin(t)};
  }
  // denom = mesh * 2^(max_levels+1); power-of-two meshes admit a mask
  const bool pow2 = (denom & (denom - 1)) == 0;
  const std::int64_t wrap_mask = denom - 1;
  const bool vector_shape = p.out_rows == 1 || p.out_cols == 1;
  const std::size_t ncoef =
      static_cast<std::size_t>(p.out_rows) * p.out_cols;
  // terms flattened to (axis, exponent) pairs and raw coefficient entries
  struct CellTerm {
    std::vector<std::pair<int, int>> powers;
    std::vector<Complex> coeff;
  };
  std::vector<CellTerm> flat;
  for (const auto& [k, c] : p.terms) {
    CellTerm t;
    for (int i = 0; i < n; ++i)
      if (k[i] != 0) t.powers.emplace_back(i, k[i]);
    t.coeff.assign(c.data(), c.data() + ncoef);
    flat.push_back(std::move(t));
  }
  std::vector<Complex> accv(ncoef);
  ComplexMatrix acc(p.out_rows, p.out_cols);
  auto cell_value_sq = [&](const std::uint32_t* c) {
    std::fill(accv.begin(), accv.end(), Complex(0.0));
    for (const auto& t : flat) {
      Complex mono = 1.0;
      for (const auto& [axis, exp] : t.powers) {
        const std::int64_t pos = static_cast<std::int64_t>(exp) * c[axis];
        mono *= table[pow2 ? (pos & wrap_mask) : (pos % denom)];
      }
      for (std::size_t e = 0; e < ncoef; ++e) accv[e] += mono * t.coeff[e];
    }
    if (vector_shape) {
      double sq = 0.0;
      for (const Complex& z : accv) sq += std::norm(z);
      return sq;
    }
    std::copy(accv.begin(), accv.end(), acc.data());
    const double v = operator_norm(acc);
    return v * v;
  };

  auto slack_at = [&](int level) {
    const double width = 2.0 * std::numbers::pi *
                         static_cast<double>(std::int64_t{1} << (denom_shift - level)) /
                         static_cast<double>(denom);
    return lipschitz * width / 2.0;
  };

  // --- single lexicographic grid scan (first maximizer wins on ties) ---
  // Tracks the running maximum and simultaneously collects candidate cells
  // whose Lipschitz bound clears the running threshold lower + target_gap.
  // The running threshold only grows, so the collected set is a superset of
  // the final survivors; it is compacted against the current threshold
  // whenever it outgrows its soft cap.
  const double slack0 = slack_at(0);
  double lower = -1.0;
  std::vector<std::uint32_t> arg_idx(n, 0);
  std::vector<std::uint32_t> cand_idx;  // flat, stride n, dyadic numerators
  std::vector<double> cand_val;         // grid value per candidate cell
  double scan_max_bound = 0.0;  // bound over cells dropped once over budget
  bool over_budget = false;
  {
    std::size_t soft_cap = std::min<std::size_t>(opts.max_cells, 4000000);
    double thr = opts.target_gap - slack0;  // = lower + gap - slack at lower=0
    auto compact = [&]() {
      std::size_t w = 0;
      for (std::size_t r = 0; r < cand_val.size(); ++r) {
        if (thr > 0 && cand_val[r] <= thr) continue;
        cand_val[w] = cand_val[r];
        for (int i = 0; i < n; ++i)
          cand_idx[w * n + i] = cand_idx[r * n + i];
        ++w;
      }
      cand_val.resize(w);
      cand_idx.resize(w * static_cast<std::size_t>(n));
    };
    scan_grid(p, opts.mesh,
              [&](const std::vector<std::uint32_t>& idx, double vsq) {
                if (lower < 0 || vsq > lower * lower) {
                  lower = std::sqrt(vsq);
                  arg_idx = idx;
                  thr = lower + opts.target_gap - slack0;
                }
                const double v = std::sqrt(vsq);
                if (thr > 0 && v <= thr) return;
                if (over_budget) {
                  scan_max_bound = std::max(scan_max_bound, v + slack0);
                  return;
                }
                if (cand_val.size() >= soft_cap) {
                  compact();
                  // threshold no longer trims the set: the budget is real
                  if (cand_val.size() >= soft_cap - soft_cap / 8) {
                    soft_cap *= 2;
                    if (soft_cap > opts.max_cells) {
                      over_budget = true;
                      scan_max_bound = std::max(scan_max_bound, v + slack0);
                      return;
                    }
                  }
                }
                cand_val.push_back(v);
                for (int i = 0; i < n; ++i)
                  cand_idx.push_back(idx[i] << denom_shift);
              });
  }
  const double h = 2.0 * std::numbers::pi / opts.mesh;
  std::vector<double> best_angles(n);
  for (int i = 0; i < n; ++i) best_angles[i] = arg_idx[i] * h;

  // --- deterministic coordinate-ascent refinement ---
  double step = h / 2.0;
  for (int iter = 0; iter < opts.refine_iters; ++iter) {
    for (int axis = 0; axis < n; ++axis) {
      for (double delta : {step, -step}) {
        std::vector<double> trial = best_angles;
        trial[axis] += delta;
        const double v = value_at_angles(p, trial);
        if (v > lower) {
          lower = v;
          best_angles = trial;
        }
      }
    }
    step *= 0.618;
  }

  // level-0 survivors: candidates whose bound clears the final threshold
  std::vector<std::uint32_t> cells;  // flat, stride n, dyadic numerators
  double level_max_bound = scan_max_bound;
  for (std::size_t ci = 0; ci < cand_val.size(); ++ci) {
    const double bound = cand_val[ci] + slack0;
    if (bound > lower + opts.target_gap) {
      cells.insert(cells.end(), cand_idx.begin() + ci * n,
                   cand_idx.begin() + (ci + 1) * n);
      level_max_bound = std::max(level_max_bound, bound);
    }
  }
  cand_idx.clear();
  cand_idx.shrink_to_fit();
  cand_val.clear();
  cand_val.shrink_to_fit();

  int level = 0;
  while (!cells.empty() && !over_budget && level < opts.max_levels) {
    ++level;
    const double slack = slack_at(level);
    const std::uint32_t offset = std::uint32_t{1} << (denom_shift - level - 1);
    std::vector<std::uint32_t> next;
    double next_max_bound = 0.0;
    const std::size_t count = cells.size() / n;
    std::vector<std::uint32_t> child(n);
    for (std::size_t ci = 0; ci < count && !over_budget; ++ci) {
      const std::uint32_t* parent = cells.data() + ci * n;
      // 2^n children: parent center +/- a quarter cell per axis
      for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        for (int i = 0; i < n; ++i) {
          const std::int64_t c = static_cast<std::int64_t>(parent[i]) +
                                 ((mask >> i) & 1 ? offset : -offset);
          child[i] = static_cast<std::uint32_t>((c % denom + denom) % denom);
        }
        const double vsq = cell_value_sq(child.data());
        if (vsq > lower * lower) {
          lower = std::sqrt(vsq);
          for (int i = 0; i < n; ++i)
            best_angles[i] = 2.0 * std::numbers::pi * child[i] / denom;
        }
        // value needed to keep the cell open; compare squares to skip sqrt
        const double need = lower + opts.target_gap - slack;
        if (need > 0 && vsq <= need * need) continue;
        const double bound = std::sqrt(vsq) + slack;
        {
          if (next.size() / n >= opts.max_cells) {
            over_budget = true;
            next_max_bound = std::max(next_max_bound, bound);
            break;
          }
          next.insert(next.end(), child.begin(), child.end());
          next_max_bound = std::max(next_max_bound, bound);
        }
      }
    }
    cells = std::move(next);
    if (over_budget)
      // unprocessed parents remain covered by the parent-level bound
      level_max_bound = std::max(level_max_bound, next_max_bound);
    else
      level_max_bound = next_max_bound;
  }

  est.lower = lower;
  est.argmax_point = best_angles;
  for (double& a : est.argmax_point) {
    a = std::fmod(a, 2.0 * std::numbers::pi);
    if (a < 0) a += 2.0 * std::numbers::pi;
  }
  // eliminated cells were bounded by (a past, hence smaller) lower + gap
  double upper = lower + opts.target_gap;
  if (!cells.empty() || over_budget) upper = std::max(upper, level_max_bound);
  est.certified_upper = upper;
  est.certified = true;
  return est;
}

Complex mobius(Complex lambda, Complex z) {
  return (z - lambda) / (1.0 - std::conj(lambda) * z);
}

Complex mobius_inverse(Complex lambda, Complex w) {
  return (w + lambda) / (1.0 + std::conj(lambda) * w);
}

ComplexMatrix mobius_of_matrix(Complex lambda, const ComplexMatrix& m,
                               bool inverse) {
  if (m.rows() != m.cols())
    throw invalid_input_error("mobius_of_matrix: matrix must be square");
  if (std::abs(lambda) >= 1.0)
    throw invalid_input_error("mobius_of_matrix: |lambda| must be < 1");
  if (operator_norm(m) > 1.0 + 1e-10)
    throw invalid_input_error("mobius_of_matrix: matrix must be a contraction");
  const Complex sign = inverse ? Complex(1.0) : Complex(-1.0);
  const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
  const ComplexMatrix numer = m + sign * lambda * id;
  const ComplexMatrix den = id + sign * std::conj(lambda) * m;
  Eigen::JacobiSVD<ComplexMatrix> svd(den);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double smax = svd.singularValues()(0);
  if (smin <= 0 || smax / smin > 1e12) {
    std::ostringstream msg;
    msg << "mobius_of_matrix: denominator condition number "
        << (smin > 0 ? smax / smin : std::numeric_limits<double>::infinity())
        << " exceeds 1e12";
    throw numeric_error(msg.str());
  }
  return numer * den.inverse();
}

TorusSupEstimate sample_sup_composed(const MatrixPolynomial& p,
                                     const std::vector<Complex>& lambdas,
                                     const SupNormOptions& opts) {
  p.validate();
  if (static_cast<int>(lambdas.size()) != p.num_vars)
    throw invalid_input_error("sample_sup_composed: lambda count mismatch");
  for (Complex l : lambdas)
    if (std::abs(l) >= 1.0)
      throw invalid_input_error("sample_sup_composed: |lambda| must be < 1");
  const int n = p.num_vars;
  double grid_points = 1.0;
  for (int i = 0; i < n; ++i) grid_points *= opts.mesh;
  if (grid_points > static_cast<double>(opts.grid_cap))
    throw capacity_error("sample_sup_composed: grid exceeds cap");

  TorusSupEstimate est;
  est.mesh = opts.mesh;
  est.certified = false;
  est.argmax_point.assign(n, 0.0);
  const double h = 2.0 * std::numbers::pi / opts.mesh;
  std::vector<std::uint32_t> idx(n, 0);
  std::vector<Complex> z(n);
  // odometer over the full grid, lexicographic
  while (true) {
    for (int i = 0; i < n; ++i) {
      const double t = idx[i] * h;
      z[i] = mobius_inverse(lambdas[i], {std::cos(t), std::sin(t)});
    }
    const double v = fast_norm(evaluate_scalar_point(p, z));
    if (v > est.lower) {
      est.lower = v;
      for (int i = 0; i < n; ++i) est.argmax_point[i] = idx[i] * h;
    }
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == static_cast<std::uint32_t>(opts.mesh)) {
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return est;
}

namespace {

void enumerate_indices(int num_vars, int degree, MultiIndex& current, int slot,
                       int used, std::vector<MultiIndex>& out) {
  if (slot == num_vars) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e + used <= degree; ++e) {
    current[slot] = e;
    enumerate_indices(num_vars, degree, current, slot + 1, used + e, out);
  }
  current[slot] = 0;
}

}  // namespace

MatrixPolynomial random_scalar_polynomial(int num_vars, int degree,
                                          std::uint64_t seed, double lipschitz) {
  if (num_vars < 1 || degree < 0)
    throw invalid_input_error("random_scalar_polynomial: bad shape");
  Rng rng(derive_seed(seed, 0x706f6c79ULL));
  MatrixPolynomial p = MatrixPolynomial::scalar(num_vars);
  MultiIndex current(num_vars, 0);
  std::vector<MultiIndex> indices;
  enumerate_indices(num_vars, degree, current, 0, 0, indices);
  for (const auto& k : indices) p.add_scalar_term(k, rng.complex_normal());
  const double l = p.torus_lipschitz_bound();
  if (l > 0 && lipschitz > 0) {
    const double scale = lipschitz / l;
    for (auto& [k, c] : p.terms) c *= scale;
  }
  return p;
}

}  // namespace vnd
