#include "vnd/io.hpp"

#include <fstream>
#include <sstream>

namespace vnd {

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)},
              {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("re") || !j.contains("im"))
    throw invalid_input_error("matrix_from_json: missing fields");
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  if (rows < 0 || cols < 0 ||
      j.at("re").size() != static_cast<std::size_t>(rows) ||
      j.at("im").size() != static_cast<std::size_t>(rows))
    throw invalid_input_error("matrix_from_json: shape mismatch");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& rrow = j.at("re").at(i);
    const auto& irow = j.at("im").at(i);
    if (rrow.size() != static_cast<std::size_t>(cols) ||
        irow.size() != static_cast<std::size_t>(cols))
      throw invalid_input_error("matrix_from_json: shape mismatch");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = Complex(rrow.at(c).get<double>(), irow.at(c).get<double>());
  }
  if (!all_finite(m))
    throw invalid_input_error("matrix_from_json: non-finite entries");
  return m;
}

json polynomial_to_json(const MatrixPolynomial& p) {
  json terms = json::array();
  for (const auto& [k, c] : p.terms)
    terms.push_back(json{{"k", k}, {"coeff", matrix_to_json(c)}});
  return json{{"num_vars", p.num_vars},
              {"out_rows", p.out_rows},
              {"out_cols", p.out_cols},
              {"terms", std::move(terms)}};
}

MatrixPolynomial polynomial_from_json(const json& j) {
  MatrixPolynomial p;
  p.num_vars = j.at("num_vars").get<int>();
  p.out_rows = j.at("out_rows").get<Eigen::Index>();
  p.out_cols = j.at("out_cols").get<Eigen::Index>();
  for (const auto& term : j.at("terms")) {
    const MultiIndex k = term.at("k").get<MultiIndex>();
    p.add_term(k, matrix_from_json(term.at("coeff")));
  }
  p.validate();
  return p;
}

json tuple_to_json(const CommutingTuple& t, const json& meta) {
  json mats = json::array();
  for (const auto& m : t.matrices) mats.push_back(matrix_to_json(m));
  json out{{"dim", t.dim},
           {"matrices", std::move(mats)},
           {"commutation_residual", t.commutation_residual}};
  if (!t.labels.empty()) out["labels"] = t.labels;
  if (!meta.is_null()) out["meta"] = meta;
  return out;
}

CommutingTuple tuple_from_json(const json& j) {
  std::vector<ComplexMatrix> mats;
  for (const auto& m : j.at("matrices")) mats.push_back(matrix_from_json(m));
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return CommutingTuple::make(std::move(mats), std::move(labels));
}

json sup_estimate_to_json(const TorusSupEstimate& e) {
  json out{{"lower", e.lower},
           {"argmax_point", e.argmax_point},
           {"mesh", e.mesh},
           {"certified", e.certified}};
  out["certified_upper"] =
      e.certified_upper ? json(*e.certified_upper) : json(nullptr);
  return out;
}

TorusSupEstimate sup_estimate_from_json(const json& j) {
  TorusSupEstimate e;
  e.lower = j.at("lower").get<double>();
  e.argmax_point = j.at("argmax_point").get<std::vector<double>>();
  e.mesh = j.at("mesh").get<int>();
  e.certified = j.at("certified").get<bool>();
  if (j.contains("certified_upper") && !j.at("certified_upper").is_null())
    e.certified_upper = j.at("certified_upper").get<double>();
  return e;
}

json dilation_result_to_json(const DilationResult& r) {
  json ops = json::array();
  for (const auto& op : r.unitaries) {
    json o;
    if (op.is_dense()) {
      o["dense"] = matrix_to_json(op.dense);
    } else {
      json fs = json::array();
      for (const auto& f : op.factors) fs.push_back(matrix_to_json(f));
      o["factors"] = std::move(fs);
    }
    if (op.mobius_lambda)
      o["mobius_lambda"] = json{{"re", op.mobius_lambda->real()},
                                {"im", op.mobius_lambda->imag()}};
    o["adjoint"] = op.adjoint;
    ops.push_back(std::move(o));
  }
  json table = json::array();
  for (const auto& [k, err] : r.error_table)
    table.push_back(json{{"k", k}, {"err", err}});
  return json{{"space_dim", r.space_dim},
              {"window", r.window},
              {"scale_windows", r.scale_windows},
              {"max_degree", r.max_degree},
              {"unitaries", std::move(ops)},
              {"embedding", matrix_to_json(r.embedding)},
              {"error_table", std::move(table)},
              {"max_error", r.max_error},
              {"unitarity_residual", r.unitarity_residual},
              {"commutation_residual", r.commutation_residual}};
}

DilationResult dilation_result_from_json(const json& j) {
  DilationResult r;
  r.space_dim = j.at("space_dim").get<std::int64_t>();
  r.window = j.at("window").get<int>();
  if (j.contains("scale_windows"))
    r.scale_windows = j.at("scale_windows").get<std::vector<int>>();
  r.max_degree = j.at("max_degree").get<int>();
  for (const auto& o : j.at("unitaries")) {
    DilationOperator op;
    if (o.contains("dense")) {
      op.dense = matrix_from_json(o.at("dense"));
    } else {
      for (const auto& f : o.at("factors"))
        op.factors.push_back(matrix_from_json(f));
    }
    if (o.contains("mobius_lambda") && !o.at("mobius_lambda").is_null())
      op.mobius_lambda = Complex(o.at("mobius_lambda").at("re").get<double>(),
                                 o.at("mobius_lambda").at("im").get<double>());
    if (o.contains("adjoint")) op.adjoint = o.at("adjoint").get<bool>();
    r.unitaries.push_back(std::move(op));
  }
  r.embedding = matrix_from_json(j.at("embedding"));
  for (const auto& entry : j.at("error_table")) {
    const double err = entry.at("err").get<double>();
    r.error_table[entry.at("k").get<MultiIndex>()] = err;
    r.max_error = std::max(r.max_error, err);
  }
  if (j.contains("max_error")) r.max_error = j.at("max_error").get<double>();
  if (j.contains("unitarity_residual"))
    r.unitarity_residual = j.at("unitarity_residual").get<double>();
  if (j.contains("commutation_residual"))
    r.commutation_residual = j.at("commutation_residual").get<double>();
  return r;
}

json make_report(const std::string& check, const std::string& status,
                 double lhs, const TorusSupEstimate& sup, double margin,
                 const json& params, int mesh, std::int64_t runtime_ms) {
  json out{{"check", check}, {"status", status}, {"lhs", lhs}};
  out["sup_lower"] = sup.lower;
  out["sup_certified_upper"] =
      sup.certified_upper ? json(*sup.certified_upper) : json(nullptr);
  out["margin"] = margin;
  out["params"] = params;
  out["mesh"] = mesh;
  out["runtime_ms"] = runtime_ms;
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input_error("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    std::ostringstream msg;
    msg << "cannot parse " << path << ": " << e.what();
    throw invalid_input_error(msg.str());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw invalid_input_error("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw invalid_input_error("write failed: " + path);
}

}  // namespace vnd
