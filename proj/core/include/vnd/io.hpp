#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "vnd/certify.hpp"
#include "vnd/dilation.hpp"
#include "vnd/poly.hpp"
#include "vnd/tuples.hpp"

namespace vnd {

using json = nlohmann::ordered_json;

// ComplexMatrix <-> { rows, cols, re: [[...]], im: [[...]] }
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// MatrixPolynomial <-> { num_vars, out_rows, out_cols,
//                        terms: [ { k: [...], coeff: <matrix> } ] }
json polynomial_to_json(const MatrixPolynomial& p);
MatrixPolynomial polynomial_from_json(const json& j);

// CommutingTuple <-> { dim, matrices: [...], labels?, meta? }
json tuple_to_json(const CommutingTuple& t, const json& meta = nullptr);
CommutingTuple tuple_from_json(const json& j);

json sup_estimate_to_json(const TorusSupEstimate& e);
TorusSupEstimate sup_estimate_from_json(const json& j);

json dilation_result_to_json(const DilationResult& r);
DilationResult dilation_result_from_json(const json& j);

// Report envelope shared by the CLI commands:
// { check, status, lhs, sup_lower, sup_certified_upper, margin, params,
//   mesh, runtime_ms }
json make_report(const std::string& check, const std::string& status,
                 double lhs, const TorusSupEstimate& sup, double margin,
                 const json& params, int mesh, std::int64_t runtime_ms);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace vnd
