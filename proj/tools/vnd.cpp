// Command-line front end for the dilation toolkit: construct the
// four-contraction family, certify its von Neumann failure, check scalar
// polynomials, build unitary power dilations, decompose nilpotent families,
// hunt for inequality violations, and bound torus sup norms. Every command
// is deterministic given its flags; reports are JSON and differ between
// runs only in the runtime_ms field.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vnd/certify.hpp"
#include "vnd/dilation.hpp"
#include "vnd/io.hpp"
#include "vnd/rng.hpp"

namespace {

using vnd::json;

using clock_type = std::chrono::steady_clock;

std::int64_t elapsed_ms(clock_type::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             clock_type::now() - start)
      .count();
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty())
    std::cout << report.dump(2) << "\n";
  else
    vnd::save_json_file(out_path, report);
}

const char* verdict_name(vnd::VnVerdict v) {
  switch (v) {
    case vnd::VnVerdict::kSatisfied:
      return "satisfied";
    case vnd::VnVerdict::kViolated:
      return "violation-candidate";
    case vnd::VnVerdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

// Shared numeric flags with their defaults.
struct CommonOpts {
  std::string in_path;
  std::string out_path;
  double theta1 = std::numbers::pi / 4;
  double theta2 = std::numbers::pi / 4;
  int mesh = 64;
  int refine_iters = 40;
  double tol = 1e-10;
  int window = 16;
  int scale_window = 16;
  int max_degree = 4;
  std::uint64_t seed = 0;
  int count = 100;
  int degree = 3;
};

vnd::SupNormOptions sup_options(const CommonOpts& o) {
  vnd::SupNormOptions s;
  s.mesh = o.mesh;
  s.refine_iters = o.refine_iters;
  return s;
}

json params_json(const vnd::CounterexampleParams& p) {
  return json{{"theta1", p.theta1}, {"theta2", p.theta2}};
}

// Tuple from --in when given, otherwise the default four-contraction family.
vnd::CommutingTuple load_or_default_tuple(const CommonOpts& o) {
  if (!o.in_path.empty())
    return vnd::tuple_from_json(vnd::load_json_file(o.in_path));
  return vnd::build_counterexample({o.theta1, o.theta2});
}

int cmd_construct(const CommonOpts& o) {
  const vnd::CounterexampleParams params{o.theta1, o.theta2};
  params.validate();
  const vnd::CommutingTuple t = vnd::build_counterexample(params);
  emit(vnd::tuple_to_json(t, params_json(params)), o.out_path);
  return 0;
}

int cmd_certify_failure(const CommonOpts& o) {
  const auto start = clock_type::now();
  vnd::CounterexampleParams params{o.theta1, o.theta2};
  vnd::CommutingTuple t = [&] {
    if (o.in_path.empty()) return vnd::build_counterexample(params);
    const json j = vnd::load_json_file(o.in_path);
    if (j.contains("meta")) {
      params.theta1 = j.at("meta").value("theta1", params.theta1);
      params.theta2 = j.at("meta").value("theta2", params.theta2);
    }
    return vnd::tuple_from_json(j);
  }();
  const vnd::FailureCertificate cert =
      vnd::certify_matrix_vn_failure(t, params, sup_options(o));
  const bool pass =
      cert.dilation_impossible && std::abs(cert.lhs_norm - 2.0) <= 1e-9;
  json report = vnd::make_report("certify-failure", pass ? "pass" : "inconclusive",
                                 cert.lhs_norm, cert.sup_estimate, cert.margin,
                                 params_json(params), o.mesh, elapsed_ms(start));
  report["conclusion"] = cert.conclusion;
  report["polynomial"] = vnd::polynomial_to_json(cert.polynomial);
  emit(report, o.out_path);
  return pass ? 0 : 3;
}

int cmd_check_vn(const CommonOpts& o, const std::string& poly_path,
                 int random_count) {
  const auto start = clock_type::now();
  const vnd::CommutingTuple t = load_or_default_tuple(o);
  std::vector<vnd::MatrixPolynomial> polys;
  if (!poly_path.empty()) {
    polys.push_back(vnd::polynomial_from_json(vnd::load_json_file(poly_path)));
  } else {
    for (int i = 0; i < random_count; ++i)
      polys.push_back(vnd::random_scalar_polynomial(
          static_cast<int>(t.size()), o.degree, vnd::derive_seed(o.seed, i)));
  }
  if (polys.empty())
    throw vnd::invalid_input_error(
        "check-vn: give a polynomial file or --random count");

  json trials = json::array();
  int satisfied = 0, violated = 0, inconclusive = 0;
  double max_gap = 0.0;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const vnd::VnReport r = vnd::check_scalar_vn(t, polys[i], sup_options(o));
    switch (r.verdict) {
      case vnd::VnVerdict::kSatisfied:
        ++satisfied;
        break;
      case vnd::VnVerdict::kViolated:
        ++violated;
        break;
      case vnd::VnVerdict::kInconclusive:
        ++inconclusive;
        break;
    }
    max_gap = std::max(max_gap, r.gap);
    trials.push_back(json{
        {"index", i},
        {"lhs", r.lhs_norm},
        {"sup_lower", r.sup_lower},
        {"sup_certified_upper", r.sup_certified_upper
                                    ? json(*r.sup_certified_upper)
                                    : json(nullptr)},
        {"gap", r.gap},
        {"verdict", verdict_name(r.verdict)}});
  }
  json report{{"check", "check-vn"},
              {"status", inconclusive == 0 ? (violated == 0 ? "pass"
                                                            : "violation-candidate")
                                           : "inconclusive"},
              {"trials", std::move(trials)},
              {"aggregate", json{{"count", polys.size()},
                                 {"satisfied", satisfied},
                                 {"violated", violated},
                                 {"inconclusive", inconclusive},
                                 {"max_gap", max_gap}}},
              {"mesh", o.mesh},
              {"runtime_ms", elapsed_ms(start)}};
  emit(report, o.out_path);
  return inconclusive == 0 ? 0 : 3;
}

int cmd_dilate(const CommonOpts& o, std::vector<int> indices,
               const std::string& dilation_path) {
  const auto start = clock_type::now();
  vnd::CommutingTuple t = load_or_default_tuple(o);
  if (t.size() != 3 && indices.empty()) {
    if (t.size() == 4)
      throw vnd::invalid_input_error(
          "dilate: four commuting contractions need not admit a joint "
          "commuting unitary power dilation; select three with --indices");
    throw vnd::invalid_input_error(
        "dilate: tuple must have exactly 3 matrices, or use --indices");
  }
  if (!indices.empty()) {
    if (indices.size() != 3)
      throw vnd::invalid_input_error("dilate: --indices needs three entries");
    std::vector<vnd::ComplexMatrix> sel;
    for (int i : indices) {
      if (i < 1 || static_cast<std::size_t>(i) > t.size())
        throw vnd::invalid_input_error("dilate: index out of range");
      sel.push_back(t.matrices[i - 1]);
    }
    t = vnd::CommutingTuple::make(std::move(sel));
  }

  const vnd::DilationResult r =
      vnd::dilate_triple(t, o.window, o.scale_window, o.max_degree);
  const vnd::VerificationTable v =
      vnd::verify_power_dilation(r, t, o.max_degree);
  const bool residuals_ok = r.unitarity_residual <= o.tol &&
                            r.commutation_residual <= o.tol;
  if (!dilation_path.empty())
    vnd::save_json_file(dilation_path, vnd::dilation_result_to_json(r));
  json report{{"check", "dilate"},
              {"status", residuals_ok ? "pass" : "degraded"},
              {"space_dim", r.space_dim},
              {"window", r.window},
              {"scale_windows", r.scale_windows},
              {"max_degree", r.max_degree},
              {"max_error", v.max_error},
              {"unitarity_residual", r.unitarity_residual},
              {"commutation_residual", r.commutation_residual},
              {"window_exceeded", v.window_exceeded},
              {"runtime_ms", elapsed_ms(start)}};
  emit(report, o.out_path);
  return residuals_ok ? 0 : 5;
}

int cmd_decompose(const CommonOpts& o) {
  const vnd::CommutingTuple t = load_or_default_tuple(o);
  const vnd::ScalarNilpotentSplit split = vnd::split_scalar_nilpotent(t);
  std::vector<vnd::ComplexMatrix> nils;
  for (std::size_t i = 0; i < split.nilpotents.size(); ++i)
    nils.push_back(split.pure_scalar[i]
                       ? vnd::ComplexMatrix::Zero(t.dim, t.dim).eval()
                       : split.nilpotents[i]);
  const vnd::NilpotentStructure st =
      vnd::decompose_nilpotents(vnd::CommutingTuple::make(std::move(nils)));

  json lambdas = json::array(), vs = json::array();
  for (std::size_t i = 0; i < split.lambdas.size(); ++i) {
    lambdas.push_back(json{{"re", split.lambdas[i].real()},
                           {"im", split.lambdas[i].imag()},
                           {"pure_scalar", bool(split.pure_scalar[i])}});
    vs.push_back(vnd::matrix_to_json(st.vs[i]));
  }
  json report{
      {"check", "decompose"},
      {"status", "pass"},
      {"orientation",
       st.orientation == vnd::NilpotentOrientation::kColumn ? "column" : "row"},
      {"f", vnd::matrix_to_json(st.f)},
      {"directions", std::move(vs)},
      {"scalar_parts", std::move(lambdas)},
      {"reconstruction_residual", st.residual},
      {"commutation_residual", t.commutation_residual}};
  emit(report, o.out_path);
  return 0;
}

int cmd_hunt(const CommonOpts& o, const std::string& scheme_name) {
  const auto start = clock_type::now();
  vnd::RandomScheme scheme;
  if (scheme_name == "poly-of-seed-matrix")
    scheme = vnd::RandomScheme::kPolyOfSeedMatrix;
  else if (scheme_name == "structured-nilpotent")
    scheme = vnd::RandomScheme::kStructuredNilpotent;
  else if (scheme_name == "scalar-plus-nilpotent")
    scheme = vnd::RandomScheme::kScalarPlusNilpotent;
  else
    throw vnd::invalid_input_error("hunt: unknown scheme " + scheme_name);

  json records = json::array();
  int satisfied = 0, candidates = 0, inconclusive = 0;
  for (int trial = 0; trial < o.count; ++trial) {
    const std::uint64_t tuple_seed = vnd::derive_seed(o.seed, 2 * trial);
    const std::uint64_t poly_seed = vnd::derive_seed(o.seed, 2 * trial + 1);
    const vnd::CommutingTuple t =
        vnd::random_commuting_contractions(3, 3, tuple_seed, scheme);
    const vnd::MatrixPolynomial p =
        vnd::random_scalar_polynomial(3, o.degree, poly_seed);
    vnd::VnReport r = vnd::check_scalar_vn(t, p, sup_options(o));
    bool reverified = false;
    if (r.verdict == vnd::VnVerdict::kViolated) {
      // never flag a candidate off a single mesh: re-verify at double mesh
      vnd::SupNormOptions fine = sup_options(o);
      fine.mesh *= 2;
      r = vnd::check_scalar_vn(t, p, fine);
      reverified = true;
    }
    switch (r.verdict) {
      case vnd::VnVerdict::kSatisfied:
        ++satisfied;
        break;
      case vnd::VnVerdict::kViolated:
        ++candidates;
        break;
      case vnd::VnVerdict::kInconclusive:
        ++inconclusive;
        break;
    }
    records.push_back(json{
        {"trial", trial},
        {"tuple_seed", tuple_seed},
        {"poly_seed", poly_seed},
        {"scheme", scheme_name},
        {"lhs", r.lhs_norm},
        {"sup_lower", r.sup_lower},
        {"sup_certified_upper", r.sup_certified_upper
                                    ? json(*r.sup_certified_upper)
                                    : json(nullptr)},
        {"verdict", verdict_name(r.verdict)},
        {"reverified", reverified}});
  }
  json report{{"check", "hunt"},
              {"status", candidates == 0 ? "pass" : "candidates-found"},
              {"records", std::move(records)},
              {"summary", json{{"trials", o.count},
                               {"satisfied", satisfied},
                               {"violation_candidates", candidates},
                               {"inconclusive", inconclusive},
                               {"note", candidates == 0
                                            ? ""
                                            : "candidates require independent "
                                              "re-verification"}}},
              {"runtime_ms", elapsed_ms(start)}};
  emit(report, o.out_path);
  return 0;
}

int cmd_sup_norm(const CommonOpts& o, const std::string& poly_path) {
  const auto start = clock_type::now();
  const vnd::MatrixPolynomial p =
      poly_path.empty()
          ? vnd::failing_polynomial({o.theta1, o.theta2})
          : vnd::polynomial_from_json(vnd::load_json_file(poly_path));
  const vnd::TorusSupEstimate est = vnd::sup_norm_torus(p, sup_options(o));
  json report{{"check", "sup-norm"},
              {"status", est.certified ? "pass" : "inconclusive"},
              {"estimate", vnd::sup_estimate_to_json(est)},
              {"mesh", o.mesh},
              {"runtime_ms", elapsed_ms(start)}};
  emit(report, o.out_path);
  return est.certified ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification and construction toolkit for commuting "
               "contraction dilations"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string poly_path;
  std::string dilation_path;
  std::string scheme_name = "structured-nilpotent";
  std::vector<int> indices;
  int random_count = 0;

  auto add_io = [&](CLI::App* c) {
    c->add_option("--in", o.in_path, "input file (JSON)");
    c->add_option("--out", o.out_path, "report file (default: stdout)");
  };
  auto add_angles = [&](CLI::App* c) {
    c->add_option("--theta1", o.theta1, "first angle, in (0, pi/2)");
    c->add_option("--theta2", o.theta2, "second angle, in (0, pi/2)");
  };
  auto add_sup = [&](CLI::App* c) {
    c->add_option("--mesh", o.mesh, "torus grid points per variable");
    c->add_option("--refine-iters", o.refine_iters,
                  "coordinate-ascent refinement sweeps");
  };

  CLI::App* construct = app.add_subcommand(
      "construct", "write the four-contraction counterexample family");
  add_io(construct);
  add_angles(construct);

  CLI::App* certify = app.add_subcommand(
      "certify-failure",
      "certify that the matrix von Neumann inequality fails for the family");
  add_io(certify);
  add_angles(certify);
  add_sup(certify);

  CLI::App* check = app.add_subcommand(
      "check-vn", "compare ||p(A)|| against the certified torus sup");
  add_io(check);
  add_sup(check);
  check->add_option("--poly", poly_path, "scalar polynomial file (JSON)");
  check->add_option("--random", random_count, "number of random polynomials");
  check->add_option("--degree", o.degree, "max total degree of random polynomials");
  check->add_option("--seed", o.seed, "random seed");

  CLI::App* dilate = app.add_subcommand(
      "dilate", "commuting unitary power dilation of a three-matrix tuple");
  add_io(dilate);
  dilate->add_option("--indices", indices,
                     "1-based comma-separated choice of three matrices")
      ->delimiter(',');
  dilate->add_option("--window", o.window, "shift cells N (degree window N-2)");
  dilate->add_option("--scale-window", o.scale_window,
                     "corner-unitary size D per coordinate");
  dilate->add_option("--max-degree", o.max_degree,
                     "verify compressions up to this total degree");
  dilate->add_option("--tol", o.tol, "residual tolerance for pass status");
  dilate->add_option("--dilation-out", dilation_path,
                     "write the full dilation (operators + embedding)");

  CLI::App* decompose = app.add_subcommand(
      "decompose", "rank-one normal form of a commuting nilpotent family");
  add_io(decompose);

  CLI::App* hunt = app.add_subcommand(
      "hunt", "random search for scalar von Neumann violations");
  add_io(hunt);
  add_sup(hunt);
  hunt->add_option("--count", o.count, "number of trials");
  hunt->add_option("--seed", o.seed, "random seed");
  hunt->add_option("--degree", o.degree, "max total degree of test polynomials");
  hunt->add_option("--scheme", scheme_name,
                   "poly-of-seed-matrix | structured-nilpotent | "
                   "scalar-plus-nilpotent");

  CLI::App* sup = app.add_subcommand(
      "sup-norm", "certified sup of a matrix polynomial on the torus");
  add_io(sup);
  add_angles(sup);
  add_sup(sup);
  sup->add_option("--poly", poly_path, "polynomial file (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (construct->parsed()) return cmd_construct(o);
    if (certify->parsed()) return cmd_certify_failure(o);
    if (check->parsed()) return cmd_check_vn(o, poly_path, random_count);
    if (dilate->parsed()) return cmd_dilate(o, indices, dilation_path);
    if (decompose->parsed()) return cmd_decompose(o);
    if (hunt->parsed()) return cmd_hunt(o, scheme_name);
    if (sup->parsed()) return cmd_sup_norm(o, poly_path);
  } catch (const vnd::invalid_input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const vnd::structure_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const vnd::degeneracy_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const vnd::capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const vnd::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const vnd::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 2;
}
