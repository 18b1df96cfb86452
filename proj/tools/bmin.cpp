// bmin: command-line front end for the minimality library.
//
// Exit status: 0 minimal (or success), 1 not minimal, 2 undecided or error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "bmin/io.hpp"

namespace {

using namespace bmin;

struct Options {
  std::string matrix;
  std::string algebra = "diag";
  std::string frame;
  std::string output;
  double tol = 0;
  double gap_tol = 1e-9;
  double dist_tol = 1e-6;
  int max_iter = 20000;
  int samples = 100;
  std::uint64_t seed = 0;
  bool timings = false;

  std::string v_frame, w_frame, r_matrix;
  double lambda = 1;
  double mu = 0;
  bool have_mu = false;

  std::vector<double> x0, x, w;
  std::string step_rule = "exact";
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Minimal: return 0;
    case Verdict::NotMinimal: return 1;
    case Verdict::Undecided: return 2;
  }
  return 2;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + opt.output);
  out << text;
}

void emit_json(const Options& opt, const Json& doc) { emit(opt, doc.dump(2) + "\n"); }

FWConfig fw_config(const Options& opt) {
  FWConfig cfg;
  cfg.gap_tol = opt.gap_tol;
  cfg.dist_tol = opt.dist_tol;
  cfg.max_iter = opt.max_iter;
  return cfg;
}

MinimalityConfig minimality_config(const Options& opt) { return {fw_config(opt), opt.tol}; }

RVector to_vector(const std::vector<double>& v, Eigen::Index dim, const char* flag) {
  if (v.empty()) return RVector::Zero(dim);
  if (static_cast<Eigen::Index>(v.size()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, std::string(flag) + " needs " + std::to_string(dim) + " comma-separated values");
  }
  return Eigen::Map<const RVector>(v.data(), dim);
}

int cmd_check(const Options& opt) {
  Stopwatch total;
  const HermitianMatrix a = parse_matrix(read_json_file(opt.matrix));
  const SubalgebraBasis basis = parse_algebra_spec(opt.algebra, a.n());
  spdlog::info("check: n = {}, dim(B) = {} ({})", a.n(), basis.dim(), to_string(basis.label()));
  Stopwatch solve;
  const MinimalityReport report = check_minimal(a, basis, minimality_config(opt));
  spdlog::info("check: {} ({}) after {} Frank-Wolfe iterations", to_string(report.verdict), to_string(report.reason),
               report.iterations);
  spdlog::debug("check: distance {:.3e}, gap {:.3e}, lower bound {:.3e}", report.distance, report.gap, report.lower_bound);
  Timings t{{"solve_ms", solve.elapsed_ms()}, {"total_ms", total.elapsed_ms()}};
  emit_json(opt, report_to_json(report, opt.timings ? &t : nullptr));
  return exit_code(report.verdict);
}

int cmd_certificate(const Options& opt) {
  const HermitianMatrix a = parse_matrix(read_json_file(opt.matrix));
  const SubalgebraBasis basis = parse_algebra_spec(opt.algebra, a.n());
  const MinimalityReport report = check_minimal(a, basis, minimality_config(opt));
  Json doc = {{"verdict", std::string(to_string(report.verdict))}, {"reason", std::string(to_string(report.reason))}};
  if (report.certificate) {
    const Certificate& c = *report.certificate;
    doc["x"] = matrix_to_json(c.x);
    doc["residual_eq"] = c.residual_eq;
    doc["residual_perp"] = c.residual_perp;
    doc["valid"] = validate_certificate(a, c.x, basis, 1e-8);
  }
  emit_json(opt, doc);
  return exit_code(report.verdict);
}

int cmd_moment(const Options& opt) {
  const Subspace s = parse_frame(read_json_file(opt.frame));
  const SubalgebraBasis basis = parse_algebra_spec(opt.algebra, s.n());
  const CompressedFamily fam = compress_family(s, basis);
  spdlog::info("moment: rank {}, {} samples, seed {}", s.rank(), opt.samples, opt.seed);
  std::ostringstream os;
  write_points_csv(os, sample_extreme(fam, opt.samples, opt.seed), basis.dim());
  emit(opt, os.str());
  return 0;
}

int cmd_construct(const Options& opt) {
  const Subspace v = parse_frame(read_json_file(opt.v_frame));
  const Subspace w = parse_frame(read_json_file(opt.w_frame));
  if (v.n() != w.n()) throw Error(ErrorCode::DimensionMismatch, "--v and --w frames differ in n");
  const SubalgebraBasis basis = parse_algebra_spec(opt.algebra, v.n());
  HermitianMatrix r = HermitianMatrix::zero(v.n());
  if (opt.have_mu) {
    r = opt.mu * (HermitianMatrix::identity(v.n()) - v.projector() - w.projector());
  } else if (!opt.r_matrix.empty()) {
    r = parse_matrix(read_json_file(opt.r_matrix));
  }
  const HermitianMatrix m = construct_minimal(v, w, opt.lambda, r, basis, fw_config(opt));
  emit_json(opt, matrix_to_json(m));
  return 0;
}

int cmd_best_approx(const Options& opt) {
  Stopwatch total;
  const HermitianMatrix a0 = parse_matrix(read_json_file(opt.matrix));
  AffineFamily fam(a0, parse_algebra_spec(opt.algebra, a0.n()));
  SolverConfig cfg;
  cfg.fw = fw_config(opt);
  cfg.max_iter = opt.max_iter;
  cfg.tau = opt.tol;
  if (opt.step_rule == "exact") {
    cfg.step_rule = StepRule::Exact;
  } else if (opt.step_rule == "diminishing") {
    cfg.step_rule = StepRule::Diminishing;
  } else {
    throw Error(ErrorCode::InvalidInput, "--step-rule must be exact or diminishing");
  }
  const BestApproxResult res = best_approximation(fam, to_vector(opt.x0, fam.dim(), "--x0"), cfg);
  spdlog::info("best-approx: dist {} (lower bound {}) after {} iterations", res.dist, res.lower_bound, res.iterations);
  Json doc = best_approx_to_json(res);
  if (opt.timings) doc["timings"] = Timings{{"total_ms", total.elapsed_ms()}};
  emit_json(opt, doc);
  return 0;
}

int cmd_dirderiv(const Options& opt) {
  const HermitianMatrix a0 = parse_matrix(read_json_file(opt.matrix));
  AffineFamily fam(a0, parse_algebra_spec(opt.algebra, a0.n()));
  const RVector x = to_vector(opt.x, fam.dim(), "--x");
  const RVector w = to_vector(opt.w, fam.dim(), "--w");
  emit_json(opt, Json{{"value", directional_derivative(fam, x, w, opt.tol)}});
  return 0;
}

int cmd_support(const Options& opt) {
  const Subspace s = parse_frame(read_json_file(opt.frame));
  const SubalgebraBasis basis = parse_algebra_spec(opt.algebra, s.n());
  const CompressedFamily fam = compress_family(s, basis);
  const RVector w = to_vector(opt.w, basis.dim(), "--w");
  emit_json(opt, Json{{"support", support_function(fam, w)}, {"jnr_support", jnr_support(fam, w)}});
  return 0;
}

void configure_logging() {
  auto logger = spdlog::stderr_logger_st("bmin");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("BMIN_LOG");
  const std::string level = env ? env : "off";
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    spdlog::set_level(spdlog::level::off);
  }
}

void add_algebra(CLI::App* sub, Options& opt) {
  sub->add_option("--algebra", opt.algebra, "diag | pauli:q | block:SPEC | custom:FILE")->capture_default_str();
}

void add_solver_flags(CLI::App* sub, Options& opt) {
  sub->add_option("--tol", opt.tol, "eigenvalue clustering tolerance (0: 1e-8 max(1, ||A||))");
  sub->add_option("--gap-tol", opt.gap_tol, "Frank-Wolfe gap tolerance")->capture_default_str();
  sub->add_option("--dist-tol", opt.dist_tol, "moment distance treated as zero")->capture_default_str();
  sub->add_option("--max-iter", opt.max_iter, "iteration budget")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  Options opt;
  CLI::App app{"Minimality of Hermitian matrices relative to a C*-subalgebra"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--output", opt.output, "write the result here instead of stdout");
  app.add_flag("--timings", opt.timings, "include wall-clock timings in JSON output");

  auto* check = app.add_subcommand("check", "decide minimality and print a JSON report");
  check->add_option("--matrix", opt.matrix, "matrix JSON file")->required();
  add_algebra(check, opt);
  add_solver_flags(check, opt);

  auto* cert = app.add_subcommand("certificate", "print the certificate X for a minimal matrix");
  cert->add_option("--matrix", opt.matrix, "matrix JSON file")->required();
  add_algebra(cert, opt);
  add_solver_flags(cert, opt);

  auto* moment = app.add_subcommand("moment", "sample the moment of a subspace as CSV");
  moment->add_option("--frame", opt.frame, "frame JSON file")->required();
  add_algebra(moment, opt);
  moment->add_option("--samples", opt.samples, "number of points")->capture_default_str();
  moment->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();

  auto* construct = app.add_subcommand("construct", "build lambda (P_V - P_W) + R from a support pair");
  construct->add_option("--v", opt.v_frame, "frame of V")->required();
  construct->add_option("--w", opt.w_frame, "frame of W")->required();
  construct->add_option("--lambda", opt.lambda, "lambda > 0")->capture_default_str();
  auto* mu = construct->add_option("--mu", opt.mu, "R = mu (I - P_V - P_W)");
  construct->add_option("--r", opt.r_matrix, "R as a matrix JSON file")->excludes(mu);
  add_algebra(construct, opt);
  add_solver_flags(construct, opt);

  auto* best = app.add_subcommand("best-approx", "minimize ||A0 + sum_k x_k B_k||");
  best->add_option("--matrix", opt.matrix, "A0 as a matrix JSON file")->required();
  best->add_option("--x0", opt.x0, "starting coefficients")->delimiter(',');
  best->add_option("--step-rule", opt.step_rule, "exact | diminishing")->capture_default_str();
  add_algebra(best, opt);
  add_solver_flags(best, opt);

  auto* dir = app.add_subcommand("dirderiv", "directional derivative of lambda_max(A(x)) along w");
  dir->add_option("--matrix", opt.matrix, "A0 as a matrix JSON file")->required();
  dir->add_option("--x", opt.x, "point (default 0)")->delimiter(',');
  dir->add_option("--w", opt.w, "direction")->delimiter(',')->required();
  dir->add_option("--tol", opt.tol, "eigenvalue clustering tolerance");
  add_algebra(dir, opt);

  auto* support = app.add_subcommand("support", "support function of the moment of a subspace");
  support->add_option("--frame", opt.frame, "frame JSON file")->required();
  support->add_option("--w", opt.w, "direction")->delimiter(',')->required();
  add_algebra(support, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.have_mu = mu->count() > 0;

  try {
    if (*check) return cmd_check(opt);
    if (*cert) return cmd_certificate(opt);
    if (*moment) return cmd_moment(opt);
    if (*construct) return cmd_construct(opt);
    if (*best) return cmd_best_approx(opt);
    if (*dir) return cmd_dirderiv(opt);
    if (*support) return cmd_support(opt);
  } catch (const Error& e) {
    std::cerr << "bmin: " << to_string(e.code()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "bmin: " << e.what() << "\n";
  }
  return 2;
}
