#include "cdkit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdkit/cd_m.hpp"
#include "cdkit/dense.hpp"
#include "cdkit/diagnostics.hpp"
#include "cdkit/errors.hpp"
#include "cdkit/format.hpp"
#include "cdkit/matrix_market.hpp"
#include "cdkit/preconditioner.hpp"
#include "cdkit/solvers.hpp"
#include "cdkit/spectrum.hpp"
#include "cdkit/test_matrices.hpp"
#include "cdkit/trace_io.hpp"

namespace cdkit {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kCheckNames = {
    "conjugacy", "orthogonality", "error-decrease", "manifold", "determinant",
    "inverse", "factorization", "epsilon-propagation", "bounds", "chebyshev"};

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw UsageError(what + ": not a number '" + text + "'");
  return v;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("seed: not a non-negative integer '" + text + "'");
  }
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

/// One value per line; blank lines and '%' comments are ignored.
Vector read_vector_file(const std::string& path) {
  std::ifstream in = open_in(path);
  Vector v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok[0] == '%') continue;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ParseError("malformed value '" + tok + "' in " + path, line_no);
    }
    v.push_back(x);
  }
  return v;
}

SymmetricOperator read_matrix(const std::string& path) {
  if (!fs::is_regular_file(path)) throw IoError("cannot read matrix file " + path);
  return read_matrix_market(fs::path(path));
}

Vector make_rhs(const std::string& spec, std::size_t n) {
  if (spec == "ones") return Vector(n, 1.0);
  if (spec.rfind("random:", 0) == 0) {
    std::mt19937_64 rng(parse_seed(spec.substr(7)));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector b(n);
    for (double& x : b) x = dist(rng);
    return b;
  }
  Vector b = read_vector_file(spec);
  if (b.size() != n) {
    throw UsageError("rhs " + spec + " has " + std::to_string(b.size()) + " entries, matrix is " +
                     std::to_string(n));
  }
  return b;
}

GammaStrategy parse_strategy(const std::string& s) {
  if (s == "a") return GammaStrategy::plus_a();
  if (s == "neg-a") return GammaStrategy::minus_a();
  if (s == "abs-a") return GammaStrategy::abs_a();
  if (s == "neg-abs-a") return GammaStrategy::neg_abs_a();
  if (s == "red") return GammaStrategy::cd_red_recursion();
  if (s.rfind("const:", 0) == 0) return GammaStrategy::constant(parse_number(s.substr(6), "const"));
  if (s.rfind("decay:", 0) == 0) {
    return GammaStrategy::geometric_decay(parse_number(s.substr(6), "decay"));
  }
  if (s.rfind("scaled:", 0) == 0) {
    return GammaStrategy::scaled_cg_map(RhoSequence(read_vector_file(s.substr(7))));
  }
  throw UsageError("unknown gamma strategy '" + s + "'");
}

/// Method grammar: cg | cd[:strategy] | cd-step0b[:strategy] | cd-red |
/// scaled-cg:<rho-file> | hybrid. gamma_flag, when set, replaces the strategy.
SolveConfig parse_method(const std::string& spec, const std::string& gamma_flag) {
  SolveConfig c;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto strategy = [&](const std::string& fallback) {
    if (!gamma_flag.empty()) return parse_strategy(gamma_flag);
    return parse_strategy(tail.empty() ? fallback : tail);
  };
  if (head == "cg" && tail.empty()) {
    c.method = Method::kCG;
  } else if (head == "cd") {
    c.method = Method::kCD;
    c.gamma = strategy("neg-a");
    if (c.gamma.kind() == GammaStrategy::Kind::kCdRedRecursion) c.method = Method::kCDRed;
  } else if (head == "cd-step0b") {
    c.method = Method::kCDStep0b;
    c.gamma = strategy("neg-a");
  } else if (head == "cd-red" && tail.empty()) {
    c.method = Method::kCDRed;
    c.gamma = GammaStrategy::cd_red_recursion();
  } else if (head == "scaled-cg") {
    if (tail.empty()) throw UsageError("scaled-cg needs a rho file: scaled-cg:<file>");
    c.method = Method::kScaledCG;
    c.rho = RhoSequence(read_vector_file(tail));
    c.gamma = GammaStrategy::scaled_cg_map(c.rho);
  } else if (head == "hybrid" && tail.empty()) {
    c.method = Method::kHybrid;
    c.gamma = gamma_flag.empty() ? GammaStrategy::minus_a() : parse_strategy(gamma_flag);
  } else {
    throw UsageError("unknown method '" + spec + "'");
  }
  return c;
}

std::optional<Preconditioner> parse_precond(const std::string& spec, const SymmetricOperator& A) {
  if (spec.empty() || spec == "none") return std::nullopt;
  if (spec == "jacobi") return jacobi_from_operator(A);
  if (spec.rfind("file:", 0) == 0) {
    SymmetricOperator M = read_matrix(spec.substr(5));
    if (M.dim() != A.dim()) throw UsageError("preconditioner dimension does not match the matrix");
    return Preconditioner::from_operator(std::move(M), spec.substr(5));
  }
  throw UsageError("unknown preconditioner '" + spec + "'");
}

/// Options shared by solve, compare and diagnose.
struct RunOptions {
  std::string matrix;
  std::string rhs = "ones";
  std::string gamma;
  std::string precond = "none";
  std::vector<std::size_t> cg_steps;
  double tol = 1e-10;
  std::size_t max_iters = 0;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--matrix", o.matrix, "Matrix Market file")->required();
  cmd->add_option("--rhs", o.rhs, "ones | random:<seed> | file with one value per line");
  cmd->add_option("--tol", o.tol, "stop at ||r|| <= tol ||b||");
  cmd->add_option("--max-iters", o.max_iters, "iteration cap, 0 = 10 n");
}

SolveConfig make_config(const std::string& method, const RunOptions& o) {
  SolveConfig c = parse_method(method, o.gamma);
  c.tol_rel = o.tol;
  c.max_iters = o.max_iters;
  c.cg_steps.insert(o.cg_steps.begin(), o.cg_steps.end());
  c.validate();
  return c;
}

SolveResult run_method(const SymmetricOperator& A, const Vector& b, const SolveConfig& c,
                       const std::optional<Preconditioner>& M) {
  if (M) {
    if (c.method != Method::kCD && c.method != Method::kCG) {
      throw UsageError("preconditioning is available for cg and cd methods only");
    }
    SolveConfig mc = c;
    mc.method = Method::kCD;
    if (c.method == Method::kCG) mc.gamma = GammaStrategy::minus_a();
    return cd_m_solve(A, b, {}, *M, mc);
  }
  return solve(A, b, {}, c);
}

int status_code(const SolveResult& r) {
  switch (r.status) {
    case SolveStatus::kConverged:
      return kExitOk;
    case SolveStatus::kMaxIters:
      return kExitMaxIters;
    case SolveStatus::kBreakdown:
      return kExitBreakdown;
  }
  return kExitBreakdown;
}

/// Writes via a callback to path, or to fallback when path is empty.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write(f);
  if (!f) throw IoError("write to " + path + " failed");
}

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

void summarize(std::ostream& err, const std::string& label, const SolveResult& r) {
  err << label << ": " << to_string(r.status);
  if (r.status == SolveStatus::kBreakdown) err << " (" << to_string(r.breakdown) << ")";
  err << ", iters " << r.iters << ", ||r||/||b|| "
      << format_double(r.b_norm > 0 ? r.final_rnorm / r.b_norm : r.final_rnorm) << "\n";
}

int cmd_solve(const RunOptions& o, const std::string& method, const std::string& trace_out,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  const SymmetricOperator A = read_matrix(o.matrix);
  const Vector b = make_rhs(o.rhs, A.dim());
  const SolveConfig c = make_config(method, o);
  const auto M = parse_precond(o.precond, A);
  const SolveResult r = run_method(A, b, c, M);
  emit(out_path, out, [&](std::ostream& s) {
    for (double v : r.y) s << format_double(v) << "\n";
  });
  if (!trace_out.empty()) {
    emit(trace_out, out, [&](std::ostream& s) {
      if (fs::path(trace_out).extension() == ".csv") {
        write_trace_csv(s, r.trace);
      } else {
        s << trace_to_json(r.trace) << "\n";
      }
    });
  }
  summarize(err, method, r);
  return status_code(r);
}

/// Row k: max_{j<k} |p_k^T A p_j| / sqrt(p_k^T A p_k p_j^T A p_j); NaN where undefined.
std::vector<double> conjugacy_loss_rows(const SymmetricOperator& A, const std::vector<Vector>& P) {
  std::vector<Vector> AP;
  AP.reserve(P.size());
  for (const Vector& p : P) AP.push_back(A.apply(p));
  std::vector<double> diag(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) diag[i] = dot(P[i], AP[i]);
  std::vector<double> rows(P.size(), kNaN);
  for (std::size_t k = 1; k < P.size(); ++k) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double scale = std::sqrt(std::abs(diag[k] * diag[j]));
      if (scale > 0.0) worst = std::max(worst, std::abs(dot(P[k], AP[j])) / scale);
    }
    rows[k] = worst;
  }
  return rows;
}

int cmd_compare(const RunOptions& o, const std::vector<std::string>& methods,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (methods.size() < 2) throw UsageError("compare needs at least two methods");
  const SymmetricOperator A = read_matrix(o.matrix);
  const Vector b = make_rhs(o.rhs, A.dim());
  std::vector<SolveConfig> configs;
  for (const std::string& m : methods) {
    SolveConfig c = make_config(m, o);
    c.store_basis = true;
    configs.push_back(std::move(c));
  }
  const auto M = parse_precond(o.precond, A);
  std::optional<Vector> y_star;
  if (A.dim() <= kDenseLimit) y_star = dense_solve(A, b);

  std::ostringstream csv;
  csv << "method,k,rnorm,f_energy,max_conj_loss_row\n";
  int code = kExitOk;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const SolveResult r = run_method(A, b, configs[i], M);
    summarize(err, methods[i], r);
    code = std::max(code, status_code(r));
    const auto loss = conjugacy_loss_rows(A, r.trace.directions);
    for (const StepRecord& s : r.trace.records) {
      csv << methods[i] << ',' << s.k << ',' << cell(s.rnorm) << ',';
      if (y_star && s.k < r.trace.iterates.size()) {
        csv << cell(error_function(A, *y_star, r.trace.iterates[s.k]));
      }
      csv << ',';
      if (s.k < loss.size()) csv << cell(loss[s.k]);
      csv << '\n';
    }
  }
  emit(out_path, out, [&](std::ostream& s) { s << csv.str(); });
  return code;
}

CheckReport failed_report(const std::string& name, const std::string& why) {
  CheckReport rep;
  rep.check_name = name;
  rep.pass = false;
  rep.max_violation = kNaN;
  rep.note = why;
  return rep;
}

CheckReport run_check(const std::string& name, const SymmetricOperator& A, const Vector& b,
                      const BasisBundle& bundle, const SolveConfig& c) {
  const auto y_star = [&] { return reference_solution(A, b); };
  if (name == "conjugacy") return conjugacy_check(A, bundle);
  if (name == "orthogonality") return orthogonality_check(bundle);
  if (name == "error-decrease") return error_decrease_check(A, bundle, y_star());
  if (name == "manifold") {
    CheckReport all;
    all.check_name = "manifold";
    all.threshold = 1e-12;
    for (std::size_t i = 1; i < bundle.directions(); ++i) {
      const CheckReport one = manifold_optimality_check(A, bundle, i, 100);
      StepCheck s;
      s.k = i;
      s.violation = one.max_violation;
      s.value = one.max_violation;
      all.add(std::move(s));
    }
    all.finalize();
    return all;
  }
  if (name == "determinant") return determinant_check(A, bundle);
  if (name == "inverse") return inverse_check(A, bundle);
  if (name == "factorization") return factorization_check(bundle);
  if (name == "epsilon-propagation") {
    return epsilon_propagation_check(A, bundle, conjugacy_model_for(c.method));
  }
  const SpectrumBounds sb = spectrum_bounds(A);
  if (name == "bounds") return coefficient_bounds(bundle, sb.lambda_min, sb.lambda_max);
  // chebyshev: asserted for CG and CD(-a) only
  const bool asserted =
      c.method == Method::kCG ||
      (c.method == Method::kCD && c.gamma.kind() == GammaStrategy::Kind::kMinusA);
  return chebyshev_bound_check(A, bundle, y_star(), sb.condition_number(), asserted);
}

int cmd_diagnose(const RunOptions& o, const std::string& method, const std::vector<std::string>& checks_in,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<std::string> checks = checks_in.empty() ? kCheckNames : checks_in;
  for (const std::string& c : checks) {
    if (std::find(kCheckNames.begin(), kCheckNames.end(), c) == kCheckNames.end()) {
      throw UsageError("unknown check '" + c + "'");
    }
  }
  const SymmetricOperator A = read_matrix(o.matrix);
  const Vector b = make_rhs(o.rhs, A.dim());
  SolveConfig c = make_config(method, o);
  c.store_basis = true;
  const SolveResult r = solve(A, b, {}, c);
  summarize(err, method, r);
  const BasisBundle bundle = BasisBundle::from_result(r, c.method);

  std::vector<CheckReport> reports;
  bool short_trajectory = false;
  for (const std::string& name : checks) {
    try {
      reports.push_back(run_check(name, A, b, bundle, c));
    } catch (const NotFullRankTrajectory& e) {
      short_trajectory = true;
      reports.push_back(failed_report(name, std::string("NotFullRankTrajectory: ") + e.what()));
    } catch (const IncompleteBasisError& e) {
      reports.push_back(failed_report(name, std::string("IncompleteBasisError: ") + e.what()));
    } catch (const CurvatureError& e) {
      reports.push_back(failed_report(name, std::string("CurvatureError: ") + e.what()));
    } catch (const HistoryError& e) {
      reports.push_back(failed_report(name, std::string("HistoryError: ") + e.what()));
    }
  }
  emit(out_path, out, [&](std::ostream& s) { s << to_json(reports) << "\n"; });
  for (const CheckReport& rep : reports) {
    if (!rep.pass) err << "check " << rep.check_name << " failed" << (rep.note.empty() ? "" : ": " + rep.note) << "\n";
  }
  if (short_trajectory) err << "NotFullRankTrajectory\n";
  return all_pass(reports) ? kExitOk : kExitCheckFailed;
}

int cmd_generate(const std::string& kind, std::size_t n, double cond, std::uint64_t seed,
                 const std::string& out_path, std::ostream& out) {
  static const std::map<std::string, TestMatrixSpec::Kind> kinds = {
      {"laplacian1d", TestMatrixSpec::Kind::kLaplacian1D},
      {"diag-geom", TestMatrixSpec::Kind::kDiagGeometric},
      {"diag-linear", TestMatrixSpec::Kind::kDiagLinear},
      {"random-spd", TestMatrixSpec::Kind::kRandomSPD},
  };
  const auto it = kinds.find(kind);
  if (it == kinds.end()) throw UsageError("unknown kind '" + kind + "'");
  const SymmetricOperator A = generate_test_matrix({it->second, n, cond, seed});
  emit(out_path, out, [&](std::ostream& s) { write_matrix_market(A, s); });
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conjugate-direction solvers and diagnostics", "cdkit"};
  app.require_subcommand(1, 1);

  RunOptions run;
  std::string method = "cd";
  std::string trace_out;
  std::string out_path;
  std::vector<std::string> methods;
  std::vector<std::string> checks;
  std::string kind;
  std::size_t gen_n = 0;
  double gen_cond = 1.0;
  std::uint64_t gen_seed = 0;

  auto* solve_cmd = app.add_subcommand("solve", "solve A y = b, write y one value per line");
  add_run_options(solve_cmd, run);
  solve_cmd->add_option("--method", method, "cg | cd[:g] | cd-step0b[:g] | cd-red | scaled-cg:<file> | hybrid");
  solve_cmd->add_option("--gamma", run.gamma, "const:<c> | a | neg-a | abs-a | neg-abs-a | red | scaled:<file> | decay:<c>");
  solve_cmd->add_option("--precond", run.precond, "none | jacobi | file:<path>");
  solve_cmd->add_option("--cg-steps", run.cg_steps, "hybrid: steps taken in CG form")->delimiter(',');
  solve_cmd->add_option("--trace-out", trace_out, "trace file (.json, or .csv)");
  solve_cmd->add_option("--out", out_path, "solution file (default stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "run several methods, write per-iteration CSV");
  add_run_options(compare_cmd, run);
  compare_cmd->add_option("--methods", methods, "two or more method specs")->required()->delimiter(',');
  compare_cmd->add_option("--precond", run.precond, "none | jacobi | file:<path>");
  compare_cmd->add_option("--cg-steps", run.cg_steps, "hybrid: steps taken in CG form")->delimiter(',');
  compare_cmd->add_option("--out", out_path, "CSV file (default stdout)");

  auto* diagnose_cmd = app.add_subcommand("diagnose", "run a stored solve and certify it");
  add_run_options(diagnose_cmd, run);
  diagnose_cmd->add_option("--method", method, "method spec as for solve");
  diagnose_cmd->add_option("--gamma", run.gamma, "gamma strategy");
  diagnose_cmd->add_option("--cg-steps", run.cg_steps, "hybrid: steps taken in CG form")->delimiter(',');
  diagnose_cmd->add_option("--checks", checks, "comma list; empty runs all")->delimiter(',');
  diagnose_cmd->add_option("--out", out_path, "JSON report (default stdout)");

  auto* generate_cmd = app.add_subcommand("generate", "write a test matrix in Matrix Market form");
  generate_cmd->add_option("--kind", kind, "laplacian1d | diag-geom | diag-linear | random-spd")->required();
  generate_cmd->add_option("--n", gen_n, "dimension")->required();
  generate_cmd->add_option("--cond", gen_cond, "target condition number");
  generate_cmd->add_option("--seed", gen_seed, "random-spd seed");
  generate_cmd->add_option("--out", out_path, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(run, method, trace_out, out_path, out, err);
    if (*compare_cmd) return cmd_compare(run, methods, out_path, out, err);
    if (*diagnose_cmd) return cmd_diagnose(run, method, checks, out_path, out, err);
    return cmd_generate(kind, gen_n, gen_cond, gen_seed, out_path, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NotFullRankTrajectory& e) {
    err << "NotFullRankTrajectory: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace cdkit
