// sparselab command-line front end.
#include "sparselab/bench.hpp"
#include "sparselab/condition_lab.hpp"
#include "sparselab/errors.hpp"
#include "sparselab/lasso_solver.hpp"
#include "sparselab/oracle_verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace sparselab;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

struct DesignArgs {
  std::string file;
  bool standardize = false;
  bench::DesignSpec spec;
};

struct BetaArgs {
  std::string file;
  bench::SparseBeta sparse;
};

struct NoiseArgs {
  double sigma = 0.0;
  double c = 2.0;
  double tau = 2.5;
  std::optional<double> lambda;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Seed for designs and noise")->capture_default_str();
  cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

void add_design(CLI::App* cmd, DesignArgs& d) {
  cmd->add_option("--design", d.file, "Design CSV (rows = observations)");
  cmd->add_flag("--standardize", d.standardize, "Center and scale design columns");
  cmd->add_option("--family", d.spec.family, "Generated design family")
      ->check(CLI::IsMember(bench::design_families()))
      ->capture_default_str();
  cmd->add_option("--n", d.spec.n, "Rows of a generated design")->capture_default_str();
  cmd->add_option("--p", d.spec.p, "Columns of a generated design")->capture_default_str();
  cmd->add_option("--rho", d.spec.rho, "Family correlation parameter")->capture_default_str();
  cmd->add_flag("--full-equicorrelation", d.spec.full_equicorrelation,
                "Equicorrelated family: rho on every off-diagonal entry");
}

void add_beta(CLI::App* cmd, BetaArgs& b) {
  cmd->add_option("--beta0", b.file, "True coefficient vector CSV");
  cmd->add_option("--s", b.sparse.s, "Sparsity of the generated beta0")->capture_default_str();
  cmd->add_option("--magnitude", b.sparse.magnitude, "Magnitude of active coefficients")
      ->capture_default_str();
  cmd->add_option("--support", b.sparse.support, "Active indices (1-based)")->delimiter(',');
  cmd->add_option("--signs", b.sparse.signs, "Signs of active coefficients (+1/-1)")->delimiter(',');
}

void add_noise(CLI::App* cmd, NoiseArgs& a) {
  cmd->add_option("--sigma", a.sigma, "Noise standard deviation (0 = noiseless)")->capture_default_str();
  cmd->add_option("--c", a.c, "Lambda multiplier c > 1")->capture_default_str();
  cmd->add_option("--tau", a.tau, "Tail exponent tau > 2")->capture_default_str();
  cmd->add_option("--lambda", a.lambda, "Explicit lambda (required when sigma = 0)");
}

Eigen::MatrixXd load_design(DesignArgs d, std::uint64_t seed) {
  Eigen::MatrixXd x;
  if (!d.file.empty()) {
    x = bench::read_csv(d.file).values;
  } else {
    d.spec.seed = seed;
    x = bench::generate_design(d.spec).matrix();
  }
  if (d.standardize) x = bench::standardize_columns(x);
  return x;
}

CoefVector load_beta(const BetaArgs& b, Index p) {
  if (!b.file.empty()) {
    CoefVector v = bench::ingest_vector(b.file);
    if (v.size() != p) throw ArgumentError("--beta0 length does not match design columns");
    return v;
  }
  return bench::make_beta0(b.sparse, p);
}

bench::ExperimentConfig make_config(const DesignArgs& d, const BetaArgs& b, const NoiseArgs& a,
                                    const Common& c, long reps) {
  bench::ExperimentConfig cfg;
  cfg.design = d.spec;
  cfg.design.seed = c.seed;
  if (!d.file.empty() || d.standardize) cfg.design_matrix = load_design(d, c.seed);
  const Index p = cfg.design_matrix ? cfg.design_matrix->cols() : bench::generate_design(cfg.design).cols();
  if (!b.file.empty()) cfg.beta0 = load_beta(b, p);
  cfg.sparse = b.sparse;
  cfg.noise = NoiseModel(a.sigma, c.seed);
  cfg.rule = LambdaRule(a.c, a.tau);
  cfg.lambda = a.lambda;
  cfg.reps = reps;
  return cfg;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ArgumentError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Common& c, const json& j) {
  Output o(c.out);
  o.stream() << j.dump(2) << '\n';
}

json envelope(const std::string& kind) {
  json j;
  j["schema_version"] = bench::kSchemaVersion;
  j["kind"] = kind;
  return j;
}

std::string b01(bool b) { return b ? "1" : "0"; }

// ---- subcommand bodies ----

int run_gen_design(const Common& c, const DesignArgs& d) {
  const Eigen::MatrixXd x = load_design(d, c.seed);
  if (c.format == "csv") {
    Output o(c.out);
    bench::write_csv(o.stream(), x);
    return 0;
  }
  json j = envelope("design");
  j["family"] = d.file.empty() ? d.spec.family : "file";
  j["n"] = x.rows();
  j["p"] = x.cols();
  json rows = json::array();
  for (Index i = 0; i < x.rows(); ++i) {
    json r = json::array();
    for (Index k = 0; k < x.cols(); ++k) r.push_back(x(i, k));
    rows.push_back(r);
  }
  j["matrix"] = rows;
  emit_json(c, j);
  return 0;
}

int run_check_conditions(const Common& c, const DesignArgs& d, const BetaArgs& b, double L,
                         std::vector<std::string> which, long cap) {
  const DesignMatrix X(load_design(d, c.seed));
  const GramMatrix sigma = gram(X);
  const Index p = X.cols();
  const Support S = b.sparse.support.empty() ? Support::first(b.sparse.s, p)
                                             : Support::from_one_based(b.sparse.support, p);
  const Index s = S.size();
  const ConeSpec cone(S, L);
  ConditionOptions opts;
  opts.subset_cap = cap;
  if (which.empty()) {
    which = {"rip", "nullspace", "compatibility", "re", "adaptive_re", "strong_re", "uniform_ir"};
    const double diag_dev = (sigma.matrix().diagonal().array() - 1.0).abs().maxCoeff();
    if (diag_dev <= 1e-8) which.insert(which.begin(), "incoherence");
  }
  std::vector<ConditionReport> reports;
  for (const auto& w : which) {
    if (w == "incoherence") reports.push_back(mutual_incoherence(X));
    else if (w == "rip") reports.push_back(rip_constant(sigma, s, cap));
    else if (w == "nullspace") reports.push_back(restricted_nullspace_holds(X, S, L, cap));
    else if (w == "compatibility") reports.push_back(compatibility_constant(sigma, cone, opts));
    else if (w == "re") reports.push_back(restricted_eigenvalue_at(sigma, cone, opts));
    else if (w == "adaptive_re") reports.push_back(adaptive_restricted_eigenvalue_at(sigma, cone, opts));
    else if (w == "strong_re") reports.push_back(strong_restricted_eigenvalue_at(sigma, cone, opts));
    else if (w == "uniform_ir") reports.push_back(uniform_irrepresentable(sigma, S));
    else if (w == "weak_ir") reports.push_back(weak_irrepresentable(sigma, S, Eigen::VectorXd::Ones(s)));
    else if (w == "implications") {
      for (auto& r : implication_checks(X, s, L, S, opts)) reports.push_back(std::move(r));
    } else {
      throw ArgumentError("unknown condition '" + w + "'");
    }
  }
  if (c.format == "csv") {
    Output o(c.out);
    o.stream() << "condition,value,satisfied\n";
    for (const auto& r : reports) {
      o.stream() << r.name << ',' << bench::format_double(r.value) << ',' << b01(r.satisfied) << '\n';
    }
    return 0;
  }
  json j = envelope("conditions");
  j["design_summary"] = {{"n", X.rows()}, {"p", p}, {"s", s}, {"support", S.one_based()}, {"cone_L", L}};
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(bench::to_json(r));
  j["condition_reports"] = arr;
  emit_json(c, j);
  return 0;
}

int run_solve(const Common& c, const DesignArgs& d, const BetaArgs& b, const NoiseArgs& a,
              const std::string& y_file, bool bplp) {
  const DesignMatrix X(load_design(d, c.seed));
  Eigen::VectorXd Y;
  if (!y_file.empty()) {
    Y = bench::ingest_vector(y_file);
  } else {
    const CoefVector beta0 = load_beta(b, X.cols());
    Y = X.matrix() * beta0 + bench::replication_noise(NoiseModel(a.sigma, c.seed), X.rows(), 0);
  }
  json j = envelope("solve");
  CoefVector beta;
  if (bplp) {
    beta = solve_bplp(X, Y);
    j["method"] = "basis_pursuit";
    j["l1_norm"] = beta.lpNorm<1>();
    j["residual_norm"] = (X.matrix() * beta - Y).norm();
  } else {
    double lambda = 0.0;
    if (a.lambda) {
      lambda = *a.lambda;
    } else if (a.sigma > 0.0) {
      lambda = a.c * lambda_universal(a.sigma, X.rows(), X.cols(), a.tau);
    } else {
      throw ArgumentError("solve: --lambda is required when --sigma is 0");
    }
    const LassoSolution sol = solve_lasso(LassoProblem(X, Y, lambda));
    if (!sol.converged) throw ConvergenceError("solve: coordinate descent did not converge");
    beta = sol.beta;
    j["method"] = "lasso";
    j["lambda"] = lambda;
    j["objective"] = sol.objective;
    j["kkt_residual"] = sol.kkt_residual;
    j["iterations"] = sol.iterations;
  }
  if (c.format == "csv") {
    Output o(c.out);
    o.stream() << "index,beta\n";
    for (Index k = 0; k < beta.size(); ++k) o.stream() << k + 1 << ',' << bench::format_double(beta[k]) << '\n';
    return 0;
  }
  json arr = json::array();
  for (Index k = 0; k < beta.size(); ++k) arr.push_back(beta[k]);
  j["beta"] = arr;
  j["support"] = support_of(beta).one_based();
  emit_json(c, j);
  return 0;
}

void write_bound_rows(std::ostream& o, const json& report, const std::string& sweep, double value) {
  for (const auto& b : report["bound_reports"]) {
    o << sweep << ',' << bench::format_double(value) << ',' << b["replication"].get<long>() << ','
      << b["bound_name"].get<std::string>() << ','
      << (b["theoretical"].is_null() ? std::string() : bench::format_double(b["theoretical"].get<double>()))
      << ',' << bench::format_double(b["empirical"].get<double>()) << ',' << b01(b["holds"].get<bool>())
      << ',' << b01(b["on_good_event"].get<bool>()) << ','
      << bench::format_double(b["lambda_used"].get<double>()) << '\n';
  }
}

constexpr const char* kBoundHeader =
    "sweep,value,replication,bound,theoretical,empirical,holds,good_event,lambda\n";

int run_verify(const Common& c, const bench::ExperimentConfig& cfg) {
  const json report = bench::run_experiment(cfg);
  if (c.format == "csv") {
    Output o(c.out);
    o.stream() << kBoundHeader;
    write_bound_rows(o.stream(), report, "none", 0.0);
    return 0;
  }
  emit_json(c, report);
  return 0;
}

int run_simulate(const Common& c, bench::ExperimentConfig cfg, const std::string& sweep,
                 const std::vector<double>& values) {
  if (sweep == "none") return run_verify(c, cfg);
  if (values.empty()) throw ArgumentError("simulate: --values is required with --sweep");
  json runs = json::array();
  std::vector<std::pair<double, json>> results;
  for (double v : values) {
    bench::ExperimentConfig run = cfg;
    if (sweep == "lambda") {
      run.lambda = v;
    } else {
      if (cfg.design_matrix) throw ArgumentError("simulate: rho sweep needs a generated design");
      run.design.rho = v;
    }
    results.emplace_back(v, bench::run_experiment(run));
  }
  if (c.format == "csv") {
    Output o(c.out);
    o.stream() << kBoundHeader;
    for (const auto& [v, r] : results) write_bound_rows(o.stream(), r, sweep, v);
    return 0;
  }
  json j = envelope("sweep");
  j["sweep"] = sweep;
  for (auto& [v, r] : results) {
    json entry;
    entry["value"] = v;
    entry["report"] = std::move(r);
    runs.push_back(std::move(entry));
  }
  j["runs"] = runs;
  emit_json(c, j);
  return 0;
}

int run_recovery(const Common& c, const DesignArgs& d, const BetaArgs& b, std::vector<double> grid) {
  const DesignMatrix X(load_design(d, c.seed));
  const CoefVector beta0 = load_beta(b, X.cols());
  if (grid.empty()) throw ArgumentError("recovery-check: --lambda-grid is required");
  std::vector<RecoveryCheck> checks;
  for (double lam : grid) checks.push_back(support_recovery_check(X, beta0, lam));
  const Support S = support_of(beta0, 0.0);
  std::optional<ConditionReport> ir;
  if (S.size() < X.cols()) ir = uniform_irrepresentable(gram(X), S);

  if (c.format == "csv") {
    Output o(c.out);
    o.stream() << "lambda,selected,subset_of_S,linf_error,linf_bound,linf_ok\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& r = checks[k];
      o.stream() << bench::format_double(grid[k]) << ",\"" << r.selected.to_string() << "\","
                 << b01(r.subset_of_S) << ',' << bench::format_double(r.linf_error) << ','
                 << bench::format_double(r.linf_bound) << ',' << b01(r.linf_ok) << '\n';
    }
    return 0;
  }
  json j = envelope("recovery");
  j["support"] = S.one_based();
  j["condition_reports"] = json::array();
  if (ir) j["condition_reports"].push_back(bench::to_json(*ir));
  json arr = json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& r = checks[k];
    arr.push_back({{"lambda", grid[k]},
                   {"selected", r.selected.one_based()},
                   {"subset_of_S", r.subset_of_S},
                   {"linf_error", r.linf_error},
                   {"linf_bound", r.linf_bound},
                   {"linf_ok", r.linf_ok},
                   {"betamin_threshold", r.betamin_threshold}});
  }
  j["checks"] = arr;
  emit_json(c, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse regression condition and bound checker"};
  app.require_subcommand(1);

  Common common;
  DesignArgs design;
  BetaArgs beta;
  NoiseArgs noise;
  long reps = 1;
  double cone_L = 3.0;
  long subset_cap = 100000;
  std::vector<std::string> which;
  std::string y_file;
  bool bplp = false;
  std::string sweep = "none";
  std::vector<double> values;
  std::vector<double> lambda_grid;

  auto* gen = app.add_subcommand("gen-design", "Generate a design matrix");
  add_common(gen, common);
  add_design(gen, design);

  auto* chk = app.add_subcommand("check-conditions", "Evaluate design conditions on a support");
  add_common(chk, common);
  add_design(chk, design);
  add_beta(chk, beta);
  chk->add_option("--L", cone_L, "Cone opening")->capture_default_str();
  chk->add_option("--conditions", which,
                  "Subset of: incoherence, rip, nullspace, compatibility, re, adaptive_re, "
                  "strong_re, uniform_ir, weak_ir, implications")
      ->delimiter(',');
  chk->add_option("--subset-cap", subset_cap, "Maximum subsets or patterns enumerated")
      ->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solve a Lasso or basis pursuit problem");
  add_common(solve, common);
  add_design(solve, design);
  add_beta(solve, beta);
  add_noise(solve, noise);
  solve->add_option("--y", y_file, "Response CSV (otherwise Y = X beta0 + noise)");
  solve->add_flag("--bplp", bplp, "Minimum l1-norm interpolation instead of the Lasso");

  auto* verify = app.add_subcommand("verify-bounds", "Check the prediction and estimation bounds once");
  add_common(verify, common);
  add_design(verify, design);
  add_beta(verify, beta);
  add_noise(verify, noise);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo bound verification");
  add_common(sim, common);
  add_design(sim, design);
  add_beta(sim, beta);
  add_noise(sim, noise);
  sim->add_option("--reps", reps, "Replications")->capture_default_str();
  sim->add_option("--sweep", sweep, "Sweep parameter")
      ->check(CLI::IsMember({"none", "lambda", "rho"}))
      ->capture_default_str();
  sim->add_option("--values", values, "Sweep values")->delimiter(',');

  auto* rec = app.add_subcommand("recovery-check", "Noiseless support recovery over a lambda grid");
  add_common(rec, common);
  add_design(rec, design);
  add_beta(rec, beta);
  rec->add_option("--lambda-grid", lambda_grid, "Lambda values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return run_gen_design(common, design);
    if (*chk) return run_check_conditions(common, design, beta, cone_L, which, subset_cap);
    if (*solve) return run_solve(common, design, beta, noise, y_file, bplp);
    if (*verify) return run_verify(common, make_config(design, beta, noise, common, 1));
    if (*sim) return run_simulate(common, make_config(design, beta, noise, common, reps), sweep, values);
    if (*rec) return run_recovery(common, design, beta, lambda_grid);
  } catch (const RefusalError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "not converged: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
