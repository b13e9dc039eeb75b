#include "sparselab/bench.hpp"

#include "sparselab/errors.hpp"
#include "sparselab/rng.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sparselab::bench {

using nlohmann::json;

const std::vector<std::string>& design_families() {
  static const std::vector<std::string> families = {
      "identity", "orthonormal", "equicorrelated", "toeplitz", "example1", "example2", "gaussian"};
  return families;
}

namespace {

Eigen::MatrixXd sqrt_design(const Eigen::MatrixXd& sigma, const std::string& family) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw ArgumentError(family + " design: target Gram is not positive semidefinite (min eigenvalue " +
                        format_double(es.eigenvalues().minCoeff()) + ")");
  }
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  // With n = p rows, X'X/n = Sigma.
  return std::sqrt(static_cast<double>(sigma.rows())) * half;
}

void require_dims(const DesignSpec& spec) {
  if (spec.n < 1 || spec.p < 1) throw ArgumentError("design: n and p must be positive");
}

}  // namespace

Eigen::MatrixXd target_gram(const DesignSpec& spec) {
  const Index p = spec.p;
  if (p < 1) throw ArgumentError("design: p must be positive");
  if (!std::isfinite(spec.rho)) throw ArgumentError("design: rho must be finite");
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(p, p);
  if (spec.family == "equicorrelated") {
    if (p < 2) throw ArgumentError("equicorrelated design needs p >= 2");
    if (spec.full_equicorrelation) {
      sigma.setConstant(spec.rho);
      sigma.diagonal().setOnes();
    } else {
      for (Index j = 0; j + 1 < p; ++j) {
        sigma(p - 1, j) = spec.rho;
        sigma(j, p - 1) = spec.rho;
      }
    }
  } else if (spec.family == "toeplitz") {
    if (!(std::abs(spec.rho) < 1.0)) throw ArgumentError("toeplitz design requires |rho| < 1");
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < p; ++j) sigma(i, j) = std::pow(spec.rho, static_cast<double>(std::abs(i - j)));
    }
  } else if (spec.family != "identity") {
    throw ArgumentError("target_gram: family '" + spec.family + "' has no closed-form Gram");
  }
  return sigma;
}

DesignMatrix generate_design(const DesignSpec& spec) {
  const std::string& f = spec.family;
  if (f == "example1") return DesignMatrix(Eigen::MatrixXd{{1.0, 2.0}});
  if (f == "example2") return DesignMatrix(Eigen::MatrixXd{{2.0, 1.0}});
  require_dims(spec);

  if (f == "identity") {
    // n = p; X = sqrt(p) I so that X'X/n = I.
    return DesignMatrix(std::sqrt(static_cast<double>(spec.p)) *
                        Eigen::MatrixXd::Identity(spec.p, spec.p));
  }
  if (f == "equicorrelated" || f == "toeplitz") {
    return DesignMatrix(sqrt_design(target_gram(spec), f));
  }
  if (f == "orthonormal") {
    if (spec.n < spec.p) throw ArgumentError("orthonormal design requires n >= p");
    Rng rng(spec.seed);
    const Eigen::MatrixXd g = rng.normal_matrix(spec.n, spec.p);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(spec.n, spec.p);
    return DesignMatrix(std::sqrt(static_cast<double>(spec.n)) * q);
  }
  if (f == "gaussian") {
    Rng rng(spec.seed);
    Eigen::MatrixXd x = rng.normal_matrix(spec.n, spec.p);
    const double sqrt_n = std::sqrt(static_cast<double>(spec.n));
    for (Index j = 0; j < spec.p; ++j) {
      const double nrm = x.col(j).norm();
      if (nrm > 0.0) x.col(j) *= sqrt_n / nrm;
    }
    return DesignMatrix(std::move(x));
  }
  throw ArgumentError("unknown design family '" + f + "'");
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out = X.rowwise() - X.colwise().mean();
  const double sqrt_n = std::sqrt(static_cast<double>(X.rows()));
  for (Index j = 0; j < out.cols(); ++j) {
    const double nrm = out.col(j).norm();
    if (!(nrm > 1e-12 * std::max(1.0, X.col(j).cwiseAbs().maxCoeff()))) {
      throw ArgumentError("standardize: column " + std::to_string(j + 1) + " is constant");
    }
    out.col(j) *= sqrt_n / nrm;
  }
  return out;
}

CoefVector make_beta0(const SparseBeta& spec, Index p) {
  Support S;
  if (spec.support.empty()) {
    if (spec.s < 0 || spec.s > p) throw ArgumentError("beta0: s must lie in [0, p]");
    S = Support::first(spec.s, p);
  } else {
    S = Support::from_one_based(spec.support, p);
  }
  if (!spec.signs.empty() && static_cast<Index>(spec.signs.size()) != S.size()) {
    throw ArgumentError("beta0: sign pattern length must equal the support size");
  }
  if (!std::isfinite(spec.magnitude) || !(spec.magnitude > 0.0)) {
    throw ArgumentError("beta0: magnitude must be positive");
  }
  CoefVector beta = CoefVector::Zero(p);
  for (Index k = 0; k < S.size(); ++k) {
    double sgn = 1.0;
    if (!spec.signs.empty()) {
      const int v = spec.signs[static_cast<std::size_t>(k)];
      if (v != 1 && v != -1) throw ArgumentError("beta0: signs must be +1 or -1");
      sgn = v;
    }
    beta[S[k]] = sgn * spec.magnitude;
  }
  return beta;
}

double experiment_cone_L(const ExperimentConfig& config) {
  return config.noise.sigma > 0.0 ? cone_parameter(config.rule.c) : 1.0;
}

Eigen::VectorXd replication_noise(const NoiseModel& noise, Index n, long r) {
  if (!(noise.sigma > 0.0)) return Eigen::VectorXd::Zero(n);
  Rng rng(noise.seed, static_cast<std::uint64_t>(r) + 1);
  return noise.sigma * rng.normal_vector(n);
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json one_based(const std::vector<Index>& idx) {
  json arr = json::array();
  for (Index i : idx) arr.push_back(i + 1);
  return arr;
}

json meta_json(const std::map<std::string, double>& meta) {
  json obj = json::object();
  for (const auto& [k, v] : meta) obj[k] = v;
  return obj;
}

template <class Fn>
auto with_replication(long r, Fn&& fn) -> decltype(fn()) {
  const std::string tag = "replication " + std::to_string(r) + ": ";
  try {
    return fn();
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(tag + e.what());
  } catch (const RefusalError& e) {
    throw RefusalError(tag + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(tag + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError(tag + e.what());
  }
}

std::vector<ConditionReport> design_conditions(const DesignMatrix& X, const GramMatrix& sigma,
                                               const ConeSpec& cone, const DesignConstants& dc) {
  std::vector<ConditionReport> out{dc.compatibility, dc.strong_re};
  out.push_back(restricted_eigenvalue_at(sigma, cone));
  if (cone.S.size() < X.cols()) {
    try {
      out.push_back(uniform_irrepresentable(sigma, cone.S));
    } catch (const PreconditionError&) {
      // Sigma11 singular: irrepresentable constants undefined.
    }
  }
  const double diag_dev = (sigma.matrix().diagonal().array() - 1.0).abs().maxCoeff();
  if (diag_dev <= 1e-8) out.push_back(mutual_incoherence(X));
  return out;
}

}  // namespace

json to_json(const ConditionReport& report) {
  json j;
  j["name"] = report.name;
  j["value"] = report.value;
  j["satisfied"] = report.satisfied;
  j["witness"] = report.witness ? vector_json(*report.witness) : json(nullptr);
  j["witness_indices"] = one_based(report.witness_indices);
  j["meta"] = meta_json(report.meta);
  return j;
}

json to_json(const BoundReport& report) {
  json j;
  j["bound_name"] = report.bound_name;
  j["theoretical"] = report.applicable ? json(report.theoretical) : json(nullptr);
  j["empirical"] = report.empirical;
  j["holds"] = report.holds;
  j["applicable"] = report.applicable;
  j["on_good_event"] = report.on_good_event;
  j["lambda_used"] = report.lambda_used;
  j["phi_used"] = report.phi_used;
  j["meta"] = meta_json(report.meta);
  return j;
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  json d;
  if (config.design_matrix) {
    d["family"] = "file";
    d["n"] = config.design_matrix->rows();
    d["p"] = config.design_matrix->cols();
  } else {
    d["family"] = config.design.family;
    d["n"] = config.design.n;
    d["p"] = config.design.p;
    d["rho"] = config.design.rho;
    d["seed"] = config.design.seed;
    d["full_equicorrelation"] = config.design.full_equicorrelation;
  }
  j["design"] = d;
  if (config.beta0) {
    j["beta0"] = vector_json(*config.beta0);
  } else {
    json b;
    b["s"] = config.sparse.s;
    b["magnitude"] = config.sparse.magnitude;
    b["support"] = config.sparse.support;
    b["signs"] = config.sparse.signs;
    j["beta0"] = b;
  }
  j["noise"] = {{"sigma", config.noise.sigma}, {"seed", config.noise.seed}};
  j["rule"] = {{"c", config.rule.c}, {"tau", config.rule.tau}};
  j["lambda"] = config.lambda ? json(*config.lambda) : json(nullptr);
  j["reps"] = config.reps;
  return j;
}

json run_experiment(const ExperimentConfig& config) {
  if (config.reps < 1) throw ArgumentError("experiment: reps must be at least 1");
  const DesignMatrix X = config.design_matrix ? DesignMatrix(*config.design_matrix)
                                              : generate_design(config.design);
  const Index n = X.rows();
  const Index p = X.cols();
  const CoefVector beta0 = config.beta0 ? *config.beta0 : make_beta0(config.sparse, p);
  if (beta0.size() != p) throw ArgumentError("experiment: beta0 length does not match the design");
  const Support S = support_of(beta0, 0.0);
  if (S.empty() || S.size() == p) {
    throw ArgumentError("experiment: beta0 support must be nonempty and proper");
  }
  const bool noisy = config.noise.sigma > 0.0;
  if (!noisy && !config.lambda) {
    throw ArgumentError("experiment: noiseless runs need an explicit lambda");
  }

  const GramMatrix sigma = gram(X);
  const ConeSpec cone(S, experiment_cone_L(config));
  const DesignConstants dc = design_constants(X, cone);

  json report;
  report["schema_version"] = kSchemaVersion;
  report["kind"] = "experiment";
  report["config"] = config_to_json(config);

  json summary;
  summary["n"] = n;
  summary["p"] = p;
  summary["s"] = S.size();
  summary["support"] = S.one_based();
  summary["cone_L"] = cone.L;
  summary["min_eigen_gram"] = min_eigen(sigma.matrix());
  summary["max_diag_deviation"] = (sigma.matrix().diagonal().array() - 1.0).abs().maxCoeff();
  summary["beta0_l1"] = beta0.lpNorm<1>();
  report["design_summary"] = summary;

  json conditions = json::array();
  for (const auto& c : design_conditions(X, sigma, cone, dc)) conditions.push_back(to_json(c));
  report["condition_reports"] = conditions;

  VerifyOptions vopts;
  vopts.lambda = config.lambda;
  vopts.constants = dc;
  vopts.solver = config.solver;

  constexpr std::size_t kBounds = 4;
  std::array<long, kBounds> holds{}, holds_good{}, applicable{};
  std::array<std::string, kBounds> names;
  long good = 0, cone_good = 0, basic_ok = 0, l1_ratio_good = 0;
  double sum_pred = 0.0, sum_l1 = 0.0, sum_l2 = 0.0, sum_sel = 0.0, lambda_used = 0.0;
  json bound_reports = json::array();

  for (long r = 0; r < config.reps; ++r) {
    vopts.eps = replication_noise(config.noise, n, r);
    const VerifyResult res =
        with_replication(r, [&] { return verify_bounds(X, beta0, config.noise, config.rule, cone, vopts); });
    lambda_used = res.lambda;
    good += res.good_event;
    basic_ok += res.basic_inequality_ok;
    if (res.good_event) {
      cone_good += res.cone_ok;
      l1_ratio_good += res.l1_ratio_ok;
    }
    sum_pred += res.loss.pred;
    sum_l1 += res.loss.l1;
    sum_l2 += res.loss.l2sq;
    sum_sel += res.loss.selection;
    for (std::size_t k = 0; k < kBounds; ++k) {
      const BoundReport& b = res.bounds[k];
      names[k] = b.bound_name;
      applicable[k] += b.applicable;
      holds[k] += b.holds;
      if (res.good_event) holds_good[k] += b.holds;
      if (config.per_replication) {
        json jb = to_json(b);
        jb["replication"] = r;
        jb["stochastic_term"] = res.stochastic;
        bound_reports.push_back(std::move(jb));
      }
    }
  }
  report["bound_reports"] = bound_reports;

  const double reps = static_cast<double>(config.reps);
  json agg;
  agg["reps"] = config.reps;
  agg["lambda"] = lambda_used;
  agg["good_event_count"] = good;
  agg["good_event_frequency"] = static_cast<double>(good) / reps;
  agg["basic_inequality_frequency"] = static_cast<double>(basic_ok) / reps;
  agg["cone_membership_frequency_on_good_event"] =
      good > 0 ? json(static_cast<double>(cone_good) / static_cast<double>(good)) : json(nullptr);
  agg["l1_ratio_frequency_on_good_event"] =
      good > 0 ? json(static_cast<double>(l1_ratio_good) / static_cast<double>(good)) : json(nullptr);
  json per_bound = json::array();
  for (std::size_t k = 0; k < kBounds; ++k) {
    json jb;
    jb["bound_name"] = names[k];
    jb["applicable"] = applicable[k] > 0;
    jb["hold_frequency"] = static_cast<double>(holds[k]) / reps;
    jb["hold_frequency_on_good_event"] =
        good > 0 ? json(static_cast<double>(holds_good[k]) / static_cast<double>(good)) : json(nullptr);
    per_bound.push_back(jb);
  }
  agg["bounds"] = per_bound;
  agg["mean_losses"] = {{"pred", sum_pred / reps},
                        {"l1", sum_l1 / reps},
                        {"l2sq", sum_l2 / reps},
                        {"selection", sum_sel / reps}};
  report["aggregates"] = agg;
  return report;
}

// ---- CSV ----

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw ParseError(source + ": empty CSV file");

  CsvTable table;
  std::size_t start = 0;
  double probe = 0.0;
  const bool header = std::any_of(rows[0].begin(), rows[0].end(),
                                  [&](const std::string& c) { return !parse_number(c, probe); });
  if (header) {
    table.names = rows[0];
    start = 1;
  }
  if (start >= rows.size()) throw ParseError(source + ": CSV has a header but no data rows");

  const std::size_t cols = rows[start].size();
  if (header && table.names.size() != cols) {
    throw ParseError(source + ": header has " + std::to_string(table.names.size()) +
                     " columns but row " + std::to_string(line_numbers[start]) + " has " +
                     std::to_string(cols));
  }
  table.values.resize(static_cast<Index>(rows.size() - start), static_cast<Index>(cols));
  for (std::size_t r = start; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ParseError(source + ": ragged row " + std::to_string(line_numbers[r]) + " has " +
                       std::to_string(rows[r].size()) + " columns, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!parse_number(rows[r][c], v)) {
        throw ParseError(source + ": non-numeric cell at row " + std::to_string(line_numbers[r]) +
                         ", column " + std::to_string(c + 1) + ": '" + rows[r][c] + "'");
      }
      table.values(static_cast<Index>(r - start), static_cast<Index>(c)) = v;
    }
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return parse_csv(in, path);
}

DesignMatrix ingest_matrix(const std::string& path) { return DesignMatrix(read_csv(path).values); }

CoefVector ingest_vector(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.values.cols() == 1) return t.values.col(0);
  if (t.values.rows() == 1) return t.values.row(0).transpose();
  throw ParseError(path + ": expected a single row or a single column, got " +
                   std::to_string(t.values.rows()) + "x" + std::to_string(t.values.cols()));
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& names) {
  if (!names.empty()) {
    if (static_cast<Index>(names.size()) != values.cols()) {
      throw ArgumentError("write_csv: header size does not match column count");
    }
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
}

}  // namespace sparselab::bench
