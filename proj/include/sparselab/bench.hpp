#pragma once

#include "sparselab/condition_lab.hpp"
#include "sparselab/model_core.hpp"
#include "sparselab/oracle_verifier.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sparselab::bench {

inline constexpr const char* kSchemaVersion = "1.0.0";

/// Families: identity, orthonormal, equicorrelated, toeplitz, example1,
/// example2, gaussian.
///
/// equicorrelated: by default the first p-1 variables are orthonormal and the
/// last one has correlation rho with each of them; with `full_equicorrelation`
/// every off-diagonal entry is rho. Realized with n = p as sqrt(n) Sigma^{1/2}.
struct DesignSpec {
  std::string family = "gaussian";
  Index n = 100;
  Index p = 200;
  double rho = 0.0;
  std::uint64_t seed = 1;
  bool full_equicorrelation = false;
};

const std::vector<std::string>& design_families();

/// Target Gram for the equicorrelated and toeplitz families.
Eigen::MatrixXd target_gram(const DesignSpec& spec);

DesignMatrix generate_design(const DesignSpec& spec);

/// Centers each column and rescales it to squared norm n. Constant columns
/// are rejected.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& X);

/// beta0 with support {1..s} (or `support`, one-based), all magnitudes equal,
/// signs positive unless `signs` is given.
struct SparseBeta {
  Index s = 5;
  double magnitude = 1.0;
  std::vector<long long> support;
  std::vector<int> signs;
};

CoefVector make_beta0(const SparseBeta& spec, Index p);

struct ExperimentConfig {
  DesignSpec design;
  std::optional<Eigen::MatrixXd> design_matrix;  // overrides `design` when set
  std::optional<CoefVector> beta0;               // overrides `sparse` when set
  SparseBeta sparse;
  NoiseModel noise;
  LambdaRule rule;
  std::optional<double> lambda;
  long reps = 1;
  SolverOptions solver{};
  bool per_replication = true;  // emit bound_reports for every replication
};

/// Cone opening used for the design constants: 1 without noise, (c+1)/(c-1)
/// otherwise.
double experiment_cone_L(const ExperimentConfig& config);

/// Replication r draws its noise from Rng(noise.seed, r + 1).
Eigen::VectorXd replication_noise(const NoiseModel& noise, Index n, long r);

nlohmann::json run_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json config_to_json(const ExperimentConfig& config);

// CSV: rows are observations, columns variables. A first row that does not
// parse as numbers is taken as a header.
struct CsvTable {
  Eigen::MatrixXd values;
  std::vector<std::string> names;
};

CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv(const std::string& path);
DesignMatrix ingest_matrix(const std::string& path);
/// Single column or single row.
CoefVector ingest_vector(const std::string& path);

void write_csv(std::ostream& out, const Eigen::MatrixXd& values,
               const std::vector<std::string>& names = {});
/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace sparselab::bench
