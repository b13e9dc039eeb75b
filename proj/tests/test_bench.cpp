#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparselab/bench.hpp"
#include "sparselab/errors.hpp"
#include "support/fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace sparselab;
using bench::DesignSpec;

namespace {

double gram_error(const DesignMatrix& X, const Eigen::MatrixXd& target) {
  return (gram(X).matrix() - target).cwiseAbs().maxCoeff();
}

bench::CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return bench::parse_csv(in, "inline");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("two-variable examples") {
  DesignSpec a;
  a.family = "example1";
  CHECK(bench::generate_design(a).matrix() == Eigen::MatrixXd{{1.0, 2.0}});
  a.family = "example2";
  CHECK(bench::generate_design(a).matrix() == Eigen::MatrixXd{{2.0, 1.0}});
}

TEST_CASE("generated Grams hit their targets") {
  DesignSpec e;
  e.family = "equicorrelated";
  e.p = 5;
  e.rho = 0.5;
  const DesignMatrix X = bench::generate_design(e);
  CHECK(X.rows() == 5);
  CHECK(gram_error(X, fixture::last_correlated_gram(0.5)) <= 1e-10);

  e.rho = 0.2;
  e.p = 9;
  CHECK(gram_error(bench::generate_design(e), fixture::last_correlated_gram(0.2, 9)) <= 1e-10);

  e.full_equicorrelation = true;
  e.p = 6;
  e.rho = 0.3;
  Eigen::MatrixXd full = Eigen::MatrixXd::Constant(6, 6, 0.3);
  full.diagonal().setOnes();
  CHECK(gram_error(bench::generate_design(e), full) <= 1e-10);

  DesignSpec t;
  t.family = "toeplitz";
  t.p = 7;
  t.rho = -0.6;
  Eigen::MatrixXd tg(7, 7);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) tg(i, j) = std::pow(-0.6, std::abs(i - j));
  }
  CHECK(gram_error(bench::generate_design(t), tg) <= 1e-10);

  DesignSpec id;
  id.family = "identity";
  id.p = 4;
  CHECK(gram_error(bench::generate_design(id), Eigen::MatrixXd::Identity(4, 4)) <= 1e-12);

  DesignSpec o;
  o.family = "orthonormal";
  o.n = 20;
  o.p = 6;
  CHECK(gram_error(bench::generate_design(o), Eigen::MatrixXd::Identity(6, 6)) <= 1e-12);
}

TEST_CASE("invalid design parameters") {
  DesignSpec e;
  e.family = "equicorrelated";
  e.p = 5;
  e.rho = 0.51;
  CHECK_THROWS_AS(bench::generate_design(e), ArgumentError);
  e.rho = -0.51;
  CHECK_THROWS_AS(bench::generate_design(e), ArgumentError);

  DesignSpec t;
  t.family = "toeplitz";
  t.rho = 1.0;
  t.p = 4;
  CHECK_THROWS_AS(bench::generate_design(t), ArgumentError);

  DesignSpec o;
  o.family = "orthonormal";
  o.n = 3;
  o.p = 5;
  CHECK_THROWS_AS(bench::generate_design(o), ArgumentError);

  DesignSpec u;
  u.family = "banded";
  CHECK_THROWS_AS(bench::generate_design(u), ArgumentError);
}

TEST_CASE("gaussian designs are reproducible and normalized") {
  DesignSpec g;
  g.family = "gaussian";
  g.n = 100;
  g.p = 20;
  g.seed = 42;
  const DesignMatrix a = bench::generate_design(g);
  const DesignMatrix b = bench::generate_design(g);
  CHECK((a.matrix().array() == b.matrix().array()).all());
  CHECK((gram(a).matrix().diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
  g.seed = 43;
  CHECK_FALSE((bench::generate_design(g).matrix().array() == a.matrix().array()).all());
}

TEST_CASE("standardize") {
  const Eigen::MatrixXd x = fixture::gaussian(15, 4, 3).array() + 2.0;
  const Eigen::MatrixXd z = bench::standardize_columns(x);
  CHECK(z.colwise().mean().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((gram(DesignMatrix(z)).matrix().diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
  Eigen::MatrixXd c = x;
  c.col(1).setConstant(3.0);
  CHECK_THROWS_AS(bench::standardize_columns(c), ArgumentError);
}

TEST_CASE("sparse coefficient vectors") {
  bench::SparseBeta s;
  s.s = 3;
  s.magnitude = 2.0;
  CHECK(bench::make_beta0(s, 6) == (Eigen::VectorXd(6) << 2, 2, 2, 0, 0, 0).finished());
  s.support = {2, 5};
  s.signs = {1, -1};
  CHECK(bench::make_beta0(s, 6) == (Eigen::VectorXd(6) << 0, 2, 0, 0, -2, 0).finished());
  s.signs = {1};
  CHECK_THROWS_AS(bench::make_beta0(s, 6), ArgumentError);
}

TEST_CASE("csv parsing") {
  const auto t = parse("1,2,3\n4,5,6\n");
  CHECK(t.values.rows() == 2);
  CHECK(t.values.cols() == 3);
  CHECK(t.values(1, 2) == 6.0);
  CHECK(t.names.empty());

  const auto h = parse("a, b\n1.5,-2e-3\n\n3,+4\n");
  CHECK(h.names == std::vector<std::string>{"a", "b"});
  CHECK(h.values.rows() == 2);
  CHECK(h.values(0, 1) == -2e-3);
  CHECK(h.values(1, 1) == 4.0);

  CHECK(parse_error("1,2\n3\n").find("row 2") != std::string::npos);
  const std::string bad = parse_error("1,2\n3,x\n");
  CHECK(bad.find("row 2") != std::string::npos);
  CHECK(bad.find("column 2") != std::string::npos);
  CHECK(parse_error("").find("empty") != std::string::npos);
  CHECK(parse_error("1,2\n3,nan\n").find("column 2") != std::string::npos);
}

TEST_CASE("csv round trip") {
  const Eigen::MatrixXd x = fixture::gaussian(7, 4, 5) * 1e3;
  const std::string path = "bench_roundtrip.csv";
  {
    std::ofstream out(path);
    bench::write_csv(out, x, {"w", "x", "y", "z"});
  }
  const bench::CsvTable t = bench::read_csv(path);
  CHECK(t.names.size() == 4);
  CHECK((t.values - x).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(bench::ingest_matrix(path).rows() == 7);
  {
    std::ofstream out(path);
    out << "1\n2\n3\n";
  }
  CHECK(bench::ingest_vector(path) == Eigen::Vector3d(1, 2, 3));
  std::remove(path.c_str());
  CHECK_THROWS_AS(bench::read_csv("does/not/exist.csv"), ParseError);
}

TEST_CASE("experiment runner") {
  bench::ExperimentConfig cfg;
  cfg.design.family = "gaussian";
  cfg.design.n = 40;
  cfg.design.p = 60;
  cfg.design.seed = 3;
  cfg.sparse.s = 3;
  cfg.noise = NoiseModel(1.0, 3);
  cfg.reps = 25;

  SUBCASE("deterministic output") {
    const auto a = bench::run_experiment(cfg).dump();
    const auto b = bench::run_experiment(cfg).dump();
    CHECK(a == b);
    cfg.noise.seed = 4;
    CHECK(bench::run_experiment(cfg).dump() != a);
  }

  SUBCASE("report shape and conditional hold frequency") {
    const auto r = bench::run_experiment(cfg);
    CHECK(r["schema_version"] == bench::kSchemaVersion);
    CHECK(r["bound_reports"].size() == 100);
    const auto& agg = r["aggregates"];
    CHECK(agg["reps"] == 25);
    for (const auto& b : agg["bounds"]) {
      if (!b["hold_frequency_on_good_event"].is_null()) CHECK(b["hold_frequency_on_good_event"] == 1.0);
    }
    CHECK(agg["good_event_count"].get<long>() >= 20);
  }

  SUBCASE("single noiseless replication equals a direct verification") {
    cfg.noise = NoiseModel(0.0, 3);
    cfg.reps = 1;
    cfg.lambda = 0.3;
    const auto r = bench::run_experiment(cfg);
    const DesignMatrix X = bench::generate_design(cfg.design);
    const CoefVector b0 = bench::make_beta0(cfg.sparse, 60);
    VerifyOptions opts;
    opts.lambda = 0.3;
    const VerifyResult v = verify_bounds(X, b0, cfg.noise, cfg.rule, ConeSpec(support_of(b0, 0.0), 1.0), opts);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(r["bound_reports"][k]["empirical"].get<double>() == v.bounds[k].empirical);
      CHECK(r["bound_reports"][k]["holds"].get<bool>() == v.bounds[k].holds);
    }
    CHECK(r["aggregates"]["mean_losses"]["pred"].get<double>() == v.loss.pred);
  }

  SUBCASE("errors carry the replication index") {
    cfg.solver.max_iters = 1;
    try {
      bench::run_experiment(cfg);
      FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
      CHECK(std::string(e.what()).find("replication 0") != std::string::npos);
    }
    cfg.solver = SolverOptions{};
    cfg.reps = 0;
    CHECK_THROWS_AS(bench::run_experiment(cfg), ArgumentError);
  }
}
