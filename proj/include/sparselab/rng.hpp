#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace sparselab {

/// Seedable portable generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; uniforms take the top 53 bits and
/// normals use Box-Muller, so streams are bit-reproducible across platforms.
///
/// Stream splitting: `Rng(seed, stream)` seeds the engine with
/// splitmix64(seed ^ splitmix64(stream + 1)), giving independent streams per
/// replication index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();  // (0, 1)
  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

  static std::uint64_t splitmix64(std::uint64_t x);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sparselab
