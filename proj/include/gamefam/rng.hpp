#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace gamefam {

/// Seeded random stream (xoshiro256++ state, splitmix64 expansion).
///
/// Streams form a tree: child("label", i) derives an independent stream
/// from the parent's origin seed, the label, and the index. Derivation
/// depends only on those three values, never on how many draws the parent
/// has made, so adding parallelism or reordering consumers does not change
/// any stream's output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng child(std::string_view label, std::uint64_t index = 0) const;

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n), n >= 1.
  int uniform_int(int n);

  bool bernoulli(double p);

  /// Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev);

  /// Dirichlet(1,...,1): a uniform draw from the k-simplex.
  Eigen::VectorXd simplex_uniform(int k);

  /// Index draw from a probability vector (entries >= 0, sum ~ 1).
  int categorical(const Eigen::VectorXd& probs);

 private:
  std::uint64_t origin_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace gamefam
