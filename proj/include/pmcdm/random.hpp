#pragma once

#include <armadillo>

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace pmcdm {

// Mixes a base seed with a list of tags (condition key, replication,
// chain index, purpose, ...) into an independent stream seed. Streams
// depend only on their tags, never on the order they are created in.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Uniform on the open interval (0,1).
  double uniform();
  double normal();
  double gamma(double shape);  // unit scale
  double beta(double a, double b);
  bool bernoulli(double p);
  double chi_squared(double dof);

  // Index drawn with probability proportional to weights (need not sum to 1).
  std::size_t categorical(std::span<const double> weights);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// X ~ N(mean, 1) conditioned on X >= 0 (positive = true) or X < 0.
double truncated_normal(Rng& rng, double mean, bool positive);

// Draw from N(mean, L L^T) given the lower Cholesky factor L.
arma::vec mvnormal_chol(Rng& rng, const arma::vec& mean, const arma::mat& chol_lower);

// Wishart(scale, dof) via the Bartlett decomposition; dof > K - 1.
arma::mat wishart(Rng& rng, const arma::mat& scale, double dof);

// Inverse-Wishart(scale, dof): Sigma^{-1} ~ Wishart(scale^{-1}, dof).
// Mean is scale / (dof - K - 1) for dof > K + 1.
arma::mat inverse_wishart(Rng& rng, const arma::mat& scale, double dof);

// Symmetric positive-definite inverse; throws NumericError on failure.
arma::mat spd_inverse(const arma::mat& a, const char* what);

// Lower Cholesky factor; throws NumericError on failure.
arma::mat chol_lower(const arma::mat& a, const char* what);

}  // namespace pmcdm
