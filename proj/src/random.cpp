#include "pmcdm/random.hpp"

#include "pmcdm/errors.hpp"
#include "pmcdm/normal.hpp"

#include <cmath>
#include <string>

namespace pmcdm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Standard normal conditioned on Y >= a.
double standard_tail(Rng& rng, double a) {
  const double upper = normal_sf(a);
  if (upper > 1e-300) {
    const double y = -normal_quantile(rng.uniform() * upper);
    return y < a ? a : y;
  }
  // Far tail: exponential rejection sampler (Robert 1995).
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double y = a - std::log(rng.uniform()) / rate;
    const double diff = y - rate;
    if (rng.uniform() <= std::exp(-0.5 * diff * diff)) return y;
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base ^ 0x6a09e667f3bcc909ULL);
  for (auto tag : tags) h = splitmix64(h ^ splitmix64(tag + 0x3c6ef372fe94f82bULL));
  return h;
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double Rng::uniform() {
  // 53 random bits shifted to the cell midpoint, never 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_(engine_); }

double Rng::gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

std::size_t Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Rounding left u past the last bucket; return the last positive one.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return weights.size() - 1;
}

double truncated_normal(Rng& rng, double mean, bool positive) {
  // X >= 0 with X = mean + Y  <=>  Y >= -mean.
  if (positive) return mean + standard_tail(rng, -mean);
  // X < 0  <=>  -X = -mean + Y' with Y' >= mean.
  return mean - standard_tail(rng, mean);
}

arma::vec mvnormal_chol(Rng& rng, const arma::vec& mean, const arma::mat& chol_lower) {
  arma::vec eps(mean.n_elem);
  for (auto& e : eps) e = rng.normal();
  return mean + chol_lower * eps;
}

arma::mat chol_lower(const arma::mat& a, const char* what) {
  arma::mat l;
  if (!arma::chol(l, arma::symmatu(a), "lower"))
    throw NumericError(std::string("Cholesky factorization failed: ") + what);
  return l;
}

arma::mat spd_inverse(const arma::mat& a, const char* what) {
  // inv_sympd may silently fall back to a general inverse, so gate on
  // Cholesky and invert through the triangular factor.
  arma::mat r;
  if (!arma::chol(r, arma::symmatu(a))) throw NumericError(std::string("matrix is not positive definite: ") + what);
  arma::mat r_inv;
  if (!arma::inv(r_inv, arma::trimatu(r))) throw NumericError(std::string("matrix is not invertible: ") + what);
  return arma::symmatu(r_inv * r_inv.t());
}

arma::mat wishart(Rng& rng, const arma::mat& scale, double dof) {
  const arma::uword k = scale.n_rows;
  const arma::mat c = chol_lower(scale, "Wishart scale");
  arma::mat a(k, k, arma::fill::zeros);
  for (arma::uword i = 0; i < k; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(dof - static_cast<double>(i)));
    for (arma::uword j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  const arma::mat ca = c * a;
  return arma::symmatu(ca * ca.t());
}

arma::mat inverse_wishart(Rng& rng, const arma::mat& scale, double dof) {
  const arma::uword k = scale.n_rows;
  const arma::mat c = chol_lower(spd_inverse(scale, "inverse-Wishart scale"), "inverse-Wishart scale");
  arma::mat a(k, k, arma::fill::zeros);
  for (arma::uword i = 0; i < k; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(dof - static_cast<double>(i)));
    for (arma::uword j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  // Sigma = (C A A^T C^T)^{-1} = M^{-T} M^{-1} with M = C A lower triangular.
  const arma::mat m_inv = arma::inv(arma::trimatl(c * a));
  return arma::symmatu(m_inv.t() * m_inv);
}

}  // namespace pmcdm
