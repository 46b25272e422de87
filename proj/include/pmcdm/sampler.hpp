#pragma once

// Data-augmented Gibbs sampler for partial-mastery CDMs and a baseline
// Gibbs sampler for classical (binary-mastery) CDMs.
//
// Partial-mastery iteration, in this order:
//   alpha*/z   per (i,j): joint categorical draw of alpha* restricted to S_j,
//              Bernoulli(d_ik) outside S_j, then z_ijk ~ N(tilde_d_ik, 1)
//              truncated to the side given by alpha*_ijk
//   tilde_d    N((Sigma^-1 + J I)^-1 (Sigma^-1 mu + sum_j z_ij), (Sigma^-1 + J I)^-1)
//   mu         N(P^-1 (Sigma0^-1 mu0 + Sigma^-1 sum_i tilde_d_i), P^-1),
//              P = Sigma0^-1 + N Sigma^-1
//   Sigma      IW(Psi0 + sum_i (tilde_d_i - mu)(tilde_d_i - mu)^T, nu0 + N)
//   theta      Beta(a0 + n_1, b0 + n_0) per reduced class; DINA pools
//              classes into xi in {0,1} and rejects draws with 1 - s <= g
//
// The derivations are written out in docs/derivations.md.

#include "pmcdm/model.hpp"
#include "pmcdm/random.hpp"

#include <armadillo>

#include <cstdint>
#include <string>
#include <vector>

namespace pmcdm {

struct BetaPrior {
  double a = 1.0;
  double b = 1.0;
};

struct PriorSpec {
  arma::vec mu0;
  arma::mat sigma0;
  arma::mat psi0;
  double nu0 = 0.0;
  BetaPrior zero_class{1.0, 2.0};   // no required attribute mastered
  BetaPrior full_class{2.0, 1.0};   // all required attributes mastered
  BetaPrior other_class{1.0, 1.0};
  double dirichlet = 1.0;           // CDM class-proportion concentration

  // mu0 = 0, Sigma0 = I, Psi0 = I, nu0 = K + 1.
  static PriorSpec defaults(std::size_t attributes);
  void validate(std::size_t attributes) const;
  BetaPrior theta_prior(std::size_t reduced, std::size_t classes) const;
};

struct ChainConfig {
  std::size_t iterations = 3000;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  std::size_t chains = 1;
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t retained_per_chain() const { return (iterations - burn_in) / thin; }
  // Iteration t (1-based) is kept when past burn-in and on the thinning grid.
  bool retains(std::size_t t) const { return t > burn_in && (t - burn_in) % thin == 0; }
};

// Latent state of a partial-mastery chain. z and alpha_star are stored
// flattened with index (i * J + j) * K + k.
struct PmState {
  std::size_t subjects = 0;
  std::size_t items = 0;
  std::size_t attributes = 0;
  arma::mat tilde_d;  // N x K
  arma::mat d;        // Phi(tilde_d)
  std::vector<double> z;
  std::vector<std::uint8_t> alpha_star;
  ItemParamTable theta;
  arma::vec mu;
  arma::mat sigma;
  std::size_t dina_fallbacks = 0;

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * items + j) * attributes + k; }
};

struct CdmState {
  std::vector<Profile> alpha;
  arma::vec proportions;
  ItemParamTable theta;
  std::size_t dina_fallbacks = 0;
};

// d0 ~ U(0.01, 0.99), tilde_d0 = probit(d0), mu0 = 0, Sigma0 = I,
// z0 ~ N(tilde_d0, 1), alpha*0 = I(z0 >= 0), theta0 = 0.5.
PmState init_pm_state(const ResponseMatrix& data, const QMatrix& q, std::uint64_t seed);

// alpha0_ik ~ Bernoulli(d0_ik) with d0 as above, uniform proportions, theta0 = 0.5.
CdmState init_cdm_state(const ResponseMatrix& data, const QMatrix& q, std::uint64_t seed);

void step_alpha_star(PmState& state, const ResponseMatrix& data, Rng& rng);
void step_tilde_d(PmState& state, Rng& rng);
void step_mu(PmState& state, const PriorSpec& prior, Rng& rng);
void step_sigma(PmState& state, const PriorSpec& prior, Rng& rng);
void step_theta(PmState& state, const ResponseMatrix& data, const PriorSpec& prior, ModelKind kind, Rng& rng);

// Draws each subject's profile from its full conditional. When posterior is
// non-null its row i receives the conditional class probabilities.
void step_profiles(CdmState& state, const ResponseMatrix& data, Rng& rng, arma::mat* posterior = nullptr);
void step_proportions(CdmState& state, const PriorSpec& prior, Rng& rng);
void step_theta(CdmState& state, const ResponseMatrix& data, const PriorSpec& prior, ModelKind kind, Rng& rng);

// Retained draws of one chain, one row per retained iteration.
struct ChainDraws {
  arma::mat theta;        // all reduced-table cells, item-major
  arma::mat mu;           // partial mastery only
  arma::mat sigma;        // vectorised column-major, partial mastery only
  arma::mat proportions;  // CDM only
};

struct ChainSummary {
  ModelKind kind = ModelKind::PmDina;
  ChainConfig config;
  QMatrix q;
  std::size_t subjects = 0;
  std::size_t retained = 0;  // across all chains

  ItemParamTable theta_mean;
  std::vector<std::vector<double>> theta_sd;
  arma::vec mu_mean, mu_sd;
  arma::mat sigma_mean, sigma_sd;
  arma::vec proportions_mean, proportions_sd;

  arma::mat d_hat;          // N x K posterior mean mastery (or marginal attribute probabilities)
  arma::umat alpha_hat;     // N x K: rounded d_hat, or joint-MAP profile for CDMs
  arma::mat profile_probs;  // N x 2^K, CDM only

  std::size_t dina_fallbacks = 0;
  std::vector<ChainDraws> draws;

  std::size_t attributes() const { return q.attributes(); }
  std::size_t items() const { return q.items(); }
};

ChainSummary fit_pmcdm(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                       const ChainConfig& config);
ChainSummary fit_cdm_bayes(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                           const ChainConfig& config);

// Dispatches on kind.
ChainSummary fit_model(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                       const ChainConfig& config);

// Column names of ChainDraws matrices.
std::vector<std::string> theta_parameter_names(const QMatrix& q);
std::vector<std::string> mu_parameter_names(std::size_t attributes);
std::vector<std::string> sigma_parameter_names(std::size_t attributes);
std::vector<std::string> proportion_parameter_names(std::size_t attributes);

}  // namespace pmcdm
