#pragma once

// Model mathematics for binary-mastery CDMs (DINA, GDINA) and their
// partial-mastery counterparts: item response functions, copula
// transforms, mixture weights and likelihoods. No sampling state, no I/O.

#include "pmcdm/random.hpp"

#include <armadillo>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmcdm {

enum class ModelKind { Dina, Gdina, PmDina, PmGdina };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

constexpr bool is_partial_mastery(ModelKind kind) {
  return kind == ModelKind::PmDina || kind == ModelKind::PmGdina;
}
constexpr bool is_dina_family(ModelKind kind) {
  return kind == ModelKind::Dina || kind == ModelKind::PmDina;
}

// Attribute profile as a bit mask: bit k set iff attribute k is mastered.
using Profile = std::uint32_t;

inline constexpr std::size_t kMaxAttributes = 20;

Profile profile_from_bits(const arma::uvec& bits);
arma::uvec profile_bits(Profile alpha, std::size_t attributes);

// J x K binary item-attribute requirement matrix.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(arma::umat entries);

  std::size_t items() const noexcept { return entries_.n_rows; }
  std::size_t attributes() const noexcept { return entries_.n_cols; }
  const arma::umat& entries() const noexcept { return entries_; }

  // Required attribute set S_j in increasing attribute order.
  std::span<const std::size_t> required(std::size_t j) const { return required_.at(j); }
  Profile requirement_mask(std::size_t j) const { return masks_.at(j); }

  bool operator==(const QMatrix& other) const;

 private:
  arma::umat entries_;
  std::vector<std::vector<std::size_t>> required_;
  std::vector<Profile> masks_;
};

// Restriction of a full profile to the required set: bit r of the result is
// attribute required[r] of alpha. Saturated item tables are indexed by it.
std::size_t reduce_profile(std::span<const std::size_t> required, Profile alpha);

// Per-item positive-response probabilities, one cell per reduced class.
class ItemParamTable {
 public:
  ItemParamTable() = default;
  ItemParamTable(const QMatrix& q, std::vector<std::vector<double>> cells);

  static ItemParamTable constant(const QMatrix& q, double value);

  std::size_t items() const noexcept { return cells_.size(); }
  std::size_t attributes() const noexcept { return attributes_; }
  std::span<const std::size_t> required(std::size_t j) const { return required_.at(j); }
  std::span<const double> item(std::size_t j) const { return cells_.at(j); }
  double cell(std::size_t j, std::size_t reduced) const { return cells_.at(j).at(reduced); }
  std::size_t cell_count() const noexcept;
  const std::vector<std::vector<double>>& cells() const noexcept { return cells_; }

  // Throws ParameterError unless value is in (0,1).
  void set_cell(std::size_t j, std::size_t reduced, double value);

  bool operator==(const ItemParamTable& other) const = default;

 private:
  std::size_t attributes_ = 0;
  std::vector<std::vector<std::size_t>> required_;
  std::vector<std::vector<double>> cells_;
};

// Guessing and slipping per item, with 1 - s_j > g_j.
struct DinaItemParams {
  arma::vec guess;
  arma::vec slip;

  void validate() const;
};

ItemParamTable dina_table(const QMatrix& q, const DinaItemParams& params);

// N x J binary response matrix.
class ResponseMatrix {
 public:
  ResponseMatrix() = default;
  explicit ResponseMatrix(arma::umat entries);

  std::size_t subjects() const noexcept { return entries_.n_rows; }
  std::size_t items() const noexcept { return entries_.n_cols; }
  const arma::umat& entries() const noexcept { return entries_; }
  unsigned operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  bool operator==(const ResponseMatrix& other) const;

 private:
  arma::umat entries_;
};

// Gaussian copula: probit(d) ~ N(mu, sigma), sigma symmetric positive definite.
class CopulaParams {
 public:
  CopulaParams(arma::vec mu, arma::mat sigma);

  std::size_t attributes() const noexcept { return mu_.n_elem; }
  const arma::vec& mu() const noexcept { return mu_; }
  const arma::mat& sigma() const noexcept { return sigma_; }
  const arma::mat& chol() const noexcept { return chol_; }

 private:
  arma::vec mu_;
  arma::mat sigma_;
  arma::mat chol_;
};

// Sigma = variance * (rho * 1 1^T + (1 - rho) I).
arma::mat exchangeable_covariance(std::size_t attributes, double rho, double variance = 1.0);

// Throws unless every entry is in (0,1) and the entries sum to 1 within 1e-10.
void validate_class_proportions(const arma::vec& p, std::size_t attributes);

// Throws unless every entry is in [0,1].
void validate_mastery(const arma::vec& d);

// --- item response functions ---------------------------------------------

bool ideal_response_dina(const arma::uvec& alpha, const arma::uvec& q_row);
constexpr bool ideal_response_dina(Profile alpha, Profile requirement) {
  return (alpha & requirement) == requirement;
}

// (1 - slip)^xi * guess^(1 - xi)
double theta_dina(double guess, double slip, bool xi);

double theta_lookup(const ItemParamTable& table, std::size_t j, Profile alpha);

// GDINA effects <-> saturated table. Effects are indexed by subset mask of
// the required set (index 0 is the intercept); the table at reduced class a
// is the sum of effects over all subsets of a.
std::vector<double> gdina_effects_to_table(std::span<const double> effects, const arma::uvec& q_row);
std::vector<double> gdina_table_to_effects(std::span<const double> table);

// --- partial mastery ---------------------------------------------------------

// prod_k d_k^alpha_k (1 - d_k)^(1 - alpha_k)
double mixture_weight(const arma::vec& d, Profile alpha);
double mixture_weight(const arma::vec& d, const arma::uvec& alpha);

// sum over reduced classes a of theta_{j,a} * p(a | d)
double marginal_item_prob(const arma::vec& d, std::size_t j, const ItemParamTable& table);

// How integrals over the copula distribution are evaluated.
struct QuadratureSpec {
  enum class Method { MonteCarlo, Grid };
  Method method = Method::MonteCarlo;
  std::size_t draws = 100000;      // Monte Carlo
  std::size_t grid_points = 201;   // per dimension, grid only for K <= 2
  std::uint64_t seed = 0;
  std::size_t max_class_bits = 24; // cap on K * J for latent-class enumeration

  static QuadratureSpec monte_carlo(std::size_t draws, std::uint64_t seed) {
    QuadratureSpec q;
    q.draws = draws;
    q.seed = seed;
    return q;
  }
  static QuadratureSpec grid(std::size_t points = 201) {
    QuadratureSpec q;
    q.method = Method::Grid;
    q.grid_points = points;
    return q;
  }
};

// E_d[f(d)] under the copula distribution.
double integrate_copula(const CopulaParams& copula, const QuadratureSpec& spec,
                        const std::function<double(const arma::vec&)>& f);

// Latent-class weight of a per-item working-profile vector A at fixed d,
// and its expectation over the copula.
double rlcm_class_weight_at(std::span<const Profile> working, const arma::vec& d);
double rlcm_class_weight(std::span<const Profile> working, const CopulaParams& copula,
                         const QuadratureSpec& spec);

// Response probability under the latent-class representation, enumerating
// every per-item working profile (2^(K J) classes, capped).
double rlcm_response_prob(const arma::uvec& responses, const ItemParamTable& table,
                          const CopulaParams& copula, const QuadratureSpec& spec);

// Conditional log-likelihood of one response vector at fixed mastery d.
double pmcdm_subject_loglik_at(const arma::uvec& responses, const ItemParamTable& table, const arma::vec& d);

// Marginal response probability under the partial-mastery model.
double pmcdm_subject_prob(const arma::uvec& responses, const ItemParamTable& table,
                          const CopulaParams& copula, const QuadratureSpec& spec);

// Monte Carlo log marginal likelihood over mc_draws copula samples.
double pmcdm_subject_loglik(const arma::uvec& responses, const ItemParamTable& table,
                            const CopulaParams& copula, std::size_t mc_draws, std::uint64_t seed);

// Batch version sharing one set of copula draws across subjects; row i
// equals pmcdm_subject_loglik(row i, ..., mc_draws, seed).
arma::vec pmcdm_loglik(const ResponseMatrix& responses, const ItemParamTable& table,
                       const CopulaParams& copula, std::size_t mc_draws, std::uint64_t seed);

double cdm_conditional_loglik(const arma::uvec& responses, const ItemParamTable& table, Profile alpha);
double cdm_subject_loglik(const arma::uvec& responses, const ItemParamTable& table, const arma::vec& p);

// log(sum(exp(values))) with max shift.
double log_sum_exp(std::span<const double> values);

// --- monotonicity ------------------------------------------------------------

struct MonotonicityViolation {
  std::size_t item;
  std::size_t superset_class;  // reduced class mastering more attributes
  std::size_t subset_class;
  double superset_theta;
  double subset_theta;
};

// Reports every pair of reduced classes a > a' (a mastering a strict
// superset of a') with theta_a < theta_a'. This covers the full-mastery
// class against every other class.
std::vector<MonotonicityViolation> monotonicity_check(const ItemParamTable& table);

}  // namespace pmcdm
