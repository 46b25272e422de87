#pragma once

#include "pmcdm/model.hpp"

#include <armadillo>

#include <cstdint>
#include <string>
#include <vector>

namespace pmcdm {

enum class QVariant { Complete, Incomplete };
enum class MuVariant { Zero, Nonconstant };

std::string_view to_string(QVariant v);
std::string_view to_string(MuVariant v);
QVariant parse_q_variant(std::string_view name);
MuVariant parse_mu_variant(std::string_view name);

// One cell of the simulation design.
struct SimulationCondition {
  ModelKind kind = ModelKind::PmDina;
  std::size_t attributes = 3;
  QVariant q_variant = QVariant::Complete;
  MuVariant mu_variant = MuVariant::Zero;
  double rho = 0.0;
  std::size_t subjects = 500;
  std::size_t replications = 10;
  std::uint64_t seed = 1;

  void validate() const;
  arma::vec mu() const;
  CopulaParams copula() const;
  std::string label() const;
  // Stable identifier of the design cell (independent of seed and
  // replication count), used to derive per-cell RNG streams.
  std::uint64_t key() const;
};

struct GeneratedDataset {
  ResponseMatrix responses;
  QMatrix q;
  arma::mat true_d;       // N x K; binary for CDM kinds
  arma::umat true_alpha;  // I(true_d >= 0.5)
  ItemParamTable true_theta;
  SimulationCondition condition;
  std::size_t replication = 0;
};

// Built-in 20-item designs for K = 3 and K = 5. The complete variants
// contain a K x K identity block; the incomplete ones contain none.
QMatrix builtin_q(std::size_t attributes, QVariant variant);

// tilde_d ~ N(mu, Sigma), d = Phi(tilde_d); one row per subject.
arma::mat draw_mastery_scores(const CopulaParams& copula, std::size_t subjects, std::uint64_t seed);

// alpha = I(d >= 0.5); ties at exactly 0.5 round up.
arma::umat binarize(const arma::mat& d);

// Three-step partial-mastery generation: per (i, j) draw working profile
// alpha*_ijk ~ Bernoulli(d_ik), then R_ij ~ Bernoulli(theta_{j, alpha*}).
ResponseMatrix generate_responses_pmcdm(const arma::mat& d, const ItemParamTable& table, std::uint64_t seed);

// Classical generation with a fixed profile per subject.
ResponseMatrix generate_responses_cdm(const arma::umat& alpha, const ItemParamTable& table, std::uint64_t seed);

// DINA-style: g = s = 0.2. GDINA-style: 0.2 + 0.6 * (#mastered / #required);
// items requiring more than 3 attributes are rejected.
ItemParamTable simulation_item_table(ModelKind kind, const QMatrix& q);

GeneratedDataset generate_dataset(const SimulationCondition& condition, std::size_t replication);

}  // namespace pmcdm
