#pragma once

// Recovery metrics, partial-mastery diagnostics, convergence and
// information criteria. Everything here is a pure function of fitted
// summaries except scatter_export.

#include "pmcdm/model.hpp"
#include "pmcdm/sampler.hpp"

#include <armadillo>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pmcdm {

struct ErrorPair {
  double mae = 0.0;
  double rmse = 0.0;
};

// Over every reduced-table cell of every item.
ErrorPair item_mae_rmse(const ItemParamTable& truth, const ItemParamTable& estimate);

double amcr(const arma::umat& alpha_true, const arma::umat& alpha_hat);
double arse(const arma::mat& d_true, const arma::mat& d_hat);
arma::vec amcr_by_attribute(const arma::umat& alpha_true, const arma::umat& alpha_hat);
arma::vec arse_by_attribute(const arma::mat& d_true, const arma::mat& d_hat);

// I(d >= 0.5).
arma::umat round_profiles(const arma::mat& d);

// Marginal P(alpha_ik = 1) from N x 2^K class posteriors.
arma::mat cdm_posterior_d(const arma::mat& profile_probs, std::size_t attributes);

struct MetricReport {
  double item_mae = 0.0;
  double item_rmse = 0.0;
  double amcr = 0.0;
  std::optional<double> arse;  // only when the true mastery scores are partial
  arma::vec amcr_by_attribute;
  arma::vec arse_by_attribute;
};

// ARSE is reported when truth_partial is set.
MetricReport metric_report(const ItemParamTable& theta_true, const arma::umat& alpha_true, const arma::mat& d_true,
                           bool truth_partial, const ChainSummary& fit);

enum class Verdict { BinaryLike, PartialLike, Indeterminate };
std::string_view to_string(Verdict v);

inline constexpr double kBinaryLikeVariance = 5.0;
inline constexpr double kPartialLikeVariance = 3.0;

struct DiagnosisReport {
  arma::vec variances;    // diag(sigma_hat)
  arma::mat correlation;
  std::vector<Verdict> verdicts;
};

DiagnosisReport variance_diagnostic(const arma::mat& sigma_hat);

// Long-format scatter data, one panel per attribute pair (k < k'), N rows
// per panel: "attr_x,attr_y,subject,x,y". With K = 1 there are no panels
// and the single marginal column is written as "subject,d1".
std::string scatter_table(const arma::mat& d_hat);
void scatter_export(const arma::mat& d_hat, const std::filesystem::path& path);

inline constexpr double kGelmanRubinThreshold = 1.1;

struct GelmanRubinResult {
  std::vector<double> rhat;     // NaN where excluded
  std::vector<bool> excluded;   // zero within- and between-chain variance
  std::size_t converged(double threshold = kGelmanRubinThreshold) const;
  std::size_t assessed() const;
};

// chains[c] is draws x parameters; all chains must share both dimensions.
// R = sqrt(V / W), V = (n - 1) / n * W + (1 + 1/m) * B / n.
GelmanRubinResult gelman_rubin(const std::vector<arma::mat>& chains);

struct InformationCriteria {
  double loglik = 0.0;
  std::size_t parameters = 0;
  double aic = 0.0;
  double bic = 0.0;
};

// CDM: free theta cells + 2^K - 1; PM: free theta cells + K + K(K+1)/2.
// DINA variants count 2 theta parameters per item.
std::size_t parameter_count(ModelKind kind, const QMatrix& q);

inline constexpr std::size_t kDefaultLoglikDraws = 1000;
inline constexpr std::uint64_t kDefaultLoglikSeed = 20240601;

// Log-likelihood at posterior means; PM kinds integrate the copula with
// mc_draws shared draws.
InformationCriteria information_criteria(const ResponseMatrix& data, const ChainSummary& fit,
                                         std::size_t mc_draws = kDefaultLoglikDraws,
                                         std::uint64_t seed = kDefaultLoglikSeed);

struct ComparisonRow {
  ModelKind kind;
  std::string label;
  InformationCriteria ic;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::size_t best_bic = 0;
  std::size_t best_aic = 0;
};

// All fits must share the Q-matrix and subject count of data.
Comparison compare_models(const ResponseMatrix& data, const std::vector<ChainSummary>& fits,
                          const std::vector<std::string>& labels, std::size_t mc_draws = kDefaultLoglikDraws,
                          std::uint64_t seed = kDefaultLoglikSeed);

}  // namespace pmcdm
