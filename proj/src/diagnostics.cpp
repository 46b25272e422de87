#include "pmcdm/diagnostics.hpp"

#include "pmcdm/errors.hpp"
#include "pmcdm/io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pmcdm {

namespace {

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols)
    throw DimensionError(std::string(what) + ": shapes " + std::to_string(a.n_rows) + "x" + std::to_string(a.n_cols) +
                         " and " + std::to_string(b.n_rows) + "x" + std::to_string(b.n_cols) + " differ");
  if (a.n_elem == 0) throw DimensionError(std::string(what) + ": empty input");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ErrorPair item_mae_rmse(const ItemParamTable& truth, const ItemParamTable& estimate) {
  if (truth.items() != estimate.items()) throw DimensionError("item tables differ in item count");
  double abs_sum = 0.0, sq_sum = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < truth.items(); ++j) {
    const auto t = truth.item(j);
    const auto e = estimate.item(j);
    if (t.size() != e.size())
      throw DimensionError("item " + std::to_string(j + 1) + " tables differ in reduced-class count");
    for (std::size_t a = 0; a < t.size(); ++a) {
      const double diff = e[a] - t[a];
      abs_sum += std::abs(diff);
      sq_sum += diff * diff;
      ++n;
    }
  }
  if (n == 0) throw DimensionError("item tables are empty");
  return {abs_sum / static_cast<double>(n), std::sqrt(sq_sum / static_cast<double>(n))};
}

double amcr(const arma::umat& alpha_true, const arma::umat& alpha_hat) {
  require_same_shape(alpha_true, alpha_hat, "AMCR");
  return static_cast<double>(arma::accu(alpha_true != alpha_hat)) / static_cast<double>(alpha_true.n_elem);
}

double arse(const arma::mat& d_true, const arma::mat& d_hat) {
  require_same_shape(d_true, d_hat, "ARSE");
  const arma::mat diff = d_true - d_hat;
  return std::sqrt(arma::accu(diff % diff) / static_cast<double>(diff.n_elem));
}

arma::vec amcr_by_attribute(const arma::umat& alpha_true, const arma::umat& alpha_hat) {
  require_same_shape(alpha_true, alpha_hat, "AMCR");
  const arma::umat wrong = arma::conv_to<arma::umat>::from(alpha_true != alpha_hat);
  return arma::conv_to<arma::vec>::from(arma::sum(wrong, 0).t()) / static_cast<double>(alpha_true.n_rows);
}

arma::vec arse_by_attribute(const arma::mat& d_true, const arma::mat& d_hat) {
  require_same_shape(d_true, d_hat, "ARSE");
  const arma::mat diff = d_true - d_hat;
  return arma::sqrt(arma::sum(diff % diff, 0).t() / static_cast<double>(diff.n_rows));
}

arma::umat round_profiles(const arma::mat& d) {
  arma::umat alpha(d.n_rows, d.n_cols);
  for (arma::uword i = 0; i < d.n_elem; ++i) alpha(i) = d(i) >= 0.5 ? 1U : 0U;
  return alpha;
}

arma::mat cdm_posterior_d(const arma::mat& profile_probs, std::size_t attributes) {
  if (profile_probs.n_cols != (arma::uword{1} << attributes))
    throw DimensionError("profile posterior has " + std::to_string(profile_probs.n_cols) + " columns, expected 2^" +
                         std::to_string(attributes));
  arma::mat d(profile_probs.n_rows, attributes, arma::fill::zeros);
  for (arma::uword c = 0; c < profile_probs.n_cols; ++c)
    for (std::size_t k = 0; k < attributes; ++k)
      if ((c >> k) & 1U) d.col(k) += profile_probs.col(c);
  return d;
}

MetricReport metric_report(const ItemParamTable& theta_true, const arma::umat& alpha_true, const arma::mat& d_true,
                           bool truth_partial, const ChainSummary& fit) {
  MetricReport r;
  const ErrorPair e = item_mae_rmse(theta_true, fit.theta_mean);
  r.item_mae = e.mae;
  r.item_rmse = e.rmse;
  r.amcr = amcr(alpha_true, fit.alpha_hat);
  r.amcr_by_attribute = amcr_by_attribute(alpha_true, fit.alpha_hat);
  if (truth_partial) {
    r.arse = arse(d_true, fit.d_hat);
    r.arse_by_attribute = arse_by_attribute(d_true, fit.d_hat);
  }
  return r;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::BinaryLike: return "binary-like";
    case Verdict::PartialLike: return "partial-like";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

DiagnosisReport variance_diagnostic(const arma::mat& sigma_hat) {
  if (sigma_hat.n_rows != sigma_hat.n_cols || sigma_hat.n_rows == 0)
    throw DimensionError("covariance estimate must be a non-empty square matrix");
  DiagnosisReport r;
  r.variances = sigma_hat.diag();
  if (arma::any(r.variances <= 0.0)) throw ParameterError("covariance estimate has a non-positive variance");
  const arma::vec sd = arma::sqrt(r.variances);
  r.correlation = sigma_hat / (sd * sd.t());
  r.correlation.diag().ones();
  for (double v : r.variances) {
    if (v > kBinaryLikeVariance)
      r.verdicts.push_back(Verdict::BinaryLike);
    else if (v < kPartialLikeVariance)
      r.verdicts.push_back(Verdict::PartialLike);
    else
      r.verdicts.push_back(Verdict::Indeterminate);
  }
  return r;
}

std::string scatter_table(const arma::mat& d_hat) {
  std::ostringstream os;
  const std::size_t k = d_hat.n_cols;
  if (k == 1) {
    os << "subject,d1\n";
    for (arma::uword i = 0; i < d_hat.n_rows; ++i) os << i + 1 << ',' << format_double(d_hat(i, 0)) << '\n';
    return os.str();
  }
  os << "attr_x,attr_y,subject,x,y\n";
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      for (arma::uword i = 0; i < d_hat.n_rows; ++i)
        os << a + 1 << ',' << b + 1 << ',' << i + 1 << ',' << format_double(d_hat(i, a)) << ','
           << format_double(d_hat(i, b)) << '\n';
  return os.str();
}

void scatter_export(const arma::mat& d_hat, const std::filesystem::path& path) {
  write_file_atomic(path, scatter_table(d_hat));
}

std::size_t GelmanRubinResult::converged(double threshold) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < rhat.size(); ++p)
    if (!excluded[p] && rhat[p] < threshold) ++n;
  return n;
}

std::size_t GelmanRubinResult::assessed() const {
  std::size_t n = 0;
  for (bool e : excluded)
    if (!e) ++n;
  return n;
}

GelmanRubinResult gelman_rubin(const std::vector<arma::mat>& chains) {
  if (chains.size() < 2) throw DataError("Gelman-Rubin needs at least 2 chains, got " + std::to_string(chains.size()));
  const arma::uword n = chains.front().n_rows;
  const arma::uword params = chains.front().n_cols;
  for (const auto& c : chains)
    if (c.n_rows != n || c.n_cols != params) throw DimensionError("chains differ in length or parameter count");
  if (n < 2) throw DataError("Gelman-Rubin needs at least 2 draws per chain");

  const double m = static_cast<double>(chains.size());
  const double nd = static_cast<double>(n);
  GelmanRubinResult out;
  out.rhat.assign(params, std::numeric_limits<double>::quiet_NaN());
  out.excluded.assign(params, false);
  arma::vec means(chains.size()), vars(chains.size());
  for (arma::uword p = 0; p < params; ++p) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const arma::vec col = chains[c].col(p);
      means(c) = arma::mean(col);
      vars(c) = arma::var(col);
    }
    const double w = arma::mean(vars);
    const double b = nd * (chains.size() > 1 ? arma::var(means) : 0.0);
    const double scale = std::max(std::abs(arma::mean(means)), 1.0);
    if (w <= 1e-24 * scale * scale) {
      if (b <= 1e-24 * scale * scale)
        out.excluded[p] = true;
      else
        out.rhat[p] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double v = (nd - 1.0) / nd * w + (1.0 + 1.0 / m) * b / nd;
    out.rhat[p] = std::sqrt(v / w);
  }
  return out;
}

std::size_t parameter_count(ModelKind kind, const QMatrix& q) {
  std::size_t theta = 0;
  for (std::size_t j = 0; j < q.items(); ++j)
    theta += is_dina_family(kind) ? 2 : (std::size_t{1} << q.required(j).size());
  const std::size_t k = q.attributes();
  if (is_partial_mastery(kind)) return theta + k + k * (k + 1) / 2;
  return theta + (std::size_t{1} << k) - 1;
}

InformationCriteria information_criteria(const ResponseMatrix& data, const ChainSummary& fit, std::size_t mc_draws,
                                         std::uint64_t seed) {
  if (data.items() != fit.items() || data.subjects() != fit.subjects)
    throw DimensionError("responses (" + std::to_string(data.subjects()) + "x" + std::to_string(data.items()) +
                         ") do not match the fitted summary (" + std::to_string(fit.subjects) + "x" +
                         std::to_string(fit.items()) + ")");
  InformationCriteria ic;
  if (is_partial_mastery(fit.kind)) {
    const CopulaParams copula(fit.mu_mean, arma::symmatu(fit.sigma_mean));
    ic.loglik = arma::accu(pmcdm_loglik(data, fit.theta_mean, copula, mc_draws, seed));
  } else {
    for (std::size_t i = 0; i < data.subjects(); ++i)
      ic.loglik += cdm_subject_loglik(data.entries().row(i).t(), fit.theta_mean, fit.proportions_mean);
  }
  if (!std::isfinite(ic.loglik)) throw NumericError("log-likelihood is not finite");
  ic.parameters = parameter_count(fit.kind, fit.q);
  const double p = static_cast<double>(ic.parameters);
  ic.aic = -2.0 * ic.loglik + 2.0 * p;
  ic.bic = -2.0 * ic.loglik + p * std::log(static_cast<double>(data.subjects()));
  return ic;
}

Comparison compare_models(const ResponseMatrix& data, const std::vector<ChainSummary>& fits,
                          const std::vector<std::string>& labels, std::size_t mc_draws, std::uint64_t seed) {
  if (fits.size() < 2) throw UsageError("comparison needs at least two fitted summaries");
  if (labels.size() != fits.size()) throw UsageError("one label per fitted summary is required");
  Comparison out;
  for (std::size_t f = 0; f < fits.size(); ++f) {
    if (!(fits[f].q == fits.front().q)) throw DataError("fitted summaries use different Q-matrices");
    out.rows.push_back({fits[f].kind, labels[f], information_criteria(data, fits[f], mc_draws, seed)});
  }
  for (std::size_t r = 1; r < out.rows.size(); ++r) {
    if (out.rows[r].ic.bic < out.rows[out.best_bic].ic.bic) out.best_bic = r;
    if (out.rows[r].ic.aic < out.rows[out.best_aic].ic.aic) out.best_aic = r;
  }
  return out;
}

}  // namespace pmcdm
