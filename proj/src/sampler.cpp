#include "pmcdm/sampler.hpp"

#include "pmcdm/errors.hpp"
#include "pmcdm/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>

namespace pmcdm {

namespace {

constexpr double kThetaFloor = 1e-10;
constexpr int kDinaMaxAttempts = 100;

double clamp_theta(double v) { return std::clamp(v, kThetaFloor, 1.0 - kThetaFloor); }

void check_data(const ResponseMatrix& data, const QMatrix& q) {
  if (data.items() != q.items())
    throw DimensionError("responses have " + std::to_string(data.items()) + " items, Q-matrix has " +
                         std::to_string(q.items()));
  if (data.subjects() == 0) throw DataError("responses contain no subjects");
}

// counts[j][a] = {#R=0, #R=1} among subjects whose working profile on item j
// reduces to a.
using ClassCounts = std::vector<std::vector<std::array<double, 2>>>;

ClassCounts empty_counts(const ItemParamTable& theta) {
  ClassCounts counts(theta.items());
  for (std::size_t j = 0; j < theta.items(); ++j) counts[j].assign(theta.item(j).size(), {0.0, 0.0});
  return counts;
}

std::size_t update_theta(ItemParamTable& theta, const ClassCounts& counts, const PriorSpec& prior, bool dina,
                         Rng& rng) {
  std::size_t fallbacks = 0;
  for (std::size_t j = 0; j < theta.items(); ++j) {
    const std::size_t classes = counts[j].size();
    if (!dina) {
      for (std::size_t a = 0; a < classes; ++a) {
        const BetaPrior p = prior.theta_prior(a, classes);
        theta.set_cell(j, a, clamp_theta(rng.beta(p.a + counts[j][a][1], p.b + counts[j][a][0])));
      }
      continue;
    }
    // xi = 0 pools every class but the full one.
    double neg0 = 0.0, pos0 = 0.0;
    for (std::size_t a = 0; a + 1 < classes; ++a) {
      neg0 += counts[j][a][0];
      pos0 += counts[j][a][1];
    }
    const double neg1 = counts[j][classes - 1][0];
    const double pos1 = counts[j][classes - 1][1];
    bool accepted = false;
    for (int attempt = 0; attempt < kDinaMaxAttempts && !accepted; ++attempt) {
      const double g = clamp_theta(rng.beta(prior.zero_class.a + pos0, prior.zero_class.b + neg0));
      const double one_minus_s = clamp_theta(rng.beta(prior.full_class.a + pos1, prior.full_class.b + neg1));
      if (one_minus_s > g) {
        for (std::size_t a = 0; a + 1 < classes; ++a) theta.set_cell(j, a, g);
        theta.set_cell(j, classes - 1, one_minus_s);
        accepted = true;
      }
    }
    if (!accepted) ++fallbacks;
  }
  return fallbacks;
}

void append_row(arma::mat& m, std::size_t row, const arma::rowvec& values) { m.row(row) = values; }

arma::rowvec flatten_theta(const ItemParamTable& theta) {
  arma::rowvec out(theta.cell_count());
  std::size_t c = 0;
  for (std::size_t j = 0; j < theta.items(); ++j)
    for (double v : theta.item(j)) out(c++) = v;
  return out;
}

// Per-chain sums over retained iterations.
struct Accumulator {
  std::size_t count = 0;
  arma::rowvec theta_sum, theta_sq;
  arma::vec mu_sum, mu_sq;
  arma::mat sigma_sum, sigma_sq;
  arma::vec prop_sum, prop_sq;
  arma::mat d_sum;
  arma::mat profile_sum;
  ChainDraws draws;
  std::size_t fallbacks = 0;
};

arma::rowvec sd_from(const arma::rowvec& sum, const arma::rowvec& sq, std::size_t n) {
  arma::rowvec out(sum.n_elem, arma::fill::zeros);
  if (n < 2) return out;
  const double nd = static_cast<double>(n);
  for (arma::uword c = 0; c < sum.n_elem; ++c) {
    const double mean = sum(c) / nd;
    out(c) = std::sqrt(std::max(0.0, (sq(c) / nd - mean * mean) * nd / (nd - 1.0)));
  }
  return out;
}

void check_finite_pm(const PmState& s) {
  if (!s.mu.is_finite() || !s.sigma.is_finite()) throw NumericError("non-finite mu or Sigma");
  if (!s.tilde_d.is_finite()) throw NumericError("non-finite mastery score");
}

Accumulator run_pm_chain(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                         const ChainConfig& config, std::size_t chain) {
  const std::uint64_t chain_seed = derive_seed(config.seed, {chain});
  PmState state = init_pm_state(data, q, derive_seed(chain_seed, {0}));
  Rng rng(derive_seed(chain_seed, {1}));

  const std::size_t keep = config.retained_per_chain();
  const std::size_t k = q.attributes();
  Accumulator acc;
  acc.theta_sum.zeros(state.theta.cell_count());
  acc.theta_sq.zeros(state.theta.cell_count());
  acc.mu_sum.zeros(k);
  acc.mu_sq.zeros(k);
  acc.sigma_sum.zeros(k, k);
  acc.sigma_sq.zeros(k, k);
  acc.d_sum.zeros(data.subjects(), k);
  acc.draws.theta.set_size(keep, state.theta.cell_count());
  acc.draws.mu.set_size(keep, k);
  acc.draws.sigma.set_size(keep, k * k);

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    try {
      step_alpha_star(state, data, rng);
      step_tilde_d(state, rng);
      step_mu(state, prior, rng);
      step_sigma(state, prior, rng);
      step_theta(state, data, prior, kind, rng);
      check_finite_pm(state);
    } catch (const NumericError& e) {
      throw NumericError("chain " + std::to_string(chain) + ", iteration " + std::to_string(t) + ": " + e.what());
    }
    if (!config.retains(t) || acc.count >= keep) continue;
    const arma::rowvec th = flatten_theta(state.theta);
    acc.theta_sum += th;
    acc.theta_sq += th % th;
    acc.mu_sum += state.mu;
    acc.mu_sq += state.mu % state.mu;
    acc.sigma_sum += state.sigma;
    acc.sigma_sq += state.sigma % state.sigma;
    acc.d_sum += state.d;
    append_row(acc.draws.theta, acc.count, th);
    append_row(acc.draws.mu, acc.count, state.mu.t());
    append_row(acc.draws.sigma, acc.count, arma::vectorise(state.sigma).t());
    ++acc.count;
  }
  acc.fallbacks = state.dina_fallbacks;
  return acc;
}

Accumulator run_cdm_chain(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                          const ChainConfig& config, std::size_t chain) {
  const std::uint64_t chain_seed = derive_seed(config.seed, {chain});
  CdmState state = init_cdm_state(data, q, derive_seed(chain_seed, {0}));
  Rng rng(derive_seed(chain_seed, {1}));

  const std::size_t keep = config.retained_per_chain();
  const std::size_t classes = std::size_t{1} << q.attributes();
  Accumulator acc;
  acc.theta_sum.zeros(state.theta.cell_count());
  acc.theta_sq.zeros(state.theta.cell_count());
  acc.prop_sum.zeros(classes);
  acc.prop_sq.zeros(classes);
  acc.profile_sum.zeros(data.subjects(), classes);
  acc.draws.theta.set_size(keep, state.theta.cell_count());
  acc.draws.proportions.set_size(keep, classes);

  arma::mat posterior(data.subjects(), classes);
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const bool keep_this = config.retains(t) && acc.count < keep;
    try {
      step_profiles(state, data, rng, keep_this ? &posterior : nullptr);
      step_proportions(state, prior, rng);
      step_theta(state, data, prior, kind, rng);
    } catch (const NumericError& e) {
      throw NumericError("chain " + std::to_string(chain) + ", iteration " + std::to_string(t) + ": " + e.what());
    }
    if (!state.proportions.is_finite()) throw NumericError("iteration " + std::to_string(t) + ": non-finite proportions");
    if (!keep_this) continue;
    const arma::rowvec th = flatten_theta(state.theta);
    acc.theta_sum += th;
    acc.theta_sq += th % th;
    acc.prop_sum += state.proportions;
    acc.prop_sq += state.proportions % state.proportions;
    acc.profile_sum += posterior;
    append_row(acc.draws.theta, acc.count, th);
    append_row(acc.draws.proportions, acc.count, state.proportions.t());
    ++acc.count;
  }
  acc.fallbacks = state.dina_fallbacks;
  return acc;
}

template <typename RunChain>
std::vector<Accumulator> run_chains(const ChainConfig& config, RunChain run) {
  std::vector<Accumulator> out;
  if (config.chains == 1) {
    out.push_back(run(0));
    return out;
  }
  std::vector<std::future<Accumulator>> futures;
  for (std::size_t c = 0; c < config.chains; ++c) futures.push_back(std::async(std::launch::async, run, c));
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

ItemParamTable unflatten_theta(const QMatrix& q, const arma::rowvec& flat) {
  std::vector<std::vector<double>> cells(q.items());
  std::size_t c = 0;
  for (std::size_t j = 0; j < q.items(); ++j) {
    cells[j].resize(std::size_t{1} << q.required(j).size());
    for (auto& v : cells[j]) v = flat(c++);
  }
  return ItemParamTable(q, std::move(cells));
}

std::vector<std::vector<double>> unflatten_raw(const QMatrix& q, const arma::rowvec& flat) {
  std::vector<std::vector<double>> cells(q.items());
  std::size_t c = 0;
  for (std::size_t j = 0; j < q.items(); ++j) {
    cells[j].resize(std::size_t{1} << q.required(j).size());
    for (auto& v : cells[j]) v = flat(c++);
  }
  return cells;
}

ChainSummary summarize(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const ChainConfig& config,
                       std::vector<Accumulator>& chains) {
  ChainSummary s;
  s.kind = kind;
  s.config = config;
  s.q = q;
  s.subjects = data.subjects();

  Accumulator total = chains.front();
  for (std::size_t c = 1; c < chains.size(); ++c) {
    const Accumulator& a = chains[c];
    total.count += a.count;
    total.theta_sum += a.theta_sum;
    total.theta_sq += a.theta_sq;
    total.fallbacks += a.fallbacks;
    if (is_partial_mastery(kind)) {
      total.mu_sum += a.mu_sum;
      total.mu_sq += a.mu_sq;
      total.sigma_sum += a.sigma_sum;
      total.sigma_sq += a.sigma_sq;
      total.d_sum += a.d_sum;
    } else {
      total.prop_sum += a.prop_sum;
      total.prop_sq += a.prop_sq;
      total.profile_sum += a.profile_sum;
    }
  }
  const std::size_t n = total.count;
  const double nd = static_cast<double>(n);
  s.retained = n;
  s.dina_fallbacks = total.fallbacks;
  s.theta_mean = unflatten_theta(q, total.theta_sum / nd);
  s.theta_sd = unflatten_raw(q, sd_from(total.theta_sum, total.theta_sq, n));

  const std::size_t k = q.attributes();
  if (is_partial_mastery(kind)) {
    s.mu_mean = total.mu_sum / nd;
    s.mu_sd = sd_from(total.mu_sum.t(), total.mu_sq.t(), n).t();
    s.sigma_mean = arma::symmatu(total.sigma_sum / nd);
    s.sigma_sd = arma::reshape(sd_from(arma::vectorise(total.sigma_sum).t(), arma::vectorise(total.sigma_sq).t(), n),
                               k, k);
    s.d_hat = total.d_sum / nd;
    s.alpha_hat.set_size(s.d_hat.n_rows, k);
    for (arma::uword i = 0; i < s.d_hat.n_elem; ++i) s.alpha_hat(i) = s.d_hat(i) >= 0.5 ? 1U : 0U;
  } else {
    s.proportions_mean = total.prop_sum / nd;
    s.proportions_sd = sd_from(total.prop_sum.t(), total.prop_sq.t(), n).t();
    s.profile_probs = total.profile_sum / nd;
    s.d_hat.zeros(data.subjects(), k);
    s.alpha_hat.zeros(data.subjects(), k);
    for (std::size_t i = 0; i < data.subjects(); ++i) {
      const Profile map = static_cast<Profile>(s.profile_probs.row(i).index_max());
      for (std::size_t c = 0; c < s.profile_probs.n_cols; ++c)
        for (std::size_t a = 0; a < k; ++a)
          if ((c >> a) & 1U) s.d_hat(i, a) += s.profile_probs(i, c);
      for (std::size_t a = 0; a < k; ++a) s.alpha_hat(i, a) = (map >> a) & 1U;
    }
    s.d_hat = arma::clamp(s.d_hat, 0.0, 1.0);
  }
  for (auto& c : chains) s.draws.push_back(std::move(c.draws));
  return s;
}

}  // namespace

PriorSpec PriorSpec::defaults(std::size_t attributes) {
  PriorSpec p;
  p.mu0 = arma::zeros<arma::vec>(attributes);
  p.sigma0 = arma::eye<arma::mat>(attributes, attributes);
  p.psi0 = arma::eye<arma::mat>(attributes, attributes);
  p.nu0 = static_cast<double>(attributes) + 1.0;
  return p;
}

void PriorSpec::validate(std::size_t attributes) const {
  if (mu0.n_elem != attributes || sigma0.n_rows != attributes || sigma0.n_cols != attributes ||
      psi0.n_rows != attributes || psi0.n_cols != attributes)
    throw DimensionError("prior dimensions do not match K = " + std::to_string(attributes));
  if (!(nu0 > static_cast<double>(attributes) - 1.0))
    throw ParameterError("inverse-Wishart degrees of freedom must exceed K - 1");
  for (const BetaPrior& b : {zero_class, full_class, other_class})
    if (!(b.a > 0.0 && b.b > 0.0)) throw ParameterError("Beta prior hyperparameters must be positive");
  if (!(dirichlet > 0.0)) throw ParameterError("Dirichlet concentration must be positive");
  arma::mat tmp;
  if (!arma::chol(tmp, sigma0) || !arma::chol(tmp, psi0))
    throw ParameterError("prior covariance matrices must be positive definite");
}

BetaPrior PriorSpec::theta_prior(std::size_t reduced, std::size_t classes) const {
  if (reduced + 1 == classes) return full_class;
  if (reduced == 0) return zero_class;
  return other_class;
}

void ChainConfig::validate() const {
  if (iterations == 0) throw DataError("chain needs at least one iteration");
  if (burn_in >= iterations) throw DataError("burn-in must be smaller than the total iteration count");
  if (thin == 0) throw DataError("thinning interval must be at least 1");
  if (chains == 0) throw DataError("at least one chain is required");
}

PmState init_pm_state(const ResponseMatrix& data, const QMatrix& q, std::uint64_t seed) {
  check_data(data, q);
  Rng rng(seed);
  PmState s;
  s.subjects = data.subjects();
  s.items = q.items();
  s.attributes = q.attributes();
  s.tilde_d.set_size(s.subjects, s.attributes);
  s.d.set_size(s.subjects, s.attributes);
  for (arma::uword c = 0; c < s.tilde_d.n_elem; ++c) {
    const double d0 = 0.01 + 0.98 * rng.uniform();
    s.tilde_d(c) = probit(d0);
    s.d(c) = probit_inv(s.tilde_d(c));
  }
  s.z.resize(s.subjects * s.items * s.attributes);
  s.alpha_star.resize(s.z.size());
  for (std::size_t i = 0; i < s.subjects; ++i)
    for (std::size_t j = 0; j < s.items; ++j)
      for (std::size_t k = 0; k < s.attributes; ++k) {
        const std::size_t idx = s.index(i, j, k);
        s.z[idx] = s.tilde_d(i, k) + rng.normal();
        s.alpha_star[idx] = s.z[idx] >= 0.0 ? 1 : 0;
      }
  s.theta = ItemParamTable::constant(q, 0.5);
  s.mu = arma::zeros<arma::vec>(s.attributes);
  s.sigma = arma::eye<arma::mat>(s.attributes, s.attributes);
  return s;
}

CdmState init_cdm_state(const ResponseMatrix& data, const QMatrix& q, std::uint64_t seed) {
  check_data(data, q);
  Rng rng(seed);
  CdmState s;
  s.alpha.resize(data.subjects());
  for (auto& a : s.alpha) {
    a = 0;
    for (std::size_t k = 0; k < q.attributes(); ++k) {
      const double d0 = 0.01 + 0.98 * rng.uniform();
      if (rng.bernoulli(d0)) a |= Profile{1} << k;
    }
  }
  const std::size_t classes = std::size_t{1} << q.attributes();
  s.proportions = arma::vec(classes, arma::fill::value(1.0 / static_cast<double>(classes)));
  s.theta = ItemParamTable::constant(q, 0.5);
  return s;
}

void step_alpha_star(PmState& s, const ResponseMatrix& data, Rng& rng) {
  const ItemParamTable& theta = s.theta;
  std::array<double, 1 << 12> weights{};
  for (std::size_t i = 0; i < s.subjects; ++i) {
    for (std::size_t j = 0; j < s.items; ++j) {
      const auto req = theta.required(j);
      const auto cells = theta.item(j);
      const bool positive = data(i, j) != 0;
      const std::size_t classes = cells.size();
      if (classes > weights.size()) throw SizeError("item requires too many attributes for joint sampling");
      for (std::size_t a = 0; a < classes; ++a) {
        double w = positive ? cells[a] : 1.0 - cells[a];
        for (std::size_t r = 0; r < req.size(); ++r) {
          const double dk = s.d(i, req[r]);
          w *= ((a >> r) & 1U) ? dk : 1.0 - dk;
        }
        weights[a] = w;
      }
      const std::size_t chosen = rng.categorical(std::span<const double>(weights.data(), classes));

      std::size_t r = 0;
      for (std::size_t k = 0; k < s.attributes; ++k) {
        const std::size_t idx = s.index(i, j, k);
        const double mean = s.tilde_d(i, k);
        if (r < req.size() && req[r] == k) {
          const bool mastered = (chosen >> r) & 1U;
          s.alpha_star[idx] = mastered ? 1 : 0;
          s.z[idx] = truncated_normal(rng, mean, mastered);
          ++r;
        } else {
          // alpha* ~ Bernoulli(Phi(mean)) then z | alpha* truncated is the
          // same joint law as z ~ N(mean, 1), alpha* = I(z >= 0).
          const double zz = mean + rng.normal();
          s.z[idx] = zz;
          s.alpha_star[idx] = zz >= 0.0 ? 1 : 0;
        }
      }
    }
  }
}

void step_tilde_d(PmState& s, Rng& rng) {
  const std::size_t k = s.attributes;
  const arma::mat sigma_inv = spd_inverse(s.sigma, "Sigma in mastery update");
  arma::mat precision = sigma_inv;
  precision.diag() += static_cast<double>(s.items);
  const arma::mat cov = spd_inverse(precision, "mastery posterior precision");
  const arma::mat l = chol_lower(cov, "mastery posterior covariance");
  const arma::vec prior_term = sigma_inv * s.mu;
  arma::vec zsum(k);
  for (std::size_t i = 0; i < s.subjects; ++i) {
    zsum.zeros();
    for (std::size_t j = 0; j < s.items; ++j)
      for (std::size_t c = 0; c < k; ++c) zsum(c) += s.z[s.index(i, j, c)];
    const arma::vec draw = mvnormal_chol(rng, cov * (prior_term + zsum), l);
    if (!draw.is_finite()) throw NumericError("non-finite mastery draw for subject " + std::to_string(i));
    for (std::size_t c = 0; c < k; ++c) {
      s.tilde_d(i, c) = draw(c);
      s.d(i, c) = probit_inv(draw(c));
    }
  }
}

void step_mu(PmState& s, const PriorSpec& prior, Rng& rng) {
  const arma::mat sigma0_inv = spd_inverse(prior.sigma0, "prior covariance of mu");
  const arma::mat sigma_inv = spd_inverse(s.sigma, "Sigma in mean update");
  const arma::mat precision = sigma0_inv + static_cast<double>(s.subjects) * sigma_inv;
  const arma::mat cov = spd_inverse(precision, "mean posterior precision");
  arma::vec total = arma::zeros<arma::vec>(s.attributes);
  if (s.subjects > 0) total = arma::sum(s.tilde_d, 0).t();
  const arma::vec mean = cov * (sigma0_inv * prior.mu0 + sigma_inv * total);
  s.mu = mvnormal_chol(rng, mean, chol_lower(cov, "mean posterior covariance"));
}

void step_sigma(PmState& s, const PriorSpec& prior, Rng& rng) {
  arma::mat scale = prior.psi0;
  for (std::size_t i = 0; i < s.subjects; ++i) {
    const arma::vec diff = s.tilde_d.row(i).t() - s.mu;
    scale += diff * diff.t();
  }
  s.sigma = inverse_wishart(rng, scale, prior.nu0 + static_cast<double>(s.subjects));
}

void step_theta(PmState& s, const ResponseMatrix& data, const PriorSpec& prior, ModelKind kind, Rng& rng) {
  ClassCounts counts = empty_counts(s.theta);
  for (std::size_t i = 0; i < s.subjects; ++i) {
    for (std::size_t j = 0; j < s.items; ++j) {
      const auto req = s.theta.required(j);
      std::size_t reduced = 0;
      for (std::size_t r = 0; r < req.size(); ++r)
        if (s.alpha_star[s.index(i, j, req[r])]) reduced |= std::size_t{1} << r;
      counts[j][reduced][data(i, j)] += 1.0;
    }
  }
  s.dina_fallbacks += update_theta(s.theta, counts, prior, is_dina_family(kind), rng);
}

void step_profiles(CdmState& s, const ResponseMatrix& data, Rng& rng, arma::mat* posterior) {
  const ItemParamTable& theta = s.theta;
  const std::size_t classes = s.proportions.n_elem;
  const std::size_t items = theta.items();
  // Per item and profile: log theta / log(1 - theta).
  arma::mat log_pos(items, classes), log_neg(items, classes);
  for (std::size_t j = 0; j < items; ++j)
    for (std::size_t c = 0; c < classes; ++c) {
      const double t = theta_lookup(theta, j, static_cast<Profile>(c));
      log_pos(j, c) = std::log(t);
      log_neg(j, c) = std::log1p(-t);
    }
  const arma::vec log_p = arma::log(s.proportions);
  std::vector<double> logw(classes), w(classes);
  if (posterior) posterior->set_size(data.subjects(), classes);
  for (std::size_t i = 0; i < data.subjects(); ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      double l = log_p(c);
      for (std::size_t j = 0; j < items; ++j) l += data(i, j) ? log_pos(j, c) : log_neg(j, c);
      logw[c] = l;
    }
    const double m = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (std::size_t c = 0; c < classes; ++c) total += (w[c] = std::exp(logw[c] - m));
    s.alpha[i] = static_cast<Profile>(rng.categorical(w));
    if (posterior)
      for (std::size_t c = 0; c < classes; ++c) (*posterior)(i, c) = w[c] / total;
  }
}

void step_proportions(CdmState& s, const PriorSpec& prior, Rng& rng) {
  const std::size_t classes = s.proportions.n_elem;
  arma::vec counts(classes, arma::fill::zeros);
  for (Profile a : s.alpha) counts(a) += 1.0;
  arma::vec g(classes);
  for (std::size_t c = 0; c < classes; ++c) g(c) = std::max(rng.gamma(prior.dirichlet + counts(c)), 1e-300);
  s.proportions = g / arma::accu(g);
}

void step_theta(CdmState& s, const ResponseMatrix& data, const PriorSpec& prior, ModelKind kind, Rng& rng) {
  ClassCounts counts = empty_counts(s.theta);
  for (std::size_t i = 0; i < data.subjects(); ++i)
    for (std::size_t j = 0; j < s.theta.items(); ++j)
      counts[j][reduce_profile(s.theta.required(j), s.alpha[i])][data(i, j)] += 1.0;
  s.dina_fallbacks += update_theta(s.theta, counts, prior, is_dina_family(kind), rng);
}

ChainSummary fit_pmcdm(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                       const ChainConfig& config) {
  if (!is_partial_mastery(kind)) throw DataError("fit_pmcdm needs PM-DINA or PM-GDINA");
  config.validate();
  prior.validate(q.attributes());
  check_data(data, q);
  auto chains = run_chains(config, [&](std::size_t c) { return run_pm_chain(data, q, kind, prior, config, c); });
  return summarize(data, q, kind, config, chains);
}

ChainSummary fit_cdm_bayes(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                           const ChainConfig& config) {
  if (is_partial_mastery(kind)) throw DataError("fit_cdm_bayes needs DINA or GDINA");
  config.validate();
  prior.validate(q.attributes());
  check_data(data, q);
  auto chains = run_chains(config, [&](std::size_t c) { return run_cdm_chain(data, q, kind, prior, config, c); });
  return summarize(data, q, kind, config, chains);
}

ChainSummary fit_model(const ResponseMatrix& data, const QMatrix& q, ModelKind kind, const PriorSpec& prior,
                       const ChainConfig& config) {
  return is_partial_mastery(kind) ? fit_pmcdm(data, q, kind, prior, config)
                                  : fit_cdm_bayes(data, q, kind, prior, config);
}

std::vector<std::string> theta_parameter_names(const QMatrix& q) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < q.items(); ++j) {
    const std::size_t m = q.required(j).size();
    for (std::size_t a = 0; a < (std::size_t{1} << m); ++a) {
      std::string bits;
      for (std::size_t r = 0; r < m; ++r) bits.push_back(((a >> r) & 1U) ? '1' : '0');
      names.push_back("theta[" + std::to_string(j + 1) + "," + bits + "]");
    }
  }
  return names;
}

std::vector<std::string> mu_parameter_names(std::size_t attributes) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < attributes; ++k) names.push_back("mu[" + std::to_string(k + 1) + "]");
  return names;
}

std::vector<std::string> sigma_parameter_names(std::size_t attributes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < attributes; ++c)
    for (std::size_t r = 0; r < attributes; ++r)
      names.push_back("sigma[" + std::to_string(r + 1) + "," + std::to_string(c + 1) + "]");
  return names;
}

std::vector<std::string> proportion_parameter_names(std::size_t attributes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < (std::size_t{1} << attributes); ++c) {
    std::string bits;
    for (std::size_t k = 0; k < attributes; ++k) bits.push_back(((c >> k) & 1U) ? '1' : '0');
    names.push_back("p[" + bits + "]");
  }
  return names;
}

}  // namespace pmcdm
