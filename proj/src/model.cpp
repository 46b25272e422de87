#include "pmcdm/model.hpp"

#include "pmcdm/errors.hpp"
#include "pmcdm/normal.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

namespace pmcdm {

namespace {

std::string normalized_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

double bernoulli_loglik(double theta, unsigned response) {
  return response ? std::log(theta) : std::log1p(-theta);
}

void check_table_responses(const arma::uvec& responses, const ItemParamTable& table) {
  if (responses.n_elem != table.items())
    throw DimensionError("response vector has " + std::to_string(responses.n_elem) + " entries, table has " +
                         std::to_string(table.items()) + " items");
}

void check_scores(const arma::vec& d, std::size_t attributes) {
  if (d.n_elem != attributes)
    throw DimensionError("mastery vector has " + std::to_string(d.n_elem) + " entries, expected " +
                         std::to_string(attributes));
}

// Composite Simpson weights on n (odd) equally spaced nodes over [-half, half].
void simpson_nodes(std::size_t n, double half, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 3) n = 3;
  if (n % 2 == 0) ++n;
  const double h = 2.0 * half / static_cast<double>(n - 1);
  nodes.resize(n);
  weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = -half + h * static_cast<double>(i);
    const double c = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    weights[i] = c * h / 3.0 * normal_pdf(nodes[i]);
  }
}

// S x K matrix of mastery draws d = Phi(mu + L eps).
arma::mat copula_draws(const CopulaParams& copula, std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t k = copula.attributes();
  arma::mat out(draws, k);
  arma::vec eps(k);
  for (std::size_t s = 0; s < draws; ++s) {
    for (auto& e : eps) e = rng.normal();
    const arma::vec tilde = copula.mu() + copula.chol() * eps;
    for (std::size_t c = 0; c < k; ++c) out(s, c) = probit_inv(tilde(c));
  }
  return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Dina: return "DINA";
    case ModelKind::Gdina: return "GDINA";
    case ModelKind::PmDina: return "PM-DINA";
    case ModelKind::PmGdina: return "PM-GDINA";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  const std::string n = normalized_name(name);
  if (n == "DINA") return ModelKind::Dina;
  if (n == "GDINA") return ModelKind::Gdina;
  if (n == "PMDINA") return ModelKind::PmDina;
  if (n == "PMGDINA") return ModelKind::PmGdina;
  throw DataError("unknown model kind '" + std::string(name) + "' (expected DINA, GDINA, PM-DINA or PM-GDINA)");
}

Profile profile_from_bits(const arma::uvec& bits) {
  if (bits.n_elem > kMaxAttributes) throw DimensionError("profile longer than " + std::to_string(kMaxAttributes));
  Profile alpha = 0;
  for (arma::uword k = 0; k < bits.n_elem; ++k) {
    if (bits(k) > 1) throw DataError("profile entry " + std::to_string(k) + " is not binary");
    if (bits(k)) alpha |= Profile{1} << k;
  }
  return alpha;
}

arma::uvec profile_bits(Profile alpha, std::size_t attributes) {
  arma::uvec bits(attributes);
  for (std::size_t k = 0; k < attributes; ++k) bits(k) = (alpha >> k) & 1U;
  return bits;
}

QMatrix::QMatrix(arma::umat entries) : entries_(std::move(entries)) {
  if (entries_.n_rows == 0 || entries_.n_cols == 0) throw DataError("Q-matrix is empty");
  if (entries_.n_cols > kMaxAttributes)
    throw DimensionError("Q-matrix has " + std::to_string(entries_.n_cols) + " attributes; at most " +
                         std::to_string(kMaxAttributes) + " are supported");
  required_.resize(entries_.n_rows);
  masks_.resize(entries_.n_rows, 0);
  for (arma::uword j = 0; j < entries_.n_rows; ++j) {
    for (arma::uword k = 0; k < entries_.n_cols; ++k) {
      const auto v = entries_(j, k);
      if (v > 1)
        throw DataError("Q-matrix row " + std::to_string(j + 1) + ", column " + std::to_string(k + 1) +
                        ": value " + std::to_string(v) + " is not binary");
      if (v) {
        required_[j].push_back(k);
        masks_[j] |= Profile{1} << k;
      }
    }
    if (required_[j].empty())
      throw DataError("Q-matrix row " + std::to_string(j + 1) + " requires no attribute");
  }
}

bool QMatrix::operator==(const QMatrix& other) const {
  return entries_.n_rows == other.entries_.n_rows && entries_.n_cols == other.entries_.n_cols &&
         arma::all(arma::vectorise(entries_ == other.entries_));
}

std::size_t reduce_profile(std::span<const std::size_t> required, Profile alpha) {
  std::size_t reduced = 0;
  for (std::size_t r = 0; r < required.size(); ++r)
    if ((alpha >> required[r]) & 1U) reduced |= std::size_t{1} << r;
  return reduced;
}

ItemParamTable::ItemParamTable(const QMatrix& q, std::vector<std::vector<double>> cells)
    : attributes_(q.attributes()), cells_(std::move(cells)) {
  if (cells_.size() != q.items())
    throw DimensionError("item table has " + std::to_string(cells_.size()) + " items, Q-matrix has " +
                         std::to_string(q.items()));
  required_.reserve(q.items());
  for (std::size_t j = 0; j < q.items(); ++j) {
    const auto req = q.required(j);
    required_.emplace_back(req.begin(), req.end());
    const std::size_t expected = std::size_t{1} << req.size();
    if (cells_[j].size() != expected)
      throw DimensionError("item " + std::to_string(j + 1) + " has " + std::to_string(cells_[j].size()) +
                           " cells, expected " + std::to_string(expected));
    for (std::size_t a = 0; a < expected; ++a) {
      const double v = cells_[j][a];
      if (!(v > 0.0 && v < 1.0))
        throw ParameterError("item " + std::to_string(j + 1) + ", class " + std::to_string(a) +
                             ": probability " + std::to_string(v) + " is outside (0,1)");
    }
  }
}

ItemParamTable ItemParamTable::constant(const QMatrix& q, double value) {
  std::vector<std::vector<double>> cells(q.items());
  for (std::size_t j = 0; j < q.items(); ++j) cells[j].assign(std::size_t{1} << q.required(j).size(), value);
  return ItemParamTable(q, std::move(cells));
}

std::size_t ItemParamTable::cell_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : cells_) n += c.size();
  return n;
}

void ItemParamTable::set_cell(std::size_t j, std::size_t reduced, double value) {
  if (!(value > 0.0 && value < 1.0))
    throw ParameterError("item " + std::to_string(j + 1) + ", class " + std::to_string(reduced) +
                         ": probability " + std::to_string(value) + " is outside (0,1)");
  cells_.at(j).at(reduced) = value;
}

void DinaItemParams::validate() const {
  if (guess.n_elem != slip.n_elem) throw DimensionError("guess and slip vectors differ in length");
  for (arma::uword j = 0; j < guess.n_elem; ++j) {
    if (!(guess(j) > 0.0 && guess(j) < 1.0) || !(slip(j) > 0.0 && slip(j) < 1.0))
      throw ParameterError("item " + std::to_string(j + 1) + ": guess/slip outside (0,1)");
    if (!(1.0 - slip(j) > guess(j)))
      throw ParameterError("item " + std::to_string(j + 1) + ": requires 1 - slip > guess");
  }
}

ItemParamTable dina_table(const QMatrix& q, const DinaItemParams& params) {
  params.validate();
  if (params.guess.n_elem != q.items()) throw DimensionError("DINA parameters do not match Q-matrix items");
  std::vector<std::vector<double>> cells(q.items());
  for (std::size_t j = 0; j < q.items(); ++j) {
    const std::size_t n = std::size_t{1} << q.required(j).size();
    cells[j].assign(n, params.guess(j));
    cells[j][n - 1] = 1.0 - params.slip(j);
  }
  return ItemParamTable(q, std::move(cells));
}

ResponseMatrix::ResponseMatrix(arma::umat entries) : entries_(std::move(entries)) {
  for (arma::uword i = 0; i < entries_.n_rows; ++i)
    for (arma::uword j = 0; j < entries_.n_cols; ++j)
      if (entries_(i, j) > 1)
        throw DataError("response row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                        " is not binary");
}

bool ResponseMatrix::operator==(const ResponseMatrix& other) const {
  return entries_.n_rows == other.entries_.n_rows && entries_.n_cols == other.entries_.n_cols &&
         arma::all(arma::vectorise(entries_ == other.entries_));
}

CopulaParams::CopulaParams(arma::vec mu, arma::mat sigma) : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (sigma_.n_rows != mu_.n_elem || sigma_.n_cols != mu_.n_elem)
    throw DimensionError("copula covariance must be K x K with K = " + std::to_string(mu_.n_elem));
  if (!sigma_.is_symmetric(1e-10)) throw ParameterError("copula covariance is not symmetric");
  if (!arma::chol(chol_, sigma_, "lower")) throw ParameterError("copula covariance is not positive definite");
}

arma::mat exchangeable_covariance(std::size_t attributes, double rho, double variance) {
  arma::mat s(attributes, attributes);
  s.fill(variance * rho);
  s.diag().fill(variance);
  return s;
}

void validate_class_proportions(const arma::vec& p, std::size_t attributes) {
  const std::size_t expected = std::size_t{1} << attributes;
  if (p.n_elem != expected)
    throw DimensionError("class proportions have " + std::to_string(p.n_elem) + " entries, expected " +
                         std::to_string(expected));
  for (double v : p)
    if (!(v > 0.0 && v < 1.0)) throw ParameterError("class proportion outside (0,1)");
  if (std::abs(arma::accu(p) - 1.0) > 1e-10) throw ParameterError("class proportions do not sum to 1");
}

void validate_mastery(const arma::vec& d) {
  for (double v : d)
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("mastery score outside [0,1]");
}

bool ideal_response_dina(const arma::uvec& alpha, const arma::uvec& q_row) {
  if (alpha.n_elem != q_row.n_elem)
    throw DimensionError("profile length " + std::to_string(alpha.n_elem) + " differs from q-vector length " +
                         std::to_string(q_row.n_elem));
  for (arma::uword k = 0; k < alpha.n_elem; ++k)
    if (alpha(k) < q_row(k)) return false;
  return true;
}

double theta_dina(double guess, double slip, bool xi) { return xi ? 1.0 - slip : guess; }

double theta_lookup(const ItemParamTable& table, std::size_t j, Profile alpha) {
  if (j >= table.items())
    throw DimensionError("item index " + std::to_string(j) + " out of range (" + std::to_string(table.items()) +
                         " items)");
  return table.cell(j, reduce_profile(table.required(j), alpha));
}

std::vector<double> gdina_effects_to_table(std::span<const double> effects, const arma::uvec& q_row) {
  const std::size_t m = static_cast<std::size_t>(arma::accu(q_row));
  const std::size_t n = std::size_t{1} << m;
  if (effects.size() != n)
    throw DimensionError("expected " + std::to_string(n) + " effects for an item requiring " + std::to_string(m) +
                         " attributes, got " + std::to_string(effects.size()));
  std::vector<double> table(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    // Sum over all subsets t of a.
    for (std::size_t t = a;; t = (t - 1) & a) {
      table[a] += effects[t];
      if (t == 0) break;
    }
    if (!(table[a] > 0.0 && table[a] < 1.0))
      throw ParameterError("effects give probability " + std::to_string(table[a]) + " at reduced class " +
                           std::to_string(a));
  }
  return table;
}

std::vector<double> gdina_table_to_effects(std::span<const double> table) {
  const std::size_t n = table.size();
  if (n == 0 || !std::has_single_bit(n)) throw DimensionError("reduced table size must be a power of two");
  std::vector<double> effects(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const int size_t_bits = std::popcount(t);
    for (std::size_t u = t;; u = (u - 1) & t) {
      const int sign = ((size_t_bits - std::popcount(u)) % 2 == 0) ? 1 : -1;
      effects[t] += sign * table[u];
      if (u == 0) break;
    }
  }
  return effects;
}

double mixture_weight(const arma::vec& d, Profile alpha) {
  double w = 1.0;
  for (arma::uword k = 0; k < d.n_elem; ++k) w *= ((alpha >> k) & 1U) ? d(k) : 1.0 - d(k);
  return w;
}

double mixture_weight(const arma::vec& d, const arma::uvec& alpha) {
  if (d.n_elem != alpha.n_elem) throw DimensionError("mastery vector and profile differ in length");
  return mixture_weight(d, profile_from_bits(alpha));
}

double marginal_item_prob(const arma::vec& d, std::size_t j, const ItemParamTable& table) {
  check_scores(d, table.attributes());
  const auto req = table.required(j);
  const auto cells = table.item(j);
  double total = 0.0;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    double w = 1.0;
    for (std::size_t r = 0; r < req.size(); ++r) w *= ((a >> r) & 1U) ? d(req[r]) : 1.0 - d(req[r]);
    total += w * cells[a];
  }
  return total;
}

double integrate_copula(const CopulaParams& copula, const QuadratureSpec& spec,
                        const std::function<double(const arma::vec&)>& f) {
  const std::size_t k = copula.attributes();
  if (spec.method == QuadratureSpec::Method::MonteCarlo) {
    if (spec.draws == 0) throw ParameterError("Monte Carlo integration needs at least one draw");
    const arma::mat d = copula_draws(copula, spec.draws, spec.seed);
    double total = 0.0;
    arma::vec row(k);
    for (std::size_t s = 0; s < spec.draws; ++s) {
      for (std::size_t c = 0; c < k; ++c) row(c) = d(s, c);
      total += f(row);
    }
    return total / static_cast<double>(spec.draws);
  }

  if (k > 2) throw SizeError("grid quadrature supports at most 2 attributes, got " + std::to_string(k));
  std::vector<double> nodes, weights;
  simpson_nodes(spec.grid_points, 8.0, nodes, weights);
  arma::vec z(k), d(k);
  double total = 0.0;
  if (k == 1) {
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      z(0) = nodes[a];
      d(0) = probit_inv(copula.mu()(0) + copula.chol()(0, 0) * z(0));
      total += weights[a] * f(d);
    }
    return total;
  }
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      z(0) = nodes[a];
      z(1) = nodes[b];
      const arma::vec tilde = copula.mu() + copula.chol() * z;
      d(0) = probit_inv(tilde(0));
      d(1) = probit_inv(tilde(1));
      total += weights[a] * weights[b] * f(d);
    }
  }
  return total;
}

double rlcm_class_weight_at(std::span<const Profile> working, const arma::vec& d) {
  double w = 1.0;
  for (Profile alpha : working) w *= mixture_weight(d, alpha);
  return w;
}

double rlcm_class_weight(std::span<const Profile> working, const CopulaParams& copula, const QuadratureSpec& spec) {
  const std::size_t bits = working.size() * copula.attributes();
  if (bits > spec.max_class_bits)
    throw SizeError("latent-class space 2^" + std::to_string(bits) + " exceeds the cap 2^" +
                    std::to_string(spec.max_class_bits));
  // Counts of mastered working attributes per k: d_k^n_k (1 - d_k)^(J - n_k).
  const std::size_t k = copula.attributes();
  const double items = static_cast<double>(working.size());
  std::vector<double> counts(k, 0.0);
  for (Profile alpha : working)
    for (std::size_t c = 0; c < k; ++c) counts[c] += static_cast<double>((alpha >> c) & 1U);
  return integrate_copula(copula, spec, [&](const arma::vec& d) {
    double w = 1.0;
    for (std::size_t c = 0; c < k; ++c) w *= std::pow(d(c), counts[c]) * std::pow(1.0 - d(c), items - counts[c]);
    return w;
  });
}

double rlcm_response_prob(const arma::uvec& responses, const ItemParamTable& table, const CopulaParams& copula,
                          const QuadratureSpec& spec) {
  check_table_responses(responses, table);
  const std::size_t k = copula.attributes();
  const std::size_t items = table.items();
  const std::size_t bits = k * items;
  if (bits > spec.max_class_bits)
    throw SizeError("latent-class space 2^" + std::to_string(bits) + " exceeds the cap 2^" +
                    std::to_string(spec.max_class_bits));
  const std::uint64_t classes = std::uint64_t{1} << bits;
  const Profile profile_mask = static_cast<Profile>((std::uint64_t{1} << k) - 1);
  std::vector<Profile> working(items);
  double total = 0.0;
  for (std::uint64_t code = 0; code < classes; ++code) {
    double conditional = 1.0;
    for (std::size_t j = 0; j < items; ++j) {
      working[j] = static_cast<Profile>(code >> (j * k)) & profile_mask;
      const double theta = theta_lookup(table, j, working[j]);
      conditional *= responses(j) ? theta : 1.0 - theta;
    }
    total += rlcm_class_weight(working, copula, spec) * conditional;
  }
  return total;
}

double pmcdm_subject_loglik_at(const arma::uvec& responses, const ItemParamTable& table, const arma::vec& d) {
  check_table_responses(responses, table);
  double ll = 0.0;
  for (std::size_t j = 0; j < table.items(); ++j) {
    const double theta = marginal_item_prob(d, j, table);
    ll += responses(j) ? std::log(theta) : std::log1p(-theta);
  }
  return ll;
}

double pmcdm_subject_prob(const arma::uvec& responses, const ItemParamTable& table, const CopulaParams& copula,
                          const QuadratureSpec& spec) {
  check_table_responses(responses, table);
  return integrate_copula(copula, spec,
                          [&](const arma::vec& d) { return std::exp(pmcdm_subject_loglik_at(responses, table, d)); });
}

arma::vec pmcdm_loglik(const ResponseMatrix& responses, const ItemParamTable& table, const CopulaParams& copula,
                       std::size_t mc_draws, std::uint64_t seed) {
  if (mc_draws == 0) throw ParameterError("mc_draws must be at least 1");
  if (responses.items() != table.items()) throw DimensionError("responses and item table differ in item count");
  if (copula.attributes() != table.attributes()) throw DimensionError("copula and item table differ in K");
  const arma::mat d = copula_draws(copula, mc_draws, seed);
  const std::size_t items = table.items();
  arma::mat log_pos(mc_draws, items), log_neg(mc_draws, items);
  arma::vec row(copula.attributes());
  for (std::size_t s = 0; s < mc_draws; ++s) {
    row = d.row(s).t();
    for (std::size_t j = 0; j < items; ++j) {
      const double theta = marginal_item_prob(row, j, table);
      log_pos(s, j) = std::log(theta);
      log_neg(s, j) = std::log1p(-theta);
    }
  }
  arma::vec out(responses.subjects());
  std::vector<double> terms(mc_draws);
  const double log_s = std::log(static_cast<double>(mc_draws));
  for (std::size_t i = 0; i < responses.subjects(); ++i) {
    for (std::size_t s = 0; s < mc_draws; ++s) {
      double ll = 0.0;
      for (std::size_t j = 0; j < items; ++j) ll += responses(i, j) ? log_pos(s, j) : log_neg(s, j);
      terms[s] = ll;
    }
    out(i) = log_sum_exp(terms) - log_s;
  }
  return out;
}

double pmcdm_subject_loglik(const arma::uvec& responses, const ItemParamTable& table, const CopulaParams& copula,
                            std::size_t mc_draws, std::uint64_t seed) {
  check_table_responses(responses, table);
  arma::umat one(1, responses.n_elem);
  one.row(0) = responses.t();
  return pmcdm_loglik(ResponseMatrix(std::move(one)), table, copula, mc_draws, seed)(0);
}

double cdm_conditional_loglik(const arma::uvec& responses, const ItemParamTable& table, Profile alpha) {
  check_table_responses(responses, table);
  double ll = 0.0;
  for (std::size_t j = 0; j < table.items(); ++j)
    ll += bernoulli_loglik(theta_lookup(table, j, alpha), static_cast<unsigned>(responses(j)));
  return ll;
}

double cdm_subject_loglik(const arma::uvec& responses, const ItemParamTable& table, const arma::vec& p) {
  validate_class_proportions(p, table.attributes());
  std::vector<double> terms(p.n_elem);
  for (std::size_t c = 0; c < p.n_elem; ++c)
    terms[c] = std::log(p(c)) + cdm_conditional_loglik(responses, table, static_cast<Profile>(c));
  return log_sum_exp(terms);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

std::vector<MonotonicityViolation> monotonicity_check(const ItemParamTable& table) {
  std::vector<MonotonicityViolation> out;
  for (std::size_t j = 0; j < table.items(); ++j) {
    const auto cells = table.item(j);
    for (std::size_t a = 1; a < cells.size(); ++a) {
      // Strict subsets b of a.
      for (std::size_t b = (a - 1) & a;; b = (b - 1) & a) {
        if (cells[a] < cells[b]) out.push_back({j, a, b, cells[a], cells[b]});
        if (b == 0) break;
      }
    }
  }
  return out;
}

}  // namespace pmcdm
