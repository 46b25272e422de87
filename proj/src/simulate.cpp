#include "pmcdm/simulate.hpp"

#include "pmcdm/errors.hpp"
#include "pmcdm/normal.hpp"
#include "pmcdm/random.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace pmcdm {

namespace {

// Stream purposes for derive_seed.
constexpr std::uint64_t kScoresStream = 1;
constexpr std::uint64_t kResponsesStream = 2;

const arma::umat& q3_complete() {
  static const arma::umat q = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0},
                               {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 0}, {1, 0, 1},
                               {0, 1, 1}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  return q;
}

const arma::umat& q3_incomplete() {
  static const arma::umat q = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {0, 1, 1},
                               {1, 0, 1}, {1, 1, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 0}, {1, 0, 1},
                               {0, 1, 1}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  return q;
}

const arma::umat& q5_complete() {
  static const arma::umat q = {
      {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1},
      {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1},
      {1, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 1, 1}, {1, 0, 0, 0, 1},
      {1, 1, 1, 0, 0}, {0, 1, 1, 1, 0}, {0, 0, 1, 1, 1}, {1, 0, 0, 1, 1}, {1, 1, 0, 0, 1}};
  return q;
}

const arma::umat& q5_incomplete() {
  static const arma::umat q = {
      {1, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 1, 1}, {1, 0, 0, 0, 1},
      {1, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 1, 1}, {1, 0, 0, 0, 1},
      {1, 1, 1, 0, 0}, {0, 1, 1, 1, 0}, {0, 0, 1, 1, 1}, {1, 0, 0, 1, 1}, {1, 1, 0, 0, 1},
      {1, 1, 1, 0, 0}, {0, 1, 1, 1, 0}, {0, 0, 1, 1, 1}, {1, 0, 0, 1, 1}, {1, 1, 0, 0, 1}};
  return q;
}

}  // namespace

std::string_view to_string(QVariant v) { return v == QVariant::Complete ? "complete" : "incomplete"; }
std::string_view to_string(MuVariant v) { return v == MuVariant::Zero ? "zero" : "nonconstant"; }

QVariant parse_q_variant(std::string_view name) {
  if (name == "complete") return QVariant::Complete;
  if (name == "incomplete") return QVariant::Incomplete;
  throw DataError("unknown Q variant '" + std::string(name) + "' (expected complete or incomplete)");
}

MuVariant parse_mu_variant(std::string_view name) {
  if (name == "zero" || name == "constant") return MuVariant::Zero;
  if (name == "nonconstant") return MuVariant::Nonconstant;
  throw DataError("unknown mean variant '" + std::string(name) + "' (expected zero or nonconstant)");
}

void SimulationCondition::validate() const {
  if (attributes != 3 && attributes != 5)
    throw DataError("built-in designs exist for K = 3 or K = 5, got " + std::to_string(attributes));
  if (!(rho >= 0.0 && rho < 1.0)) throw ParameterError("rho must be in [0,1)");
  if (subjects == 0) throw DataError("simulation needs at least one subject");
}

arma::vec SimulationCondition::mu() const {
  if (mu_variant == MuVariant::Zero) return arma::zeros<arma::vec>(attributes);
  // Evenly spaced from -1 to 1: (-1,0,1) for K = 3, (-1,-0.5,0,0.5,1) for K = 5.
  return arma::linspace<arma::vec>(-1.0, 1.0, attributes);
}

CopulaParams SimulationCondition::copula() const {
  return CopulaParams(mu(), exchangeable_covariance(attributes, rho));
}

std::string SimulationCondition::label() const {
  std::ostringstream os;
  os << to_string(kind) << " K=" << attributes << " Q=" << to_string(q_variant) << " mu=" << to_string(mu_variant)
     << " rho=" << rho << " N=" << subjects;
  return os.str();
}

std::uint64_t SimulationCondition::key() const {
  const auto rho_milli = static_cast<std::uint64_t>(std::llround(rho * 1000.0));
  return derive_seed(0x5eed, {static_cast<std::uint64_t>(kind), attributes, static_cast<std::uint64_t>(q_variant),
                              static_cast<std::uint64_t>(mu_variant), rho_milli, subjects});
}

QMatrix builtin_q(std::size_t attributes, QVariant variant) {
  if (attributes == 3) return QMatrix(variant == QVariant::Complete ? q3_complete() : q3_incomplete());
  if (attributes == 5) return QMatrix(variant == QVariant::Complete ? q5_complete() : q5_incomplete());
  throw DataError("no built-in Q-matrix for K = " + std::to_string(attributes));
}

arma::mat draw_mastery_scores(const CopulaParams& copula, std::size_t subjects, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t k = copula.attributes();
  arma::mat d(subjects, k);
  for (std::size_t i = 0; i < subjects; ++i) {
    const arma::vec tilde = mvnormal_chol(rng, copula.mu(), copula.chol());
    for (std::size_t c = 0; c < k; ++c) d(i, c) = probit_inv(tilde(c));
  }
  return d;
}

arma::umat binarize(const arma::mat& d) {
  arma::umat alpha(d.n_rows, d.n_cols);
  for (arma::uword i = 0; i < d.n_elem; ++i) alpha(i) = d(i) >= 0.5 ? 1U : 0U;
  return alpha;
}

ResponseMatrix generate_responses_pmcdm(const arma::mat& d, const ItemParamTable& table, std::uint64_t seed) {
  if (d.n_cols != table.attributes()) throw DimensionError("mastery scores and item table differ in K");
  Rng rng(seed);
  arma::umat r(d.n_rows, table.items());
  for (arma::uword i = 0; i < d.n_rows; ++i) {
    for (std::size_t j = 0; j < table.items(); ++j) {
      // Attributes outside S_j do not affect theta; only S_j is drawn.
      const auto req = table.required(j);
      std::size_t reduced = 0;
      for (std::size_t q = 0; q < req.size(); ++q)
        if (rng.bernoulli(d(i, req[q]))) reduced |= std::size_t{1} << q;
      r(i, j) = rng.bernoulli(table.cell(j, reduced)) ? 1U : 0U;
    }
  }
  return ResponseMatrix(std::move(r));
}

ResponseMatrix generate_responses_cdm(const arma::umat& alpha, const ItemParamTable& table, std::uint64_t seed) {
  if (alpha.n_cols != table.attributes()) throw DimensionError("profiles and item table differ in K");
  Rng rng(seed);
  arma::umat r(alpha.n_rows, table.items());
  for (arma::uword i = 0; i < alpha.n_rows; ++i) {
    const Profile profile = profile_from_bits(alpha.row(i).t());
    for (std::size_t j = 0; j < table.items(); ++j)
      r(i, j) = rng.bernoulli(theta_lookup(table, j, profile)) ? 1U : 0U;
  }
  return ResponseMatrix(std::move(r));
}

ItemParamTable simulation_item_table(ModelKind kind, const QMatrix& q) {
  if (is_dina_family(kind)) {
    DinaItemParams p{arma::vec(q.items(), arma::fill::value(0.2)), arma::vec(q.items(), arma::fill::value(0.2))};
    return dina_table(q, p);
  }
  std::vector<std::vector<double>> cells(q.items());
  for (std::size_t j = 0; j < q.items(); ++j) {
    const std::size_t m = q.required(j).size();
    if (m > 3)
      throw DataError("item " + std::to_string(j + 1) + " requires " + std::to_string(m) +
                      " attributes; the GDINA simulation design covers at most 3");
    const std::size_t n = std::size_t{1} << m;
    cells[j].resize(n);
    for (std::size_t a = 0; a < n; ++a)
      cells[j][a] = 0.2 + 0.6 * static_cast<double>(std::popcount(a)) / static_cast<double>(m);
  }
  return ItemParamTable(q, std::move(cells));
}

GeneratedDataset generate_dataset(const SimulationCondition& condition, std::size_t replication) {
  condition.validate();
  const std::uint64_t cell = derive_seed(condition.seed, {condition.key(), replication});
  GeneratedDataset out;
  out.q = builtin_q(condition.attributes, condition.q_variant);
  out.true_theta = simulation_item_table(condition.kind, out.q);
  out.condition = condition;
  out.replication = replication;

  const arma::mat d = draw_mastery_scores(condition.copula(), condition.subjects, derive_seed(cell, {kScoresStream}));
  const std::uint64_t response_seed = derive_seed(cell, {kResponsesStream});
  if (is_partial_mastery(condition.kind)) {
    out.true_d = d;
    out.true_alpha = binarize(d);
    out.responses = generate_responses_pmcdm(d, out.true_theta, response_seed);
  } else {
    out.true_alpha = binarize(d);
    out.true_d = arma::conv_to<arma::mat>::from(out.true_alpha);
    out.responses = generate_responses_cdm(out.true_alpha, out.true_theta, response_seed);
  }
  return out;
}

}  // namespace pmcdm
