#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmcdm/errors.hpp"
#include "pmcdm/model.hpp"
#include "pmcdm/normal.hpp"
#include "pmcdm/random.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace pmcdm;

namespace {

QMatrix two_attribute_item() { return QMatrix(arma::umat{{1, 1}}); }

ItemParamTable random_table(const QMatrix& q, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<std::vector<double>> cells(q.items());
  for (std::size_t j = 0; j < q.items(); ++j) {
    cells[j].resize(std::size_t{1} << q.required(j).size());
    for (auto& c : cells[j]) c = u(gen);
  }
  return ItemParamTable(q, cells);
}

}  // namespace

TEST_CASE("normal quantile and cdf") {
  CHECK(probit(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(probit_inv(0.0) == 0.5);
  // 97.5% quantile of the standard normal to 15 digits.
  CHECK(probit(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(std::isfinite(probit(0.0)));
  CHECK(std::isfinite(probit(1.0)));
  CHECK(probit(0.0) == probit(kProbitClampLow));
}

TEST_CASE("probit round trip on the clamped domain") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double p : {1e-12, 1e-9, 1e-6, 1e-3, 0.25, 0.5, 0.75, 1 - 1e-3, 1 - 1e-6, 1 - 1e-12})
    CHECK(probit_inv(probit(p)) == doctest::Approx(p).epsilon(1e-9).scale(0));
  for (int i = 0; i < 10000; ++i) {
    const double p = u(gen);
    CHECK(std::abs(probit_inv(probit(p)) - p) <= 1e-9);
  }
}

TEST_CASE("QMatrix validation names the offending cell") {
  CHECK_THROWS_AS(QMatrix(arma::umat{{1, 2}}), DataError);
  try {
    QMatrix(arma::umat{{1, 0}, {0, 2}});
    FAIL("expected throw");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_AS(QMatrix(arma::umat{{1, 0}, {0, 0}}), DataError);
  CHECK_THROWS(QMatrix(arma::umat{}));
  const QMatrix q(arma::umat{{1, 0, 1}, {0, 1, 0}});
  CHECK(q.items() == 2);
  CHECK(q.attributes() == 3);
  CHECK(q.required(0).size() == 2);
  CHECK(q.required(0)[1] == 2);
  CHECK(q.requirement_mask(0) == 0b101);
}

TEST_CASE("ideal response") {
  CHECK(ideal_response_dina(arma::uvec{1, 1, 1}, arma::uvec{1, 0, 1}));
  CHECK_FALSE(ideal_response_dina(arma::uvec{0, 1, 1}, arma::uvec{1, 0, 1}));
  CHECK(ideal_response_dina(arma::uvec{0, 1, 0}, arma::uvec{0, 1, 0}));
  CHECK_THROWS_AS(ideal_response_dina(arma::uvec{0, 1}, arma::uvec{0, 1, 0}), DimensionError);
  static_assert(ideal_response_dina(Profile{0b111}, Profile{0b101}));
}

TEST_CASE("DINA response probabilities") {
  CHECK(theta_dina(0.2, 0.2, true) == doctest::Approx(0.8));
  CHECK(theta_dina(0.2, 0.2, false) == doctest::Approx(0.2));
  CHECK(theta_dina(0.0, 0.0, true) == 1.0);
  DinaItemParams bad{arma::vec{0.5}, arma::vec{0.6}};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("theta lookup uses the reduced class only") {
  const QMatrix q(arma::umat{{1, 1, 0}, {1, 1, 1}});
  const ItemParamTable t(q, {{0.2, 0.5, 0.5, 0.8}, {0.2, 0.4, 0.4, 0.6, 0.4, 0.6, 0.6, 0.8}});
  CHECK(theta_lookup(t, 0, 0b001) == doctest::Approx(0.5));
  CHECK(theta_lookup(t, 1, 0b011) == doctest::Approx(0.6));
  for (Profile a = 0; a < 8; ++a) CHECK(theta_lookup(t, 0, a) == theta_lookup(t, 0, a ^ 0b100));
  CHECK_THROWS_AS(theta_lookup(t, 2, 0), DimensionError);
  CHECK_THROWS_AS(ItemParamTable(q, {{0.2, 0.5, 0.5, 1.0}, std::vector<double>(8, 0.5)}), ParameterError);
  CHECK_THROWS_AS(ItemParamTable(q, {{0.2, 0.5, 0.5}, std::vector<double>(8, 0.5)}), DimensionError);
}

TEST_CASE("GDINA effects and table") {
  const arma::uvec q_row{1, 1};
  const std::vector<double> beta{0.2, 0.3, 0.3, 0.0};
  const auto table = gdina_effects_to_table(beta, q_row);
  REQUIRE(table.size() == 4);
  CHECK(table[0] == doctest::Approx(0.2));
  CHECK(table[1] == doctest::Approx(0.5));
  CHECK(table[2] == doctest::Approx(0.5));
  CHECK(table[3] == doctest::Approx(0.8));
  const std::vector<double> intercept_only{0.37, 0.0, 0.0, 0.0};
  for (double v : gdina_effects_to_table(intercept_only, q_row)) CHECK(v == doctest::Approx(0.37));
  const auto back = gdina_table_to_effects(std::vector<double>{0.2, 0.5, 0.5, 0.8});
  // Interaction by inclusion-exclusion: 0.8 - 0.5 - 0.5 + 0.2.
  CHECK(back[3] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(gdina_effects_to_table(std::vector<double>{0.5, 0.6, 0.0, 0.0}, q_row), ParameterError);
}

TEST_CASE("GDINA round trip on random tables") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (std::size_t m = 1; m <= 4; ++m) {
    const arma::uvec q_row = arma::ones<arma::uvec>(m);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> table(std::size_t{1} << m);
      for (auto& v : table) v = u(gen);
      const auto again = gdina_effects_to_table(gdina_table_to_effects(table), q_row);
      for (std::size_t a = 0; a < table.size(); ++a) CHECK(std::abs(again[a] - table[a]) <= 1e-12);
    }
  }
}

TEST_CASE("mixture weights") {
  for (Profile a = 0; a < 4; ++a) CHECK(mixture_weight(arma::vec{0.5, 0.5}, a) == doctest::Approx(0.25));
  CHECK(mixture_weight(arma::vec{1.0, 1.0, 1.0}, Profile{0b111}) == 1.0);
  for (Profile a = 0; a < 7; ++a) CHECK(mixture_weight(arma::vec{1.0, 1.0, 1.0}, a) == 0.0);
  CHECK_THROWS_AS(mixture_weight(arma::vec{0.5}, arma::uvec{1, 0}), DimensionError);
}

TEST_CASE("mixture weights sum to one") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t k = 1; k <= 8; ++k)
    for (int rep = 0; rep < 100; ++rep) {
      arma::vec d(k);
      for (auto& x : d) x = u(gen);
      double total = 0.0;
      for (Profile a = 0; a < (Profile{1} << k); ++a) total += mixture_weight(d, a);
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("marginal item probability") {
  const QMatrix q1(arma::umat(1, 1, arma::fill::ones));
  const ItemParamTable t1(q1, {{0.2, 0.8}});
  CHECK(marginal_item_prob(arma::vec{0.5}, 0, t1) == doctest::Approx(0.5));

  const QMatrix q2 = two_attribute_item();
  const ItemParamTable t2(q2, {{0.2, 0.5, 0.5, 0.8}});
  // 0.2*0.1875 + 0.5*0.0625 + 0.5*0.5625 + 0.8*0.1875, enumerated by hand.
  CHECK(marginal_item_prob(arma::vec{0.25, 0.75}, 0, t2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(marginal_item_prob(arma::vec{0.25}, 0, t2), DimensionError);
}

TEST_CASE("binary mastery reduces exactly to the classical model") {
  std::mt19937_64 gen(17);
  const QMatrix q(arma::umat{{1, 0, 0}, {0, 1, 1}, {1, 1, 1}, {1, 0, 1}});
  const ItemParamTable t = random_table(q, gen);
  for (Profile a = 0; a < 8; ++a) {
    const arma::vec d = arma::conv_to<arma::vec>::from(profile_bits(a, 3));
    for (std::size_t j = 0; j < q.items(); ++j) CHECK(marginal_item_prob(d, j, t) == theta_lookup(t, j, a));
  }
}

TEST_CASE("marginal item probability is monotone for monotone tables") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const QMatrix q(arma::umat{{1, 1, 1}});
  for (int rep = 0; rep < 50; ++rep) {
    // Monotone table: cumulative non-negative effects.
    std::vector<double> beta(8);
    beta[0] = 0.05;
    for (std::size_t s = 1; s < 8; ++s) beta[s] = 0.12 * u(gen);
    const ItemParamTable t(q, {gdina_effects_to_table(beta, arma::uvec{1, 1, 1})});
    REQUIRE(monotonicity_check(t).empty());
    arma::vec d{u(gen), u(gen), u(gen)};
    const double base = marginal_item_prob(d, 0, t);
    for (std::size_t k = 0; k < 3; ++k) {
      arma::vec up = d;
      up(k) = std::min(1.0, d(k) + 0.1);
      CHECK(marginal_item_prob(up, 0, t) >= base - 1e-15);
    }
  }
}

TEST_CASE("latent-class weights") {
  const std::vector<Profile> one{1};
  CHECK(rlcm_class_weight_at(one, arma::vec{0.3}) == doctest::Approx(0.3));
  const CopulaParams c(arma::vec{0.0}, arma::mat(1, 1, arma::fill::value(1.0)));
  // All classes of K = 1, J = 3 sum to one.
  double total = 0.0;
  for (Profile a = 0; a < 8; ++a) {
    const std::vector<Profile> w{a & 1U, (a >> 1) & 1U, (a >> 2) & 1U};
    total += rlcm_class_weight(w, c, QuadratureSpec::grid());
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("latent-class weights: grid and Monte Carlo agree") {
  const CopulaParams c(arma::vec{0.0}, arma::mat(1, 1, arma::fill::value(1.0)));
  for (Profile a = 0; a < 4; ++a) {
    const std::vector<Profile> w{a & 1U, (a >> 1) & 1U};
    const double grid = rlcm_class_weight(w, c, QuadratureSpec::grid());
    const double mc = rlcm_class_weight(w, c, QuadratureSpec::monte_carlo(1000000, 99));
    CHECK(std::abs(grid - mc) < 1e-3);
  }
  // E[d^2] for d = Phi(Z): P(Z1 <= Z, Z2 <= Z) = 1/3.
  CHECK(rlcm_class_weight(std::vector<Profile>{1, 1}, c, QuadratureSpec::grid()) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("latent-class size cap") {
  const QMatrix q(arma::umat(13, 2, arma::fill::ones));
  const ItemParamTable t = ItemParamTable::constant(q, 0.5);
  const CopulaParams c(arma::zeros<arma::vec>(2), arma::eye<arma::mat>(2, 2));
  CHECK_THROWS_AS(rlcm_response_prob(arma::zeros<arma::uvec>(13), t, c, QuadratureSpec::grid()), SizeError);
}

TEST_CASE("latent-class representation equals the partial-mastery likelihood") {
  std::mt19937_64 gen(31);
  const CopulaParams c(arma::vec{0.3}, arma::mat(1, 1, arma::fill::value(1.7)));
  for (std::size_t items = 1; items <= 3; ++items) {
    const QMatrix q(arma::umat(items, 1, arma::fill::ones));
    const ItemParamTable t = random_table(q, gen);
    for (Profile r = 0; r < (Profile{1} << items); ++r) {
      const arma::uvec resp = profile_bits(r, items);
      const double rlcm = rlcm_response_prob(resp, t, c, QuadratureSpec::grid());
      const double pm = pmcdm_subject_prob(resp, t, c, QuadratureSpec::grid());
      CHECK(std::abs(rlcm - pm) < 1e-3);
      const double pm_mc = std::exp(pmcdm_subject_loglik(resp, t, c, 200000, 4));
      CHECK(std::abs(rlcm - pm_mc) < 5e-3);
    }
  }
}

TEST_CASE("partial-mastery likelihood examples") {
  const QMatrix q1(arma::umat(1, 1, arma::fill::ones));
  const ItemParamTable t1(q1, {{0.2, 0.8}});
  const CopulaParams std_normal(arma::vec{0.0}, arma::mat(1, 1, arma::fill::value(1.0)));
  // E[d] = 1/2 by symmetry, so P(R = 1) = 0.2 + 0.6 / 2.
  CHECK(pmcdm_subject_prob(arma::uvec{1}, t1, std_normal, QuadratureSpec::grid()) ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::exp(pmcdm_subject_loglik(arma::uvec{1}, t1, std_normal, 1000000, 8)) ==
        doctest::Approx(0.5).epsilon(2e-3));

  // Point mass at a binary d equals the classical conditional likelihood.
  std::mt19937_64 gen(41);
  const QMatrix q(arma::umat{{1, 0}, {0, 1}, {1, 1}});
  const ItemParamTable t = random_table(q, gen);
  const arma::uvec resp{1, 0, 1};
  for (Profile a = 0; a < 4; ++a) {
    const arma::vec d = arma::conv_to<arma::vec>::from(profile_bits(a, 2));
    CHECK(pmcdm_subject_loglik_at(resp, t, d) == doctest::Approx(cdm_conditional_loglik(resp, t, a)).epsilon(1e-15));
  }
}

TEST_CASE("Monte Carlo likelihood: seeds agree within standard error") {
  std::mt19937_64 gen(43);
  const QMatrix q(arma::umat{{1, 0}, {0, 1}, {1, 1}, {1, 0}});
  const ItemParamTable t = random_table(q, gen);
  const CopulaParams c(arma::vec{0.2, -0.4}, exchangeable_covariance(2, 0.5));
  const arma::uvec resp{1, 0, 1, 1};
  const std::size_t draws = 400000;
  const double a = std::exp(pmcdm_subject_loglik(resp, t, c, draws, 1));
  const double b = std::exp(pmcdm_subject_loglik(resp, t, c, draws, 2));
  // Integrand bounded in [0,1]: a crude sd bound of 0.5 / sqrt(draws) per estimate.
  CHECK(std::abs(a - b) < 3.0 * std::sqrt(2.0) * 0.5 / std::sqrt(static_cast<double>(draws)));
  CHECK(pmcdm_subject_loglik(resp, t, c, 1000, 9) == pmcdm_subject_loglik(resp, t, c, 1000, 9));
}

TEST_CASE("batch likelihood matches per-subject evaluation") {
  std::mt19937_64 gen(47);
  const QMatrix q(arma::umat{{1, 0}, {0, 1}, {1, 1}});
  const ItemParamTable t = random_table(q, gen);
  const CopulaParams c(arma::vec{0.0, 0.5}, exchangeable_covariance(2, 0.3));
  const ResponseMatrix r(arma::umat{{1, 0, 1}, {0, 0, 0}, {1, 1, 1}});
  const arma::vec batch = pmcdm_loglik(r, t, c, 500, 12);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(batch(i) == doctest::Approx(pmcdm_subject_loglik(r.entries().row(i).t(), t, c, 500, 12)).epsilon(1e-13));
}

TEST_CASE("classical likelihood") {
  const QMatrix q1(arma::umat(1, 1, arma::fill::ones));
  const ItemParamTable t1(q1, {{0.2, 0.8}});
  CHECK(cdm_subject_loglik(arma::uvec{1}, t1, arma::vec{0.5, 0.5}) == doctest::Approx(std::log(0.5)));

  std::mt19937_64 gen(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const QMatrix q(arma::umat{{1, 0}, {1, 1}});
  for (int rep = 0; rep < 20; ++rep) {
    const ItemParamTable t = random_table(q, gen);
    arma::vec p(4);
    for (auto& x : p) x = 0.05 + u(gen);
    p /= arma::accu(p);
    for (Profile r = 0; r < 4; ++r) {
      const arma::uvec resp = profile_bits(r, 2);
      // Direct enumeration in linear space.
      double direct = 0.0;
      for (Profile a = 0; a < 4; ++a) {
        double l = p(a);
        for (std::size_t j = 0; j < 2; ++j) {
          const double th = t.cell(j, reduce_profile(q.required(j), a));
          l *= resp(j) ? th : 1.0 - th;
        }
        direct += l;
      }
      CHECK(std::abs(cdm_subject_loglik(resp, t, p) - std::log(direct)) <= 1e-12);
    }
  }
}

TEST_CASE("log-sum-exp is stable") {
  const std::vector<double> v{-1000.0, -1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)));
}

TEST_CASE("monotonicity check") {
  const QMatrix q = two_attribute_item();
  CHECK(monotonicity_check(ItemParamTable(q, {{0.2, 0.5, 0.5, 0.8}})).empty());
  CHECK(monotonicity_check(dina_table(q, DinaItemParams{arma::vec{0.2}, arma::vec{0.1}})).empty());
  const auto v = monotonicity_check(ItemParamTable(q, {{0.7, 0.46, 0.8, 0.94}}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].item == 0);
  CHECK(v[0].superset_class == 1);
  CHECK(v[0].subset_class == 0);
  CHECK(v[0].superset_theta == doctest::Approx(0.46));
}

TEST_CASE("copula and proportion validation") {
  CHECK_THROWS_AS(CopulaParams(arma::vec{0.0, 0.0}, arma::mat{{1.0, 2.0}, {2.0, 1.0}}), ParameterError);
  CHECK_THROWS_AS(CopulaParams(arma::vec{0.0, 0.0}, arma::mat{{1.0, 0.1}, {0.2, 1.0}}), ParameterError);
  CHECK_THROWS_AS(CopulaParams(arma::vec{0.0}, arma::eye<arma::mat>(2, 2)), DimensionError);
  CHECK_NOTHROW(validate_class_proportions(arma::vec{0.25, 0.25, 0.25, 0.25}, 2));
  CHECK_THROWS(validate_class_proportions(arma::vec{0.5, 0.5, 0.0, 0.0}, 2));
  CHECK_THROWS(validate_class_proportions(arma::vec{0.3, 0.3, 0.3, 0.3}, 2));
  CHECK_THROWS(validate_mastery(arma::vec{0.5, 1.2}));
  const arma::mat s = exchangeable_covariance(3, 0.8);
  CHECK(s(0, 0) == doctest::Approx(1.0));
  CHECK(s(0, 2) == doctest::Approx(0.8));
}

TEST_CASE("model kind names") {
  CHECK(parse_model_kind("pm-dina") == ModelKind::PmDina);
  CHECK(parse_model_kind("PM_GDINA") == ModelKind::PmGdina);
  CHECK(parse_model_kind("dina") == ModelKind::Dina);
  CHECK_THROWS_AS(parse_model_kind("rum"), DataError);
  for (ModelKind k : {ModelKind::Dina, ModelKind::Gdina, ModelKind::PmDina, ModelKind::PmGdina})
    CHECK(parse_model_kind(to_string(k)) == k);
}

TEST_CASE("monotonicity on published English-test estimates") {
  // Per item: Q row, then the PM-GDINA and GDINA estimates in reduced-class
  // order (none, first required, second required, both). A printed 0.00
  // is entered as 0.001 to stay inside (0,1).
  struct Row {
    unsigned q[3];
    std::vector<double> pm, gdina;
  };
  const std::vector<Row> rows{
      {{1, 1, 0}, {0.54, 0.76, 0.83, 0.98}, {0.70, 0.46, 0.80, 0.94}},
      {{0, 1, 0}, {0.59, 0.95}, {0.74, 0.91}},
      {{1, 0, 1}, {0.35, 0.58, 0.41, 0.90}, {0.41, 0.67, 0.50, 0.78}},
      {{0, 0, 1}, {0.19, 0.91}, {0.47, 0.82}},
      {{0, 0, 1}, {0.62, 0.99}, {0.75, 0.96}},
      {{0, 0, 1}, {0.53, 0.98}, {0.70, 0.93}},
      {{1, 0, 1}, {0.20, 0.82, 0.74, 0.99}, {0.48, 0.95, 0.70, 0.94}},
      {{0, 1, 0}, {0.71, 0.99}, {0.81, 0.97}},
      {{0, 0, 1}, {0.29, 0.86}, {0.53, 0.79}},
      {{1, 0, 0}, {0.41, 0.99}, {0.52, 0.89}},
      {{1, 0, 1}, {0.28, 0.75, 0.71, 0.99}, {0.49, 0.62, 0.72, 0.93}},
      {{1, 0, 1}, {0.06, 0.24, 0.19, 0.94}, {0.15, 0.001, 0.38, 0.74}},
      {{1, 0, 0}, {0.58, 0.99}, {0.66, 0.91}},
      {{1, 0, 0}, {0.45, 0.92}, {0.54, 0.83}},
      {{0, 0, 1}, {0.59, 0.99}, {0.73, 0.96}},
      {{1, 0, 1}, {0.27, 0.74, 0.68, 0.98}, {0.48, 0.84, 0.69, 0.91}},
      {{0, 1, 1}, {0.62, 0.86, 0.88, 0.97}, {0.79, 0.93, 0.88, 0.94}},
      {{0, 0, 1}, {0.56, 0.96}, {0.72, 0.91}},
      {{0, 0, 1}, {0.16, 0.93}, {0.45, 0.84}},
      {{1, 0, 1}, {0.09, 0.39, 0.20, 0.95}, {0.20, 0.20, 0.38, 0.76}},
      {{1, 0, 1}, {0.27, 0.62, 0.86, 0.96}, {0.54, 0.77, 0.79, 0.92}},
      {{0, 0, 1}, {0.01, 0.89}, {0.29, 0.80}},
      {{0, 1, 0}, {0.47, 0.99}, {0.66, 0.94}},
      {{0, 1, 0}, {0.09, 0.77}, {0.34, 0.69}},
      {{1, 0, 0}, {0.44, 0.87}, {0.52, 0.77}},
      {{0, 0, 1}, {0.36, 0.84}, {0.54, 0.78}},
      {{1, 0, 0}, {0.17, 0.82}, {0.29, 0.70}},
      {{0, 0, 1}, {0.43, 0.97}, {0.64, 0.91}},
  };
  arma::umat qm(rows.size(), 3);
  std::vector<std::vector<double>> pm, gdina;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t k = 0; k < 3; ++k) qm(j, k) = rows[j].q[k];
    pm.push_back(rows[j].pm);
    gdina.push_back(rows[j].gdina);
  }
  const QMatrix q(qm);
  CHECK(monotonicity_check(ItemParamTable(q, pm)).empty());
  std::set<std::size_t> flagged;
  for (const auto& v : monotonicity_check(ItemParamTable(q, gdina))) flagged.insert(v.item + 1);
  CHECK(flagged.count(1) == 1);
  CHECK(flagged.count(12) == 1);
  // Item 7's full class (0.94) also sits just below one partial class (0.95).
  CHECK(flagged == std::set<std::size_t>{1, 7, 12});
}
