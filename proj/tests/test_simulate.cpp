#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pmcdm/errors.hpp"
#include "pmcdm/grid.hpp"
#include "pmcdm/io.hpp"
#include "pmcdm/normal.hpp"
#include "pmcdm/simulate.hpp"
#include "stats.hpp"

#include <cmath>
#include <filesystem>

using namespace pmcdm;
using namespace testing_stats;

namespace {

const std::filesystem::path kData = PMCDM_DATA_DIR;

bool has_identity_block(const QMatrix& q) {
  const std::size_t k = q.attributes();
  for (std::size_t a = 0; a < k; ++a) {
    bool found = false;
    for (std::size_t j = 0; j < q.items() && !found; ++j) found = q.requirement_mask(j) == (Profile{1} << a);
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("built-in Q-matrices match the golden files") {
  CHECK(builtin_q(3, QVariant::Complete) == read_q_matrix(kData / "q3_complete.csv"));
  CHECK(builtin_q(3, QVariant::Incomplete) == read_q_matrix(kData / "q3_incomplete.csv"));
  CHECK(builtin_q(5, QVariant::Complete) == read_q_matrix(kData / "q5_complete.csv"));
  CHECK(builtin_q(5, QVariant::Incomplete) == read_q_matrix(kData / "q5_incomplete.csv"));
}

TEST_CASE("built-in Q-matrix structure") {
  const QMatrix q3 = builtin_q(3, QVariant::Complete);
  CHECK(q3.items() == 20);
  CHECK(arma::all(q3.entries().row(0) == arma::urowvec{1, 0, 0}));
  CHECK(arma::all(builtin_q(3, QVariant::Incomplete).entries().row(0) == arma::urowvec{0, 1, 1}));
  const QMatrix q5 = builtin_q(5, QVariant::Complete);
  CHECK(arma::all(arma::vectorise(q5.entries().rows(0, 4) == arma::eye<arma::umat>(5, 5))));
  CHECK(has_identity_block(q3));
  CHECK(has_identity_block(q5));
  CHECK_FALSE(has_identity_block(builtin_q(3, QVariant::Incomplete)));
  CHECK_FALSE(has_identity_block(builtin_q(5, QVariant::Incomplete)));
  CHECK_THROWS(builtin_q(4, QVariant::Complete));
}

TEST_CASE("simulation item tables") {
  const QMatrix q(arma::umat{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
  const ItemParamTable g = simulation_item_table(ModelKind::Gdina, q);
  CHECK(g.cell(0, 0) == doctest::Approx(0.2));
  CHECK(g.cell(0, 1) == doctest::Approx(0.8));
  const std::vector<double> two{0.2, 0.5, 0.5, 0.8};
  for (std::size_t a = 0; a < 4; ++a) CHECK(g.cell(1, a) == doctest::Approx(two[a]));
  CHECK(g.cell(1, 0b01) == doctest::Approx(0.5));
  CHECK(g.cell(2, 0b011) == doctest::Approx(0.6));
  CHECK(g.cell(2, 0b100) == doctest::Approx(0.4));
  CHECK(g.cell(2, 0b111) == doctest::Approx(0.8));
  const ItemParamTable d = simulation_item_table(ModelKind::PmDina, q);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto item = d.item(j);
    for (std::size_t a = 0; a + 1 < item.size(); ++a) CHECK(item[a] == doctest::Approx(0.2));
    CHECK(item.back() == doctest::Approx(0.8));
  }
  CHECK_THROWS(simulation_item_table(ModelKind::Gdina, QMatrix(arma::umat{{1, 1, 1, 1}})));
}

TEST_CASE("binarize rounds ties up") {
  const arma::umat a = binarize(arma::mat{{0.49, 0.51, 0.5}});
  CHECK(a(0, 0) == 0);
  CHECK(a(0, 1) == 1);
  CHECK(a(0, 2) == 1);
}

TEST_CASE("mastery score draws") {
  const CopulaParams c(arma::zeros<arma::vec>(3), arma::eye<arma::mat>(3, 3));
  const std::size_t n = 40000;
  const arma::mat d = draw_mastery_scores(c, n, 5);
  CHECK(arma::approx_equal(d, draw_mastery_scores(c, n, 5), "absdiff", 0.0));
  const double se = std::sqrt(1.0 / 12.0 / n);
  const arma::umat alpha = binarize(d);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(arma::mean(d.col(k)) - 0.5) < 3.0 * se);
    CHECK(std::abs(arma::mean(arma::conv_to<arma::vec>::from(alpha.col(k))) - 0.5) < 0.02);
  }

  const CopulaParams corr(arma::zeros<arma::vec>(3), exchangeable_covariance(3, 0.8));
  const arma::mat dc = draw_mastery_scores(corr, n, 6);
  arma::mat latent = dc;
  latent.transform([](double v) { return probit(v); });
  const arma::mat r = arma::cor(latent);
  CHECK(std::abs(r(0, 1) - 0.8) < 0.05);
  CHECK(std::abs(r(1, 2) - 0.8) < 0.05);
}

TEST_CASE("partial-mastery generation rates") {
  const QMatrix q(arma::umat(1, 1, arma::fill::ones));
  const ItemParamTable t(q, {{0.2, 0.8}});
  const std::size_t n = 100000;
  const arma::mat d(n, 1, arma::fill::value(0.5));
  const ResponseMatrix r = generate_responses_pmcdm(d, t, 1);
  const double rate = arma::mean(arma::conv_to<arma::vec>::from(r.entries().col(0)));
  CHECK(std::abs(rate - 0.5) < 0.005);

  const QMatrix q3 = builtin_q(3, QVariant::Complete);
  const ItemParamTable c = ItemParamTable::constant(q3, 0.3);
  const arma::mat dr = draw_mastery_scores(CopulaParams(arma::zeros<arma::vec>(3), arma::eye(3, 3)), 20000, 2);
  const ResponseMatrix rc = generate_responses_pmcdm(dr, c, 3);
  const double se = std::sqrt(0.21 / 20000.0);
  for (std::size_t j = 0; j < q3.items(); ++j)
    CHECK(std::abs(arma::mean(arma::conv_to<arma::vec>::from(rc.entries().col(j))) - 0.3) < 3.5 * se);
}

TEST_CASE("classical generation rates") {
  const QMatrix q = builtin_q(3, QVariant::Complete);
  const ItemParamTable t = simulation_item_table(ModelKind::Dina, q);
  const std::size_t n = 20000;
  const ResponseMatrix ones = generate_responses_cdm(arma::umat(n, 3, arma::fill::ones), t, 1);
  const ResponseMatrix zeros = generate_responses_cdm(arma::umat(n, 3, arma::fill::zeros), t, 1);
  const double se = std::sqrt(0.16 / n);
  for (std::size_t j = 0; j < q.items(); ++j) {
    CHECK(std::abs(arma::mean(arma::conv_to<arma::vec>::from(ones.entries().col(j))) - 0.8) < 4 * se);
    CHECK(std::abs(arma::mean(arma::conv_to<arma::vec>::from(zeros.entries().col(j))) - 0.2) < 4 * se);
  }
  CHECK(generate_responses_cdm(arma::umat(50, 3, arma::fill::ones), t, 9) ==
        generate_responses_cdm(arma::umat(50, 3, arma::fill::ones), t, 9));
}

TEST_CASE("binary mastery generation matches classical generation") {
  const QMatrix q = builtin_q(3, QVariant::Complete);
  const ItemParamTable t = simulation_item_table(ModelKind::Gdina, q);
  const std::size_t n = 100000;
  arma::umat alpha(n, 3);
  for (std::size_t i = 0; i < n; ++i) alpha.row(i) = profile_bits(static_cast<Profile>(i % 8), 3).t();
  const ResponseMatrix pm = generate_responses_pmcdm(arma::conv_to<arma::mat>::from(alpha), t, 11);
  const ResponseMatrix cdm = generate_responses_cdm(alpha, t, 12);
  for (std::size_t j = 0; j < q.items(); ++j) {
    // Per item: 2 x (profile, response) contingency table.
    std::vector<double> a(16, 0.0), b(16, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      a[(i % 8) * 2 + pm(i, j)] += 1.0;
      b[(i % 8) * 2 + cdm(i, j)] += 1.0;
    }
    CAPTURE(j);
    CHECK(chi_square_two_sample(a, b) < chi_square_critical(15));
  }
}

TEST_CASE("empirical response probability converges to the marginal") {
  const QMatrix q = builtin_q(3, QVariant::Incomplete);
  const ItemParamTable t = simulation_item_table(ModelKind::Gdina, q);
  const arma::rowvec d_row{0.15, 0.6, 0.85};
  const std::size_t reps = 40000;
  const arma::mat d = arma::repmat(d_row, reps, 1);
  const ResponseMatrix r = generate_responses_pmcdm(d, t, 21);
  for (std::size_t j = 0; j < q.items(); ++j) {
    const double p = marginal_item_prob(d_row.t(), j, t);
    const double rate = arma::mean(arma::conv_to<arma::vec>::from(r.entries().col(j)));
    CHECK(std::abs(rate - p) < 3.5 * std::sqrt(p * (1 - p) / reps));
  }
}

TEST_CASE("datasets are reproducible per condition and replication") {
  SimulationCondition c;
  c.kind = ModelKind::PmGdina;
  c.subjects = 200;
  c.rho = 0.8;
  c.mu_variant = MuVariant::Nonconstant;
  const GeneratedDataset a = generate_dataset(c, 3);
  const GeneratedDataset b = generate_dataset(c, 3);
  CHECK(a.responses == b.responses);
  CHECK(arma::approx_equal(a.true_d, b.true_d, "absdiff", 0.0));
  CHECK_FALSE(a.responses == generate_dataset(c, 4).responses);
  CHECK(arma::all(arma::vectorise(a.true_alpha == binarize(a.true_d))));

  SimulationCondition other = c;
  other.replications = 50;
  CHECK(other.key() == c.key());
  other.rho = 0.0;
  CHECK(other.key() != c.key());

  SimulationCondition dina = c;
  dina.kind = ModelKind::Dina;
  const GeneratedDataset dd = generate_dataset(dina, 0);
  CHECK(arma::all(arma::vectorise((dd.true_d == 0.0) + (dd.true_d == 1.0)) == 1));
}

TEST_CASE("condition validation") {
  SimulationCondition c;
  c.attributes = 4;
  CHECK_THROWS(c.validate());
  c.attributes = 3;
  c.rho = 1.0;
  CHECK_THROWS(c.validate());
  c.rho = 0.0;
  c.subjects = 0;
  CHECK_THROWS(c.validate());
  CHECK(parse_q_variant(to_string(QVariant::Incomplete)) == QVariant::Incomplete);
  CHECK(parse_mu_variant(to_string(MuVariant::Nonconstant)) == MuVariant::Nonconstant);
}

TEST_CASE("condition grid enumeration") {
  const auto grid = full_condition_grid(10, 1);
  CHECK(grid.size() == 128);
  std::set<std::uint64_t> keys;
  for (const auto& c : grid) {
    keys.insert(c.key());
    if (c.attributes == 3) CHECK((c.subjects == 500 || c.subjects == 1000));
    if (c.attributes == 5) CHECK((c.subjects == 1000 || c.subjects == 2000));
  }
  CHECK(keys.size() == 128);
  CHECK(fitted_models_for(ModelKind::PmDina) == std::vector<ModelKind>{ModelKind::Dina, ModelKind::PmDina});
  CHECK(fitted_models_for(ModelKind::Gdina) == std::vector<ModelKind>{ModelKind::Gdina, ModelKind::PmGdina});

  std::map<ModelKind, Fitter> none;
  CHECK(run_condition_grid(full_condition_grid(0, 1), none).empty());
}

TEST_CASE("grid runs are deterministic and propagate errors with context") {
  ChainConfig cfg;
  cfg.iterations = 60;
  cfg.burn_in = 20;
  cfg.thin = 1;
  cfg.chains = 1;
  std::map<ModelKind, Fitter> fitters;
  for (ModelKind k : {ModelKind::Dina, ModelKind::PmDina}) fitters[k] = default_fitter(cfg);
  SimulationCondition c;
  c.kind = ModelKind::PmDina;
  c.subjects = 100;
  c.replications = 2;
  const auto a = run_condition_grid({c}, fitters, 1);
  const auto b = run_condition_grid({c}, fitters, 2);
  REQUIRE(a.size() == 1);
  REQUIRE(a[0].models.size() == 2);
  for (std::size_t m = 0; m < 2; ++m) {
    CHECK(a[0].models[m].item_mae == b[0].models[m].item_mae);
    CHECK(a[0].models[m].amcr == b[0].models[m].amcr);
    CHECK(a[0].models[m].arse.has_value());
  }
  CHECK(format_grid_table(a).find("PM-DINA") != std::string::npos);

  std::map<ModelKind, Fitter> failing = fitters;
  failing[ModelKind::PmDina] = [](const ResponseMatrix&, const QMatrix&, ModelKind, std::uint64_t) -> ChainSummary {
    throw NumericError("boom");
  };
  try {
    run_condition_grid({c}, failing, 1);
    FAIL("expected throw");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
    CHECK(std::string(e.what()).find("replication") != std::string::npos);
  }
  std::map<ModelKind, Fitter> missing{{ModelKind::Dina, fitters[ModelKind::Dina]}};
  CHECK_THROWS_AS(run_condition_grid({c}, missing, 1), UsageError);
}
