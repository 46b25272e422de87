#include "pmcdm/cli.hpp"

#include "pmcdm/diagnostics.hpp"
#include "pmcdm/errors.hpp"
#include "pmcdm/grid.hpp"
#include "pmcdm/io.hpp"
#include "pmcdm/normal.hpp"
#include "pmcdm/sampler.hpp"
#include "pmcdm/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <thread>

namespace pmcdm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SimFlags {
  std::optional<std::string> truth_model;
  std::optional<std::size_t> attributes;
  std::optional<std::string> q_variant;
  std::optional<std::string> mu_variant;
  std::optional<double> rho;
  std::optional<std::size_t> subjects;
  std::optional<std::size_t> replication;

  bool any() const {
    return truth_model || attributes || q_variant || mu_variant || rho || subjects || replication;
  }
};

struct Options {
  std::string config;
  std::string model;
  std::vector<std::string> models;  // grid filter
  std::string q_path, responses_path, out_dir = ".";
  std::uint64_t seed = 1;
  std::size_t iters = 3000, burnin = 1000, thin = 1, chains = 1;
  std::size_t mc_draws = kDefaultLoglikDraws;
  std::size_t replications = 10;
  std::size_t threads = 1;
  std::optional<double> prior_nu0, prior_psi0, prior_sigma0, prior_dirichlet;
  SimFlags sim;
  std::vector<std::string> summaries;
  std::vector<std::string> labels;
  std::string truth_dir, chain_path;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

SimulationCondition condition_from_flags(const SimFlags& f, ModelKind default_kind, std::uint64_t seed) {
  SimulationCondition c;
  c.kind = f.truth_model ? parse_model_kind(*f.truth_model) : default_kind;
  if (f.attributes) c.attributes = *f.attributes;
  if (f.q_variant) c.q_variant = parse_q_variant(*f.q_variant);
  if (f.mu_variant) c.mu_variant = parse_mu_variant(*f.mu_variant);
  if (f.rho) c.rho = *f.rho;
  if (f.subjects) c.subjects = *f.subjects;
  c.seed = seed;
  c.validate();
  return c;
}

void write_dataset(const GeneratedDataset& ds, const fs::path& dir) {
  write_file_atomic(dir / "q.csv", format_csv(ds.q.entries(), "a"));
  write_file_atomic(dir / "responses.csv", format_csv(ds.responses.entries(), "item"));
  write_file_atomic(dir / "true_d.csv", format_csv(ds.true_d, "d"));
  write_file_atomic(dir / "true_alpha.csv", format_csv(ds.true_alpha, "a"));
  write_file_atomic(dir / "true_theta.json", json{{"theta", item_table_to_json(ds.true_theta)}}.dump(1) + "\n");
  json cond = condition_to_json(ds.condition);
  cond["replication"] = ds.replication;
  write_file_atomic(dir / "condition.json", cond.dump(1) + "\n");
}

PriorSpec prior_from(const Options& o, std::size_t attributes) {
  PriorSpec p = PriorSpec::defaults(attributes);
  if (o.prior_nu0) p.nu0 = *o.prior_nu0;
  if (o.prior_psi0) p.psi0 *= *o.prior_psi0;
  if (o.prior_sigma0) p.sigma0 *= *o.prior_sigma0;
  if (o.prior_dirichlet) p.dirichlet = *o.prior_dirichlet;
  p.validate(attributes);
  return p;
}

ChainConfig chain_from(const Options& o) {
  ChainConfig c;
  c.iterations = o.iters;
  c.burn_in = o.burnin;
  c.thin = o.thin;
  c.chains = o.chains;
  c.seed = o.seed;
  c.validate();
  return c;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const ModelKind kind = parse_model_kind(o.model.empty() ? "PM-DINA" : o.model);
  SimFlags f = o.sim;
  if (!f.truth_model) f.truth_model = std::string(to_string(kind));
  const SimulationCondition c = condition_from_flags(f, kind, o.seed);
  const GeneratedDataset ds = generate_dataset(c, f.replication.value_or(0));
  write_dataset(ds, o.out_dir);
  out << "simulated " << c.label() << ": " << ds.responses.subjects() << " subjects x " << ds.responses.items()
      << " items -> " << o.out_dir << "\n";
  return 0;
}

int cmd_fit(const Options& o, std::ostream& out) {
  if (o.model.empty()) throw UsageError("fit requires --model");
  const ModelKind kind = parse_model_kind(o.model);
  const bool data_mode = !o.q_path.empty() || !o.responses_path.empty();
  if (data_mode && o.sim.any())
    throw UsageError("give either --q/--responses or simulation flags, not both");
  if (!data_mode && !o.sim.any())
    throw UsageError("fit needs --q and --responses, or simulation flags (--attributes, --subjects, ...)");
  const fs::path dir = o.out_dir;

  QMatrix q;
  ResponseMatrix data;
  if (data_mode) {
    if (o.q_path.empty() || o.responses_path.empty()) throw UsageError("fit needs both --q and --responses");
    q = read_q_matrix(o.q_path);
    data = read_responses(o.responses_path);
    if (data.items() != q.items())
      throw DimensionError("responses " + o.responses_path + " have " + std::to_string(data.items()) +
                           " columns but Q-matrix " + o.q_path + " has " + std::to_string(q.items()) + " items");
  } else {
    const SimulationCondition c = condition_from_flags(o.sim, kind, o.seed);
    const GeneratedDataset ds = generate_dataset(c, o.sim.replication.value_or(0));
    write_dataset(ds, dir / "truth");
    q = ds.q;
    data = ds.responses;
  }
  const ChainSummary s = fit_model(data, q, kind, prior_from(o, q.attributes()), chain_from(o));
  write_summary(s, dir / "summary.json");
  write_chain_archive(s, dir / "chain.ndjson");
  out << to_string(kind) << " fit: N=" << s.subjects << " J=" << s.items() << " K=" << s.attributes()
      << " retained=" << s.retained;
  if (s.dina_fallbacks) out << " dina_fallbacks=" << s.dina_fallbacks;
  out << " -> " << (dir / "summary.json").string() << "\n";
  return 0;
}

std::string diagnosis_text(const ChainSummary& s, const std::optional<DiagnosisReport>& rep) {
  std::ostringstream os;
  const std::size_t k = s.attributes();
  os << "model " << to_string(s.kind) << ", N=" << s.subjects << ", J=" << s.items() << ", K=" << k
     << ", retained draws=" << s.retained << "\n\n";
  auto row = [&](const std::string& label, auto value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-12s", label.c_str());
    os << buf;
    for (std::size_t a = 0; a < k; ++a) {
      std::snprintf(buf, sizeof buf, " %14s", value(a).c_str());
      os << buf;
    }
    os << "\n";
  };
  row("", [](std::size_t a) { return "attr " + std::to_string(a + 1); });
  if (rep) {
    row("mu", [&](std::size_t a) { return fixed(s.mu_mean(a)); });
    row("Phi(mu)", [&](std::size_t a) { return fixed(normal_cdf(s.mu_mean(a))); });
    row("sigma^2", [&](std::size_t a) { return fixed(rep->variances(a)); });
    row("verdict", [&](std::size_t a) { return std::string(to_string(rep->verdicts[a])); });
    os << "\ncorrelation\n";
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) os << (b ? " " : "") << fixed(rep->correlation(a, b));
      os << "\n";
    }
    os << "\nbinary-like: sigma^2 > " << kBinaryLikeVariance << "; partial-like: sigma^2 < " << kPartialLikeVariance
       << "\n";
  } else {
    row("P(mastery)", [&](std::size_t a) { return fixed(arma::mean(s.d_hat.col(a))); });
    os << "\nclassical model: no covariance diagnostic\n";
  }
  return os.str();
}

json theta_field(const json& j) {
  const auto it = j.find("theta");
  if (it == j.end()) throw DataError("true_theta.json has no 'theta' field");
  return *it;
}

json metric_json(const MetricReport& m) {
  json j{{"item_mae", m.item_mae},
         {"item_rmse", m.item_rmse},
         {"amcr", m.amcr},
         {"amcr_by_attribute", std::vector<double>(m.amcr_by_attribute.begin(), m.amcr_by_attribute.end())}};
  if (m.arse) {
    j["arse"] = *m.arse;
    j["arse_by_attribute"] = std::vector<double>(m.arse_by_attribute.begin(), m.arse_by_attribute.end());
  }
  return j;
}

int cmd_diagnose(const Options& o, std::ostream& out) {
  if (o.summaries.size() != 1) throw UsageError("diagnose needs exactly one --summary");
  const ChainSummary s = read_summary(o.summaries[0]);
  const fs::path dir = o.out_dir;
  json doc{{"model", std::string(to_string(s.kind))}, {"subjects", s.subjects}, {"attributes", s.attributes()}};

  std::optional<DiagnosisReport> rep;
  if (is_partial_mastery(s.kind)) {
    rep = variance_diagnostic(s.sigma_mean);
    json verdicts = json::array();
    for (Verdict v : rep->verdicts) verdicts.push_back(std::string(to_string(v)));
    json corr = json::array();
    for (arma::uword a = 0; a < rep->correlation.n_rows; ++a) {
      json r = json::array();
      for (arma::uword b = 0; b < rep->correlation.n_cols; ++b) r.push_back(rep->correlation(a, b));
      corr.push_back(r);
    }
    json phi = json::array();
    for (double m : s.mu_mean) phi.push_back(normal_cdf(m));
    doc["mu"] = std::vector<double>(s.mu_mean.begin(), s.mu_mean.end());
    doc["phi_mu"] = phi;
    doc["variances"] = std::vector<double>(rep->variances.begin(), rep->variances.end());
    doc["correlation"] = corr;
    doc["verdicts"] = verdicts;
  }
  scatter_export(s.d_hat, dir / "scatter.csv");
  doc["scatter"] = "scatter.csv";

  const auto violations = monotonicity_check(s.theta_mean);
  json mono = json::array();
  for (const auto& v : violations)
    mono.push_back({{"item", v.item + 1},
                    {"superset_class", v.superset_class},
                    {"subset_class", v.subset_class},
                    {"superset_theta", v.superset_theta},
                    {"subset_theta", v.subset_theta}});
  doc["monotonicity_violations"] = mono;

  std::string text = diagnosis_text(s, rep);
  text += "\nmonotonicity violations: " + std::to_string(violations.size()) + "\n";

  if (!o.chain_path.empty()) {
    const ChainArchive a = read_chain_archive(o.chain_path);
    if (a.kind != s.kind || a.subjects != s.subjects || a.items != s.items())
      throw DataError("chain archive " + o.chain_path + " does not belong to summary " + o.summaries[0]);
    if (a.chains.size() >= 2) {
      std::vector<arma::mat> theta;
      for (const auto& c : a.chains) theta.push_back(c.theta);
      const GelmanRubinResult gr = gelman_rubin(theta);
      std::string csv = "parameter,rhat,excluded\n";
      for (std::size_t p = 0; p < gr.rhat.size(); ++p) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", gr.rhat[p]);
        csv += a.theta_names[p] + "," + (gr.excluded[p] ? "" : buf) + "," + (gr.excluded[p] ? "1" : "0") + "\n";
      }
      write_file_atomic(dir / "gelman_rubin.csv", csv);
      doc["gelman_rubin"] = {{"assessed", gr.assessed()},
                             {"converged", gr.converged()},
                             {"excluded", gr.rhat.size() - gr.assessed()},
                             {"threshold", kGelmanRubinThreshold}};
      text += "Gelman-Rubin: " + std::to_string(gr.converged()) + " of " + std::to_string(gr.assessed()) +
              " theta parameters below " + fixed(kGelmanRubinThreshold, 1);
      if (gr.assessed() < gr.rhat.size())
        text += " (" + std::to_string(gr.rhat.size() - gr.assessed()) + " zero-variance parameters excluded)";
      text += "\n";
    } else {
      text += "Gelman-Rubin: needs at least 2 chains\n";
    }
  }

  if (!o.truth_dir.empty()) {
    const fs::path t = o.truth_dir;
    const QMatrix q = read_q_matrix(t / "q.csv");
    if (!(q == s.q)) throw DataError("truth Q-matrix differs from the fitted summary's");
    const ItemParamTable theta = item_table_from_json(theta_field(parse_json(read_file(t / "true_theta.json"), "true_theta.json")), q);
    const arma::mat d = read_real_matrix(t / "true_d.csv");
    const arma::umat alpha = round_profiles(d);
    const json cond = parse_json(read_file(t / "condition.json"), "condition.json");
    const bool partial = is_partial_mastery(parse_model_kind(cond.at("kind").get<std::string>()));
    const MetricReport m = metric_report(theta, alpha, d, partial, s);
    write_file_atomic(dir / "metrics.json", metric_json(m).dump(1) + "\n");
    doc["metrics"] = metric_json(m);
    text += "item MAE " + fixed(m.item_mae) + ", RMSE " + fixed(m.item_rmse) + ", AMCR " + fixed(m.amcr);
    if (m.arse) text += ", ARSE " + fixed(*m.arse);
    text += "\n";
  }
  write_file_atomic(dir / "diagnosis.json", doc.dump(1) + "\n");
  write_file_atomic(dir / "diagnosis.txt", text);
  out << text;
  return 0;
}

int cmd_compare(const Options& o, std::ostream& out) {
  if (o.summaries.size() < 2) throw UsageError("compare needs at least two --summary files");
  if (o.responses_path.empty()) throw UsageError("compare needs --responses");
  const ResponseMatrix data = read_responses(o.responses_path);
  std::vector<ChainSummary> fits;
  std::vector<std::string> labels = o.labels;
  for (const auto& p : o.summaries) fits.push_back(read_summary(p));
  if (labels.empty())
    for (const auto& f : fits) labels.emplace_back(to_string(f.kind));
  if (labels.size() != fits.size()) throw UsageError("give one --label per --summary");
  const Comparison cmp = compare_models(data, fits, labels, o.mc_draws, o.seed);

  json rows = json::array();
  std::ostringstream text;
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %6s %14s %14s %14s\n", "model", "P", "loglik", "AIC", "BIC");
  text << line;
  for (std::size_t r = 0; r < cmp.rows.size(); ++r) {
    const auto& row = cmp.rows[r];
    rows.push_back({{"label", row.label},
                    {"model", std::string(to_string(row.kind))},
                    {"parameters", row.ic.parameters},
                    {"loglik", row.ic.loglik},
                    {"aic", row.ic.aic},
                    {"bic", row.ic.bic},
                    {"best_bic", r == cmp.best_bic},
                    {"best_aic", r == cmp.best_aic}});
    std::snprintf(line, sizeof line, "%-16s %6zu %14.2f %14.2f %14.2f%s\n", row.label.c_str(), row.ic.parameters,
                  row.ic.loglik, row.ic.aic, row.ic.bic, r == cmp.best_bic ? "  <- best (BIC)" : "");
    text << line;
  }
  text << "log-likelihood of partial-mastery models: Monte Carlo over " << o.mc_draws << " copula draws, seed "
       << o.seed << "\n";
  const json doc{{"rows", rows},
                 {"best_bic", cmp.rows[cmp.best_bic].label},
                 {"best_aic", cmp.rows[cmp.best_aic].label},
                 {"subjects", data.subjects()},
                 {"mc_draws", o.mc_draws},
                 {"seed", o.seed}};
  const fs::path dir = o.out_dir;
  write_file_atomic(dir / "comparison.json", doc.dump(1) + "\n");
  write_file_atomic(dir / "comparison.txt", text.str());
  out << text.str();
  return 0;
}

int cmd_grid(const Options& o, std::ostream& out) {
  std::vector<SimulationCondition> conditions;
  std::vector<ModelKind> kinds;
  for (const auto& m : o.models) kinds.push_back(parse_model_kind(m));
  if (!o.model.empty()) kinds.push_back(parse_model_kind(o.model));
  for (const auto& c : full_condition_grid(o.replications, o.seed)) {
    if (!kinds.empty() && std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) continue;
    if (o.sim.attributes && c.attributes != *o.sim.attributes) continue;
    if (o.sim.q_variant && c.q_variant != parse_q_variant(*o.sim.q_variant)) continue;
    if (o.sim.mu_variant && c.mu_variant != parse_mu_variant(*o.sim.mu_variant)) continue;
    if (o.sim.rho && std::abs(c.rho - *o.sim.rho) > 1e-12) continue;
    if (o.sim.subjects && c.subjects != *o.sim.subjects) continue;
    conditions.push_back(c);
  }
  if (conditions.empty()) throw UsageError("the filters select no grid condition");
  ChainConfig cfg = chain_from(o);
  if (cfg.chains != 1) throw UsageError("grid fits use one chain per model");
  const Fitter f = default_fitter(cfg);
  const std::map<ModelKind, Fitter> fitters{
      {ModelKind::Dina, f}, {ModelKind::Gdina, f}, {ModelKind::PmDina, f}, {ModelKind::PmGdina, f}};
  const auto rows = run_condition_grid(conditions, fitters, o.threads);

  json doc = json::array();
  for (const auto& row : rows) {
    json models = json::array();
    for (const auto& m : row.models) {
      json mj{{"fitted", std::string(to_string(m.fitted))},
              {"replications", m.replications},
              {"item_mae", m.item_mae},
              {"item_rmse", m.item_rmse},
              {"amcr", m.amcr}};
      if (m.arse) mj["arse"] = *m.arse;
      models.push_back(mj);
    }
    doc.push_back({{"condition", condition_to_json(row.condition)}, {"models", models}});
  }
  const std::string table = format_grid_table(rows);
  const fs::path dir = o.out_dir;
  write_file_atomic(dir / "grid.json", doc.dump(1) + "\n");
  write_file_atomic(dir / "grid.txt", table);
  out << table;
  return 0;
}

void add_chain_flags(CLI::App* app, Options& o) {
  app->add_option("--iters", o.iters, "total MCMC iterations M")->check(CLI::PositiveNumber);
  app->add_option("--burnin", o.burnin, "burn-in iterations B");
  app->add_option("--thin", o.thin, "thinning interval T")->check(CLI::PositiveNumber);
}

void add_sim_flags(CLI::App* app, Options& o, bool filters) {
  app->add_option("--attributes", o.sim.attributes, filters ? "K filter (3 or 5)" : "K (3 or 5)");
  app->add_option("--q-variant", o.sim.q_variant, "complete or incomplete");
  app->add_option("--mu-variant", o.sim.mu_variant, "zero or nonconstant");
  app->add_option("--rho", o.sim.rho, "attribute correlation");
  app->add_option("--subjects", o.sim.subjects, "number of subjects N");
  if (!filters) app->add_option("--replication", o.sim.replication, "replication index (default 0)");
}

void add_prior_flags(CLI::App* app, Options& o) {
  app->add_option("--prior-nu0", o.prior_nu0, "inverse-Wishart degrees of freedom (default K+1)");
  app->add_option("--prior-psi0", o.prior_psi0, "inverse-Wishart scale multiplier of I (default 1)");
  app->add_option("--prior-sigma0", o.prior_sigma0, "prior covariance multiplier of I for mu (default 1)");
  app->add_option("--prior-dirichlet", o.prior_dirichlet, "Dirichlet concentration for CDM proportions");
}

// Splices config-file entries in front of the user's flags so that flags
// given on the command line win (options keep their last value).
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty() || rest.empty()) return rest;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(rest[0]);
  } catch (const CLI::OptionNotFound&) {
    return rest;
  }
  const auto entries = parse_config(read_file(path));
  std::vector<std::string> out{rest[0]};
  for (const auto& [key, value] : entries) {
    const std::string flag = config_key_to_flag(key);
    if (sub->get_option_no_throw(flag) == nullptr) continue;
    out.push_back(flag);
    out.push_back(value);
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Partial-mastery cognitive diagnosis: simulate, fit, diagnose, compare"};
  app.name("pmcdm");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out_dir, "output directory (default .)");
    sub->add_option("--seed", o.seed, "master seed (default 1)");
    sub->add_option("--config", o.config, "key = value configuration file; flags take precedence");
  };

  CLI::App* sim = app.add_subcommand("simulate", "generate a dataset from a built-in design");
  common(sim);
  sim->add_option("--model", o.model, "generating model (default PM-DINA)");
  add_sim_flags(sim, o, false);

  CLI::App* fit = app.add_subcommand("fit", "run the Gibbs sampler");
  common(fit);
  fit->add_option("--model", o.model, "DINA, GDINA, PM-DINA or PM-GDINA")->required();
  fit->add_option("--q", o.q_path, "Q-matrix CSV");
  fit->add_option("--responses", o.responses_path, "response CSV");
  fit->add_option("--chains", o.chains, "independent chains")->check(CLI::PositiveNumber);
  fit->add_option("--truth-model", o.sim.truth_model, "generating model in simulation mode (default --model)");
  add_chain_flags(fit, o);
  add_sim_flags(fit, o, false);
  add_prior_flags(fit, o);

  CLI::App* diag = app.add_subcommand("diagnose", "diagnostics and recovery metrics for a fitted summary");
  common(diag);
  diag->add_option("--summary", o.summaries, "summary.json from fit")->required()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  diag->add_option("--truth", o.truth_dir, "directory with simulated truth files");
  diag->add_option("--chain", o.chain_path, "chain.ndjson for Gelman-Rubin");

  CLI::App* cmp = app.add_subcommand("compare", "AIC/BIC comparison of fitted models on the same data");
  common(cmp);
  cmp->add_option("--summary", o.summaries, "summary.json (repeat)")->required()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  cmp->add_option("--label", o.labels, "label per summary (repeat)")->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  cmp->add_option("--responses", o.responses_path, "response CSV the models were fitted to")->required();
  cmp->add_option("--mc-draws", o.mc_draws, "copula draws for partial-mastery likelihoods")->check(
      CLI::PositiveNumber);

  CLI::App* grid = app.add_subcommand("grid", "simulation study over the condition grid");
  common(grid);
  grid->add_option("--model", o.models, "generating-model filter (repeat)")->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  grid->add_option("--replications", o.replications, "replications per condition (default 10)");
  grid->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  add_chain_flags(grid, o);
  add_sim_flags(grid, o, true);

  try {
    std::vector<std::string> argv = expand_config(args, app);
    std::reverse(argv.begin(), argv.end());
    try {
      app.parse(argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }
    for (CLI::App* sub : app.get_subcommands()) {
      if (sub == sim) return cmd_simulate(o, out);
      if (sub == fit) return cmd_fit(o, out);
      if (sub == diag) return cmd_diagnose(o, out);
      if (sub == cmp) return cmd_compare(o, out);
      if (sub == grid) return cmd_grid(o, out);
    }
    throw UsageError("no subcommand given");
  } catch (const Error& e) {
    err << "error: code=" << e.code() << ' ' << one_line(e.what()) << "\n";
    if (e.category() == ErrorCategory::Usage) err << "run 'pmcdm --help' for usage\n";
    return static_cast<int>(e.category());
  } catch (const json::exception& e) {
    err << "error: code=E_DATA " << one_line(e.what()) << "\n";
    return static_cast<int>(ErrorCategory::Data);
  } catch (const std::bad_alloc&) {
    err << "error: code=E_NUMERIC out of memory\n";
    return static_cast<int>(ErrorCategory::Numeric);
  }
}

}  // namespace pmcdm
