#include "pmcdm/grid.hpp"

#include "pmcdm/errors.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace pmcdm {

std::vector<SimulationCondition> full_condition_grid(std::size_t replications, std::uint64_t seed) {
  std::vector<SimulationCondition> out;
  for (ModelKind kind : {ModelKind::Dina, ModelKind::Gdina, ModelKind::PmDina, ModelKind::PmGdina})
    for (std::size_t k : {3, 5})
      for (QVariant qv : {QVariant::Complete, QVariant::Incomplete})
        for (MuVariant mv : {MuVariant::Zero, MuVariant::Nonconstant})
          for (double rho : {0.0, 0.8})
            for (std::size_t n : (k == 3 ? std::vector<std::size_t>{500, 1000} : std::vector<std::size_t>{1000, 2000})) {
              SimulationCondition c;
              c.kind = kind;
              c.attributes = k;
              c.q_variant = qv;
              c.mu_variant = mv;
              c.rho = rho;
              c.subjects = n;
              c.replications = replications;
              c.seed = seed;
              out.push_back(c);
            }
  return out;
}

std::vector<ModelKind> fitted_models_for(ModelKind truth) {
  if (is_dina_family(truth)) return {ModelKind::Dina, ModelKind::PmDina};
  return {ModelKind::Gdina, ModelKind::PmGdina};
}

Fitter default_fitter(const ChainConfig& config) {
  return [config](const ResponseMatrix& data, const QMatrix& q, ModelKind kind, std::uint64_t seed) {
    ChainConfig c = config;
    c.seed = seed;
    return fit_model(data, q, kind, PriorSpec::defaults(q.attributes()), c);
  };
}

std::vector<GridRow> run_condition_grid(const std::vector<SimulationCondition>& requested,
                                        const std::map<ModelKind, Fitter>& fitters, std::size_t threads) {
  // Conditions without replications contribute no rows.
  std::vector<SimulationCondition> conditions;
  for (const auto& c : requested)
    if (c.replications > 0) conditions.push_back(c);
  struct Cell {
    std::size_t condition;
    std::size_t replication;
  };
  std::vector<Cell> cells;
  std::vector<GridRow> rows(conditions.size());
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    conditions[c].validate();
    rows[c].condition = conditions[c];
    for (ModelKind fitted : fitted_models_for(conditions[c].kind)) {
      if (!fitters.count(fitted)) throw UsageError("no fitter registered for " + std::string(to_string(fitted)));
      ModelMetrics m;
      m.fitted = fitted;
      m.per_replication.resize(conditions[c].replications);
      rows[c].models.push_back(std::move(m));
    }
    for (std::size_t r = 0; r < conditions[c].replications; ++r) cells.push_back({c, r});
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      {
        std::lock_guard lock(error_mutex);
        if (first_error) return;
      }
      const Cell cell = cells[idx];
      const SimulationCondition& cond = conditions[cell.condition];
      try {
        const GeneratedDataset ds = generate_dataset(cond, cell.replication);
        for (std::size_t m = 0; m < rows[cell.condition].models.size(); ++m) {
          ModelMetrics& mm = rows[cell.condition].models[m];
          const std::uint64_t seed =
              derive_seed(cond.seed, {cond.key(), cell.replication, static_cast<std::uint64_t>(mm.fitted), 0xf17});
          const ChainSummary fit = fitters.at(mm.fitted)(ds.responses, ds.q, mm.fitted, seed);
          mm.per_replication[cell.replication] =
              metric_report(ds.true_theta, ds.true_alpha, ds.true_d, is_partial_mastery(cond.kind), fit);
        }
      } catch (const Error& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) {
          const std::string msg =
              cond.label() + " replication " + std::to_string(cell.replication + 1) + ": " + e.what();
          if (e.category() == ErrorCategory::Numeric)
            first_error = std::make_exception_ptr(NumericError(msg));
          else
            first_error = std::make_exception_ptr(DataError(msg));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, cells.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (GridRow& row : rows) {
    for (ModelMetrics& m : row.models) {
      m.replications = m.per_replication.size();
      if (m.replications == 0) continue;
      double arse_sum = 0.0;
      for (const MetricReport& r : m.per_replication) {
        m.item_mae += r.item_mae;
        m.item_rmse += r.item_rmse;
        m.amcr += r.amcr;
        if (r.arse) arse_sum += *r.arse;
      }
      const double n = static_cast<double>(m.replications);
      m.item_mae /= n;
      m.item_rmse /= n;
      m.amcr /= n;
      if (is_partial_mastery(row.condition.kind)) m.arse = arse_sum / n;
    }
  }
  return rows;
}

std::string format_grid_table(const std::vector<GridRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-9s %2s %-10s %-11s %4s %5s %4s  %-9s %7s %7s %7s %7s\n", "truth", "K", "Q", "mu",
                "rho", "N", "reps", "fitted", "MAE", "RMSE", "AMCR", "ARSE");
  os << line;
  for (const GridRow& row : rows) {
    const SimulationCondition& c = row.condition;
    for (const ModelMetrics& m : row.models) {
      char arse[16] = "      -";
      if (m.arse) std::snprintf(arse, sizeof arse, "%7.3f", *m.arse);
      std::snprintf(line, sizeof line, "%-9s %2zu %-10s %-11s %4.1f %5zu %4zu  %-9s %7.3f %7.3f %7.3f %s\n",
                    std::string(to_string(c.kind)).c_str(), c.attributes, std::string(to_string(c.q_variant)).c_str(),
                    std::string(to_string(c.mu_variant)).c_str(), c.rho, c.subjects, m.replications,
                    std::string(to_string(m.fitted)).c_str(), m.item_mae, m.item_rmse, m.amcr, arse);
      os << line;
    }
  }
  return os.str();
}

}  // namespace pmcdm
