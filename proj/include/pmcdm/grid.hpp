#pragma once

// Simulation-study harness: enumerate design cells, generate replications,
// fit the registered models and average recovery metrics.

#include "pmcdm/diagnostics.hpp"
#include "pmcdm/sampler.hpp"
#include "pmcdm/simulate.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace pmcdm {

// kind x K x Q variant x mean x rho x N: 4 * 2 * 2 * 2 * 2 * 2 = 128 cells.
// K = 3 uses N in {500, 1000}; K = 5 uses N in {1000, 2000}.
std::vector<SimulationCondition> full_condition_grid(std::size_t replications, std::uint64_t seed);

// Models fitted to data generated by truth: the classical model and its
// partial-mastery counterpart from the same family.
std::vector<ModelKind> fitted_models_for(ModelKind truth);

using Fitter = std::function<ChainSummary(const ResponseMatrix&, const QMatrix&, ModelKind, std::uint64_t seed)>;

// fit_model with default priors and the given chain settings; the chain
// seed is replaced per replication.
Fitter default_fitter(const ChainConfig& config);

struct ModelMetrics {
  ModelKind fitted;
  std::size_t replications = 0;
  double item_mae = 0.0;
  double item_rmse = 0.0;
  double amcr = 0.0;
  std::optional<double> arse;
  std::vector<MetricReport> per_replication;
};

struct GridRow {
  SimulationCondition condition;
  std::vector<ModelMetrics> models;
};

// Cells run on up to threads workers; each (condition, replication) owns
// its RNG streams so results do not depend on scheduling.
std::vector<GridRow> run_condition_grid(const std::vector<SimulationCondition>& conditions,
                                        const std::map<ModelKind, Fitter>& fitters, std::size_t threads = 1);

// Plain-text table: one line per condition and fitted model with MAE,
// RMSE, AMCR and (partial-mastery truth) ARSE.
std::string format_grid_table(const std::vector<GridRow>& rows);

}  // namespace pmcdm
