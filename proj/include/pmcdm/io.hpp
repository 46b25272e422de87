#pragma once

// File formats: CSV matrices, JSON summary documents, the NDJSON chain
// archive and the flat key=value run configuration.

#include "pmcdm/model.hpp"
#include "pmcdm/sampler.hpp"
#include "pmcdm/simulate.hpp"

#include <armadillo>
#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pmcdm {

// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

// --- CSV --------------------------------------------------------------------

// Binary matrix from CSV text. A first row with any non-numeric cell is a
// header and skipped. A row written as one run of digits without
// separators ("110010") is split into one cell per digit. Errors name the
// line and column of the offending cell.
arma::umat parse_binary_csv(std::string_view text, std::string_view what);
arma::mat parse_real_csv(std::string_view text, std::string_view what);

QMatrix read_q_matrix(const std::filesystem::path& path);
ResponseMatrix read_responses(const std::filesystem::path& path);
arma::mat read_real_matrix(const std::filesystem::path& path);

// Header is column prefix + 1-based index, e.g. "a1,a2,a3".
std::string format_csv(const arma::umat& m, std::string_view column_prefix);
std::string format_csv(const arma::mat& m, std::string_view column_prefix);

// --- JSON documents ----------------------------------------------------------

inline constexpr int kSummaryFormatVersion = 1;
inline constexpr int kArchiveFormatVersion = 1;

nlohmann::json item_table_to_json(const ItemParamTable& table);
ItemParamTable item_table_from_json(const nlohmann::json& j, const QMatrix& q);

nlohmann::json condition_to_json(const SimulationCondition& c);
SimulationCondition condition_from_json(const nlohmann::json& j);

// Everything in ChainSummary except the retained draws, which live in the
// chain archive. Doubles use the shortest representation that parses back
// to the same bits.
nlohmann::json summary_to_json(const ChainSummary& s);
ChainSummary summary_from_json(const nlohmann::json& j);
void write_summary(const ChainSummary& s, const std::filesystem::path& path);
ChainSummary read_summary(const std::filesystem::path& path);

// Parses JSON text; syntax errors become DataError with the byte offset.
nlohmann::json parse_json(std::string_view text, std::string_view what);

// --- chain archive -----------------------------------------------------------

struct ChainArchive {
  ModelKind kind = ModelKind::PmDina;
  std::size_t subjects = 0;
  std::size_t items = 0;
  std::size_t attributes = 0;
  ChainConfig config;
  std::string config_hash;
  std::vector<std::string> theta_names;
  std::vector<ChainDraws> chains;
};

// FNV-1a over the model kind, data dimensions, Q-matrix and chain settings.
std::string config_hash(ModelKind kind, const QMatrix& q, std::size_t subjects, const ChainConfig& config);

// One header line, then one record per retained iteration and chain:
// {"chain":c,"iter":t,"theta":[...],"mu":[...],"sigma":[...]} or "p":[...].
std::string format_chain_archive(const ChainSummary& s);
void write_chain_archive(const ChainSummary& s, const std::filesystem::path& path);
ChainArchive parse_chain_archive(std::string_view text);
ChainArchive read_chain_archive(const std::filesystem::path& path);

// --- run configuration -------------------------------------------------------

// Flat "key = value" lines with dotted keys; '#' starts a comment. Each key
// maps onto one CLI flag (chain.iters -> --iters, ...). Unknown keys and
// malformed lines are usage errors.
std::vector<std::pair<std::string, std::string>> parse_config(std::string_view text);

// Flag for a config key, e.g. "chain.iters" -> "--iters"; throws UsageError.
std::string config_key_to_flag(std::string_view key);
const std::map<std::string, std::string>& config_key_table();

}  // namespace pmcdm
