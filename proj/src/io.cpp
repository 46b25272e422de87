#include "pmcdm/io.hpp"

#include "pmcdm/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace pmcdm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  const char sep = line.find(',') != std::string_view::npos ? ',' : (line.find(';') != std::string_view::npos ? ';' : '\0');
  if (sep == '\0') {
    std::string_view t = trim(line);
    // Whitespace-separated cells, or one unseparated run of digits.
    if (t.find_first_of(" \t") != std::string_view::npos) {
      std::size_t p = 0;
      while (p < t.size()) {
        while (p < t.size() && std::isspace(static_cast<unsigned char>(t[p]))) ++p;
        std::size_t q = p;
        while (q < t.size() && !std::isspace(static_cast<unsigned char>(t[q]))) ++q;
        if (q > p) cells.push_back(t.substr(p, q - p));
        p = q;
      }
      return cells;
    }
    const bool digits = !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (digits && t.size() > 1) {
      for (std::size_t i = 0; i < t.size(); ++i) cells.push_back(t.substr(i, 1));
      return cells;
    }
    cells.push_back(t);
    return cells;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    cells.push_back(trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return cells;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(unquote(s));
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct CsvGrid {
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvGrid tokenize_csv(std::string_view text, std::string_view what) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw DataError(std::string(what) + ": file is empty");
  CsvGrid grid;
  std::size_t first = 0;
  {
    const auto cells = split_cells(lines[0]);
    double dummy = 0.0;
    const bool header = std::any_of(cells.begin(), cells.end(), [&](std::string_view c) { return !parse_double(c, dummy); });
    if (header) first = 1;
  }
  for (std::size_t l = first; l < lines.size(); ++l) {
    grid.rows.push_back(split_cells(lines[l]));
    grid.line_numbers.push_back(l + 1);
  }
  if (grid.rows.empty()) throw DataError(std::string(what) + ": no data rows after the header");
  const std::size_t cols = grid.rows[0].size();
  for (std::size_t r = 0; r < grid.rows.size(); ++r)
    if (grid.rows[r].size() != cols)
      throw DataError(std::string(what) + ": line " + std::to_string(grid.line_numbers[r]) + " has " +
                      std::to_string(grid.rows[r].size()) + " columns, expected " + std::to_string(cols) +
                      " (ragged rows)");
  return grid;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json mat_to_json(const arma::mat& m) {
  json rows = json::array();
  for (arma::uword i = 0; i < m.n_rows; ++i) {
    json row = json::array();
    for (arma::uword c = 0; c < m.n_cols; ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json umat_to_json(const arma::umat& m) {
  json rows = json::array();
  for (arma::uword i = 0; i < m.n_rows; ++i) {
    json row = json::array();
    for (arma::uword c = 0; c < m.n_cols; ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vec_to_json(const arma::vec& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

arma::mat mat_from_json(const json& j, std::string_view field) {
  if (!j.is_array()) throw DataError("summary field '" + std::string(field) + "' is not an array of rows");
  if (j.empty()) return {};
  const std::size_t cols = j[0].size();
  arma::mat m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw DataError("summary field '" + std::string(field) + "' row " + std::to_string(i + 1) + " is ragged");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

arma::umat umat_from_json(const json& j, std::string_view field) {
  if (!j.is_array()) throw DataError("summary field '" + std::string(field) + "' is not an array of rows");
  if (j.empty()) return {};
  const std::size_t cols = j[0].size();
  arma::umat m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw DataError("summary field '" + std::string(field) + "' row " + std::to_string(i + 1) + " is ragged");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<arma::uword>();
  }
  return m;
}

arma::vec vec_from_json(const json& j, std::string_view field) {
  if (!j.is_array()) throw DataError("summary field '" + std::string(field) + "' is not an array");
  arma::vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw DataError(std::string("missing field '") + name + "'");
  return *it;
}

json rowvec_json(const arma::rowvec& r) {
  json out = json::array();
  for (double x : r) out.push_back(x);
  return out;
}

void check_format(const json& j, std::string_view expected_format, int supported, std::string_view what) {
  const auto fmt = j.find("format");
  if (fmt == j.end() || !fmt->is_string() || fmt->get<std::string>() != expected_format)
    throw DataError(std::string(what) + ": not a " + std::string(expected_format) + " document");
  const int version = field(j, "version").get<int>();
  if (version != supported)
    throw DataError(std::string(what) + ": format version " + std::to_string(version) +
                    " is not supported (this build reads version " + std::to_string(supported) + ")");
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::random_device rd;
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

arma::umat parse_binary_csv(std::string_view text, std::string_view what) {
  const CsvGrid grid = tokenize_csv(text, what);
  arma::umat m(grid.rows.size(), grid.rows[0].size());
  for (std::size_t r = 0; r < grid.rows.size(); ++r)
    for (std::size_t c = 0; c < grid.rows[r].size(); ++c) {
      const std::string_view cell = trim(unquote(grid.rows[r][c]));
      if (cell != "0" && cell != "1")
        throw DataError(std::string(what) + ": line " + std::to_string(grid.line_numbers[r]) + ", column " +
                        std::to_string(c + 1) + ": value '" + std::string(cell) + "' is not 0 or 1");
      m(r, c) = cell == "1" ? 1U : 0U;
    }
  return m;
}

arma::mat parse_real_csv(std::string_view text, std::string_view what) {
  const CsvGrid grid = tokenize_csv(text, what);
  arma::mat m(grid.rows.size(), grid.rows[0].size());
  for (std::size_t r = 0; r < grid.rows.size(); ++r)
    for (std::size_t c = 0; c < grid.rows[r].size(); ++c) {
      double v = 0.0;
      if (!parse_double(grid.rows[r][c], v))
        throw DataError(std::string(what) + ": line " + std::to_string(grid.line_numbers[r]) + ", column " +
                        std::to_string(c + 1) + ": value '" + std::string(grid.rows[r][c]) + "' is not a number");
      m(r, c) = v;
    }
  return m;
}

QMatrix read_q_matrix(const fs::path& path) {
  const std::string what = "Q-matrix " + path.string();
  try {
    return QMatrix(parse_binary_csv(read_file(path), what));
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (msg.rfind(what, 0) == 0) throw;
    throw DataError(what + ": " + msg);
  }
}

ResponseMatrix read_responses(const fs::path& path) {
  return ResponseMatrix(parse_binary_csv(read_file(path), "responses " + path.string()));
}

arma::mat read_real_matrix(const fs::path& path) { return parse_real_csv(read_file(path), path.string()); }

std::string format_csv(const arma::umat& m, std::string_view column_prefix) {
  std::string out;
  for (arma::uword c = 0; c < m.n_cols; ++c) {
    if (c) out += ',';
    out += std::string(column_prefix) + std::to_string(c + 1);
  }
  out += '\n';
  for (arma::uword i = 0; i < m.n_rows; ++i) {
    for (arma::uword c = 0; c < m.n_cols; ++c) {
      if (c) out += ',';
      out += m(i, c) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::string format_csv(const arma::mat& m, std::string_view column_prefix) {
  std::string out;
  for (arma::uword c = 0; c < m.n_cols; ++c) {
    if (c) out += ',';
    out += std::string(column_prefix) + std::to_string(c + 1);
  }
  out += '\n';
  for (arma::uword i = 0; i < m.n_rows; ++i) {
    for (arma::uword c = 0; c < m.n_cols; ++c) {
      if (c) out += ',';
      out += format_double(m(i, c));
    }
    out += '\n';
  }
  return out;
}

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DataError(std::string(what) + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json item_table_to_json(const ItemParamTable& table) {
  json items = json::array();
  for (std::size_t j = 0; j < table.items(); ++j) {
    json cells = json::array();
    for (double v : table.item(j)) cells.push_back(v);
    items.push_back(std::move(cells));
  }
  return items;
}

ItemParamTable item_table_from_json(const json& j, const QMatrix& q) {
  if (!j.is_array()) throw DataError("item table is not an array of per-item cell lists");
  std::vector<std::vector<double>> cells;
  for (const auto& item : j) cells.push_back(item.get<std::vector<double>>());
  return ItemParamTable(q, std::move(cells));
}

json condition_to_json(const SimulationCondition& c) {
  return json{{"kind", std::string(to_string(c.kind))},
              {"attributes", c.attributes},
              {"q_variant", std::string(to_string(c.q_variant))},
              {"mu_variant", std::string(to_string(c.mu_variant))},
              {"rho", c.rho},
              {"subjects", c.subjects},
              {"replications", c.replications},
              {"seed", c.seed}};
}

SimulationCondition condition_from_json(const json& j) {
  SimulationCondition c;
  c.kind = parse_model_kind(field(j, "kind").get<std::string>());
  c.attributes = field(j, "attributes").get<std::size_t>();
  c.q_variant = parse_q_variant(field(j, "q_variant").get<std::string>());
  c.mu_variant = parse_mu_variant(field(j, "mu_variant").get<std::string>());
  c.rho = field(j, "rho").get<double>();
  c.subjects = field(j, "subjects").get<std::size_t>();
  c.replications = j.value("replications", std::size_t{10});
  c.seed = field(j, "seed").get<std::uint64_t>();
  return c;
}

json summary_to_json(const ChainSummary& s) {
  json theta_sd = json::array();
  for (const auto& item : s.theta_sd) theta_sd.push_back(item);
  json j{{"format", "pmcdm-summary"},
         {"version", kSummaryFormatVersion},
         {"kind", std::string(to_string(s.kind))},
         {"subjects", s.subjects},
         {"items", s.items()},
         {"attributes", s.attributes()},
         {"retained", s.retained},
         {"dina_fallbacks", s.dina_fallbacks},
         {"config",
          {{"iterations", s.config.iterations},
           {"burn_in", s.config.burn_in},
           {"thin", s.config.thin},
           {"chains", s.config.chains},
           {"seed", s.config.seed}}},
         {"q", umat_to_json(s.q.entries())},
         {"theta_mean", item_table_to_json(s.theta_mean)},
         {"theta_sd", theta_sd},
         {"d_hat", mat_to_json(s.d_hat)},
         {"alpha_hat", umat_to_json(s.alpha_hat)}};
  if (is_partial_mastery(s.kind)) {
    j["mu_mean"] = vec_to_json(s.mu_mean);
    j["mu_sd"] = vec_to_json(s.mu_sd);
    j["sigma_mean"] = mat_to_json(s.sigma_mean);
    j["sigma_sd"] = mat_to_json(s.sigma_sd);
  } else {
    j["proportions_mean"] = vec_to_json(s.proportions_mean);
    j["proportions_sd"] = vec_to_json(s.proportions_sd);
    j["profile_probs"] = mat_to_json(s.profile_probs);
  }
  return j;
}

ChainSummary summary_from_json(const json& j) {
  check_format(j, "pmcdm-summary", kSummaryFormatVersion, "summary");
  try {
    ChainSummary s;
    s.kind = parse_model_kind(field(j, "kind").get<std::string>());
    s.subjects = field(j, "subjects").get<std::size_t>();
    s.retained = field(j, "retained").get<std::size_t>();
    s.dina_fallbacks = j.value("dina_fallbacks", std::size_t{0});
    const json& cfg = field(j, "config");
    s.config.iterations = field(cfg, "iterations").get<std::size_t>();
    s.config.burn_in = field(cfg, "burn_in").get<std::size_t>();
    s.config.thin = field(cfg, "thin").get<std::size_t>();
    s.config.chains = field(cfg, "chains").get<std::size_t>();
    s.config.seed = field(cfg, "seed").get<std::uint64_t>();
    s.q = QMatrix(umat_from_json(field(j, "q"), "q"));
    s.theta_mean = item_table_from_json(field(j, "theta_mean"), s.q);
    s.theta_sd = field(j, "theta_sd").get<std::vector<std::vector<double>>>();
    s.d_hat = mat_from_json(field(j, "d_hat"), "d_hat");
    s.alpha_hat = umat_from_json(field(j, "alpha_hat"), "alpha_hat");
    if (s.d_hat.n_rows != s.subjects || s.d_hat.n_cols != s.attributes())
      throw DataError("summary d_hat is " + std::to_string(s.d_hat.n_rows) + "x" + std::to_string(s.d_hat.n_cols) +
                      ", expected " + std::to_string(s.subjects) + "x" + std::to_string(s.attributes()));
    if (is_partial_mastery(s.kind)) {
      s.mu_mean = vec_from_json(field(j, "mu_mean"), "mu_mean");
      s.mu_sd = vec_from_json(field(j, "mu_sd"), "mu_sd");
      s.sigma_mean = mat_from_json(field(j, "sigma_mean"), "sigma_mean");
      s.sigma_sd = mat_from_json(field(j, "sigma_sd"), "sigma_sd");
      if (s.mu_mean.n_elem != s.attributes() || s.sigma_mean.n_rows != s.attributes() ||
          s.sigma_mean.n_cols != s.attributes())
        throw DataError("summary mu/sigma dimensions do not match K = " + std::to_string(s.attributes()));
    } else {
      s.proportions_mean = vec_from_json(field(j, "proportions_mean"), "proportions_mean");
      s.proportions_sd = vec_from_json(field(j, "proportions_sd"), "proportions_sd");
      s.profile_probs = mat_from_json(field(j, "profile_probs"), "profile_probs");
    }
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("summary: malformed field: ") + e.what());
  }
}

void write_summary(const ChainSummary& s, const fs::path& path) {
  write_file_atomic(path, summary_to_json(s).dump(1) + "\n");
}

ChainSummary read_summary(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return summary_from_json(parse_json(text, "summary " + path.string()));
  } catch (const DataError& e) {
    const std::string msg = e.what();
    if (msg.find(path.string()) != std::string::npos) throw;
    throw DataError(path.string() + ": " + msg);
  }
}

std::string config_hash(ModelKind kind, const QMatrix& q, std::size_t subjects, const ChainConfig& config) {
  std::ostringstream key;
  key << to_string(kind) << ';' << subjects << ';' << q.items() << 'x' << q.attributes() << ';';
  for (arma::uword v : q.entries()) key << v;
  key << ';' << config.iterations << ';' << config.burn_in << ';' << config.thin << ';' << config.chains << ';'
      << config.seed;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_chain_archive(const ChainSummary& s) {
  const bool pm = is_partial_mastery(s.kind);
  json header{{"format", "pmcdm-chain"},
              {"version", kArchiveFormatVersion},
              {"kind", std::string(to_string(s.kind))},
              {"subjects", s.subjects},
              {"items", s.items()},
              {"attributes", s.attributes()},
              {"q", umat_to_json(s.q.entries())},
              {"config",
               {{"iterations", s.config.iterations},
                {"burn_in", s.config.burn_in},
                {"thin", s.config.thin},
                {"chains", s.config.chains},
                {"seed", s.config.seed}}},
              {"config_hash", config_hash(s.kind, s.q, s.subjects, s.config)},
              {"records", s.draws.size() * s.config.retained_per_chain()},
              {"theta_names", theta_parameter_names(s.q)}};
  std::string out = header.dump() + "\n";
  for (std::size_t c = 0; c < s.draws.size(); ++c) {
    const ChainDraws& d = s.draws[c];
    for (arma::uword r = 0; r < d.theta.n_rows; ++r) {
      json rec{{"chain", c}, {"iter", s.config.burn_in + (r + 1) * s.config.thin}, {"theta", rowvec_json(d.theta.row(r))}};
      if (pm) {
        rec["mu"] = rowvec_json(d.mu.row(r));
        rec["sigma"] = rowvec_json(d.sigma.row(r));
      } else {
        rec["p"] = rowvec_json(d.proportions.row(r));
      }
      out += rec.dump();
      out += '\n';
    }
  }
  return out;
}

void write_chain_archive(const ChainSummary& s, const fs::path& path) {
  write_file_atomic(path, format_chain_archive(s));
}

ChainArchive parse_chain_archive(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw DataError("chain archive: file is empty");
  const json header = parse_json(lines[0], "chain archive header");
  check_format(header, "pmcdm-chain", kArchiveFormatVersion, "chain archive");
  ChainArchive a;
  try {
    a.kind = parse_model_kind(field(header, "kind").get<std::string>());
    a.subjects = field(header, "subjects").get<std::size_t>();
    a.items = field(header, "items").get<std::size_t>();
    a.attributes = field(header, "attributes").get<std::size_t>();
    const json& cfg = field(header, "config");
    a.config.iterations = field(cfg, "iterations").get<std::size_t>();
    a.config.burn_in = field(cfg, "burn_in").get<std::size_t>();
    a.config.thin = field(cfg, "thin").get<std::size_t>();
    a.config.chains = field(cfg, "chains").get<std::size_t>();
    a.config.seed = field(cfg, "seed").get<std::uint64_t>();
    a.config_hash = field(header, "config_hash").get<std::string>();
    a.theta_names = field(header, "theta_names").get<std::vector<std::string>>();
    const QMatrix q(umat_from_json(field(header, "q"), "q"));
    const std::string expected = config_hash(a.kind, q, a.subjects, a.config);
    if (expected != a.config_hash)
      throw DataError("chain archive: header hash " + a.config_hash + " does not match its configuration (" +
                      expected + ")");
  } catch (const json::exception& e) {
    throw DataError(std::string("chain archive: malformed header: ") + e.what());
  }

  a.config.validate();
  const bool pm = is_partial_mastery(a.kind);
  const std::size_t per_chain = a.config.retained_per_chain();
  const std::size_t records = lines.size() - 1;
  if (records != per_chain * a.config.chains)
    throw DataError("chain archive: " + std::to_string(records) + " records, expected " +
                    std::to_string(per_chain * a.config.chains) + " = chains x (M - B) / T");
  const std::size_t t_cols = a.theta_names.size();
  const std::size_t k = a.attributes;
  a.chains.resize(a.config.chains);
  for (auto& c : a.chains) {
    c.theta.set_size(per_chain, t_cols);
    if (pm) {
      c.mu.set_size(per_chain, k);
      c.sigma.set_size(per_chain, k * k);
    } else {
      c.proportions.set_size(per_chain, std::size_t{1} << k);
    }
  }
  std::vector<std::size_t> filled(a.config.chains, 0);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const json rec = parse_json(lines[l], "chain archive line " + std::to_string(l + 1));
    try {
      const std::size_t c = field(rec, "chain").get<std::size_t>();
      if (c >= a.config.chains || filled[c] >= per_chain)
        throw DataError("chain archive line " + std::to_string(l + 1) + ": unexpected chain index " + std::to_string(c));
      const std::size_t r = filled[c]++;
      auto put = [&](arma::mat& m, const char* name) {
        const auto values = field(rec, name).get<std::vector<double>>();
        if (values.size() != m.n_cols)
          throw DataError("chain archive line " + std::to_string(l + 1) + ": '" + name + "' has " +
                          std::to_string(values.size()) + " values, expected " + std::to_string(m.n_cols));
        for (std::size_t v = 0; v < values.size(); ++v) m(r, v) = values[v];
      };
      ChainDraws& d = a.chains[c];
      put(d.theta, "theta");
      if (pm) {
        put(d.mu, "mu");
        put(d.sigma, "sigma");
      } else {
        put(d.proportions, "p");
      }
    } catch (const json::exception& e) {
      throw DataError("chain archive line " + std::to_string(l + 1) + ": " + e.what());
    }
  }
  return a;
}

ChainArchive read_chain_archive(const fs::path& path) { return parse_chain_archive(read_file(path)); }

const std::map<std::string, std::string>& config_key_table() {
  static const std::map<std::string, std::string> table = {
      {"model", "--model"},
      {"seed", "--seed"},
      {"data.q", "--q"},
      {"data.responses", "--responses"},
      {"output.dir", "--out"},
      {"chain.iters", "--iters"},
      {"chain.burnin", "--burnin"},
      {"chain.thin", "--thin"},
      {"chain.chains", "--chains"},
      {"loglik.mc_draws", "--mc-draws"},
      {"grid.replications", "--replications"},
      {"grid.threads", "--threads"},
      {"sim.attributes", "--attributes"},
      {"sim.q_variant", "--q-variant"},
      {"sim.mu_variant", "--mu-variant"},
      {"sim.rho", "--rho"},
      {"sim.subjects", "--subjects"},
      {"sim.replication", "--replication"},
      {"sim.truth", "--truth-model"},
      {"prior.nu0", "--prior-nu0"},
      {"prior.psi0_scale", "--prior-psi0"},
      {"prior.sigma0_scale", "--prior-sigma0"},
      {"prior.dirichlet", "--prior-dirichlet"},
  };
  return table;
}

std::string config_key_to_flag(std::string_view key) {
  const auto& table = config_key_table();
  const auto it = table.find(std::string(key));
  if (it == table.end()) throw UsageError("unknown configuration key '" + std::string(key) + "'");
  return it->second;
}

std::vector<std::pair<std::string, std::string>> parse_config(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto lines = split_lines(text);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    std::string_view line = lines[l];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(l + 1) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(unquote(trim(line.substr(eq + 1)))));
    if (key.empty()) throw UsageError("config line " + std::to_string(l + 1) + ": empty key");
    config_key_to_flag(key);
    out.emplace_back(key, value);
  }
  return out;
}

}  // namespace pmcdm
