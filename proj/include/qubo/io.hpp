// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qubo/analysis.hpp"
#include "qubo/anneal.hpp"
#include "qubo/enumerate.hpp"
#include "qubo/errors.hpp"
#include "qubo/model.hpp"
#include "qubo/twosat.hpp"

namespace qubo {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

inline double parse_double(const std::string& tok, std::size_t line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a numeric value, got '" + tok + "'", line_no);
  }
  if (pos != tok.size()) throw ParseError("trailing characters in number '" + tok + "'", line_no);
  return v;
}

inline long long parse_int(const std::string& tok, std::size_t line_no) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + tok + "'", line_no);
  }
  if (pos != tok.size()) throw ParseError("trailing characters in integer '" + tok + "'", line_no);
  return v;
}

}  // namespace detail

// --------------------------------------------------------------------------
// .qubo text format: 'c' comment lines, one 'p qubo 0 maxNodes nDiagonals
// nElements' header, then '<i> <j> <value>' entries with 0-based i <= j.
// --------------------------------------------------------------------------

inline QuboProblem parse_qubo_text(const std::string& text,
                                   std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  int max_nodes = 0;
  long long n_diag_hdr = 0, n_elem_hdr = 0;
  std::optional<QuboProblem> problem;
  std::vector<std::vector<bool>> seen;
  long long n_diag = 0, n_elem = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c') continue;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "p") {
      if (have_header) throw ParseError("duplicate problem header", line_no);
      if (toks.size() != 6 || toks[1] != "qubo" || toks[2] != "0")
        throw ParseError("malformed header; expected 'p qubo 0 <maxNodes> <nDiagonals> <nElements>'",
                         line_no);
      max_nodes = static_cast<int>(detail::parse_int(toks[3], line_no));
      n_diag_hdr = detail::parse_int(toks[4], line_no);
      n_elem_hdr = detail::parse_int(toks[5], line_no);
      if (max_nodes < 1 || max_nodes > kMaxVariables)
        throw ParseError("maxNodes must be in 1..64", line_no);
      problem.emplace(max_nodes);
      seen.assign(static_cast<std::size_t>(max_nodes),
                  std::vector<bool>(static_cast<std::size_t>(max_nodes), false));
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("entry before problem header", line_no);
    if (toks.size() != 3) throw ParseError("expected '<i> <j> <value>'", line_no);
    long long i = detail::parse_int(toks[0], line_no);
    long long j = detail::parse_int(toks[1], line_no);
    double v = detail::parse_double(toks[2], line_no);
    if (i < 0 || j < 0 || i >= max_nodes || j >= max_nodes)
      throw ParseError("index out of range (maxNodes = " + std::to_string(max_nodes) + ")", line_no);
    if (i > j) throw ParseError("need i <= j in entry", line_no);
    if (seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] && warnings)
      warnings->push_back("line " + std::to_string(line_no) + ": duplicate entry (" +
                          std::to_string(i) + "," + std::to_string(j) + "); last value wins");
    if (!seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
      if (i == j)
        ++n_diag;
      else
        ++n_elem;
    }
    seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    problem->set(static_cast<int>(i), static_cast<int>(j), v);
  }
  if (!have_header) throw ParseError("missing problem header", line_no ? line_no : 1);
  if (warnings && (n_diag != n_diag_hdr || n_elem != n_elem_hdr))
    warnings->push_back("header declares " + std::to_string(n_diag_hdr) + " diagonals / " +
                        std::to_string(n_elem_hdr) + " elements but file has " +
                        std::to_string(n_diag) + " / " + std::to_string(n_elem));
  return *problem;
}

/// Emits nonzero diagonal entries ascending, then nonzero off-diagonals in
/// (i, j) order, with 17 significant digits; exact parse round-trip.
inline std::string write_qubo_text(const QuboProblem& p) {
  const int n = p.n();
  long long n_diag = 0, n_elem = 0;
  for (int i = 0; i < n; ++i)
    if (p.q(i, i) != 0.0) ++n_diag;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (p.q(i, j) != 0.0) ++n_elem;
  std::ostringstream out;
  out << "p qubo 0 " << n << ' ' << n_diag << ' ' << n_elem << '\n';
  for (int i = 0; i < n; ++i)
    if (p.q(i, i) != 0.0)
      out << i << ' ' << i << ' ' << detail::format_g17(p.q(i, i)) << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (p.q(i, j) != 0.0)
        out << i << ' ' << j << ' ' << detail::format_g17(p.q(i, j)) << '\n';
  return out.str();
}

// --------------------------------------------------------------------------
// Ising model JSON: {"n", "h", "j" (1-based [i, j, value] triples, i < j),
// "offset", "meta", "schema_version"}.
// --------------------------------------------------------------------------

struct ModelDocument {
  IsingModel model;
  nlohmann::json meta;
};

inline std::string write_model_json(const IsingModel& m, const nlohmann::json& meta = {}) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n"] = m.n();
  doc["h"] = m.fields();
  auto j = nlohmann::json::array();
  for (const auto& [ij, v] : m.couplings())
    j.push_back({ij.first + 1, ij.second + 1, v});
  doc["j"] = j;
  doc["offset"] = m.offset();
  if (!meta.is_null() && !meta.empty()) doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

inline ModelDocument read_model_json(const std::string& text,
                                     std::vector<std::string>* warnings = nullptr) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$: model document must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw ParseError("$.n: missing or not an integer");
  const int n = doc["n"].get<int>();
  if (n < 1 || n > kMaxVariables) throw ParseError("$.n: must be in 1..64");
  IsingModel m(n);
  if (!doc.contains("h") || !doc["h"].is_array() || doc["h"].size() != static_cast<std::size_t>(n))
    throw ParseError("$.h: must be an array of length n");
  for (int i = 0; i < n; ++i) {
    const auto& hv = doc["h"][static_cast<std::size_t>(i)];
    if (!hv.is_number()) throw ParseError("$.h[" + std::to_string(i) + "]: must be a number");
    m.set_field(i, hv.get<double>());
  }
  if (doc.contains("j")) {
    if (!doc["j"].is_array()) throw ParseError("$.j: must be an array");
    for (std::size_t t = 0; t < doc["j"].size(); ++t) {
      const auto& e = doc["j"][t];
      const std::string path = "$.j[" + std::to_string(t) + "]";
      if (!e.is_array() || e.size() != 3) throw ParseError(path + ": must be [i, j, value]");
      if (!e[0].is_number_integer() || !e[1].is_number_integer() || !e[2].is_number())
        throw ParseError(path + ": must be [int, int, number]");
      const int i = e[0].get<int>(), j = e[1].get<int>();
      if (i < 1 || j < 1 || i > n || j > n) throw ParseError(path + ": indices must be in 1..n");
      if (i >= j) throw ParseError(path + ": need i < j");
      m.set_coupling(i - 1, j - 1, e[2].get<double>());
    }
  }
  if (doc.contains("offset")) {
    if (!doc["offset"].is_number()) throw ParseError("$.offset: must be a number");
    m.set_offset(doc["offset"].get<double>());
  } else if (warnings) {
    warnings->push_back("model document has no \"offset\"; defaulting to 0");
  }
  ModelDocument out{std::move(m), doc.value("meta", nlohmann::json::object())};
  return out;
}

// --------------------------------------------------------------------------
// Spectrum JSON. Configurations are fixed-width binary strings, variable 1
// leftmost. `energy_shift` records the constant added to raw QUBO costs (the
// model's own constant minus the conversion offset) so energies are in the
// input model's units.
// --------------------------------------------------------------------------

inline std::string write_spectrum_json(const LowEnergySpectrum& s, double energy_shift = 0.0,
                                       const nlohmann::json& meta = {}) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n"] = s.n;
  doc["k_requested"] = s.k_requested;
  doc["total_enumerated"] = s.total_enumerated;
  doc["min_cost"] = s.min_cost;
  doc["max_cost"] = s.max_cost;
  if (std::isfinite(s.next_lowest_cost))
    doc["next_lowest_cost"] = s.next_lowest_cost;
  else
    doc["next_lowest_cost"] = nullptr;
  doc["min_config"] = Configuration(s.min_config, s.n).to_string();
  doc["max_config"] = Configuration(s.max_config, s.n).to_string();
  doc["ground_degeneracy"] = s.ground_degeneracy;
  doc["energy_shift"] = energy_shift;
  auto states = nlohmann::json::array();
  for (const auto& st : s.states)
    states.push_back({{"energy", st.energy}, {"config", Configuration(st.config, s.n).to_string()}});
  doc["states"] = states;
  if (!meta.is_null() && !meta.empty()) doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

struct SpectrumDocument {
  LowEnergySpectrum spectrum;
  double energy_shift = 0.0;
  nlohmann::json meta;
};

inline SpectrumDocument read_spectrum_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  SpectrumDocument out;
  LowEnergySpectrum& s = out.spectrum;
  if (!doc.contains("n") || !doc["n"].is_number_integer()) throw ParseError("$.n: missing");
  s.n = doc["n"].get<int>();
  s.k_requested = doc.value("k_requested", std::size_t{0});
  s.total_enumerated = doc.value("total_enumerated", std::uint64_t{0});
  s.min_cost = doc.value("min_cost", 0.0);
  s.max_cost = doc.value("max_cost", 0.0);
  if (doc.contains("next_lowest_cost") && !doc["next_lowest_cost"].is_null())
    s.next_lowest_cost = doc["next_lowest_cost"].get<double>();
  else
    s.next_lowest_cost = std::numeric_limits<double>::infinity();
  s.min_config = Configuration::from_string(doc.value("min_config", std::string())).bits;
  s.max_config = Configuration::from_string(doc.value("max_config", std::string())).bits;
  s.ground_degeneracy = doc.value("ground_degeneracy", std::uint64_t{0});
  out.energy_shift = doc.value("energy_shift", 0.0);
  if (!doc.contains("states") || !doc["states"].is_array())
    throw ParseError("$.states: missing or not an array");
  for (std::size_t t = 0; t < doc["states"].size(); ++t) {
    const auto& e = doc["states"][t];
    const std::string path = "$.states[" + std::to_string(t) + "]";
    if (!e.contains("energy") || !e["energy"].is_number())
      throw ParseError(path + ".energy: must be a number");
    if (!e.contains("config") || !e["config"].is_string())
      throw ParseError(path + ".config: must be a string");
    Configuration c = Configuration::from_string(e["config"].get<std::string>());
    if (c.n != s.n) throw ParseError(path + ".config: width does not match n");
    s.states.push_back(SpectrumState{e["energy"].get<double>(), c.bits});
  }
  out.meta = doc.value("meta", nlohmann::json::object());
  return out;
}

// --------------------------------------------------------------------------
// CSV: success records and histograms.
// --------------------------------------------------------------------------

inline std::string write_success_csv(const std::vector<SuccessRecord>& records) {
  std::ostringstream out;
  out << "class,n,instance_id,samples,successes\n";
  for (const auto& r : records)
    out << to_string(r.class_label) << ',' << r.n << ',' << r.instance_id << ',' << r.samples
        << ',' << r.successes << '\n';
  return out.str();
}

inline std::vector<SuccessRecord> read_success_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SuccessRecord> out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("class,", 0) == 0) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (f.size() != 5) throw ParseError("expected 'class,n,instance_id,samples,successes'", line_no);
    SuccessRecord r;
    r.class_label = problem_class_from_string(f[0]);
    r.n = static_cast<int>(detail::parse_int(f[1], line_no));
    r.instance_id = f[2];
    r.samples = static_cast<std::uint64_t>(detail::parse_int(f[3], line_no));
    r.successes = static_cast<std::uint64_t>(detail::parse_int(f[4], line_no));
    if (r.successes > r.samples) throw ParseError("successes exceed samples", line_no);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string write_histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "value,count\n";
  for (const auto& [v, c] : h.entries) out << detail::format_g17(v) << ',' << c << '\n';
  return out.str();
}

inline std::string write_fit_csv(const ScalingFit& fit, const std::string& class_label) {
  std::ostringstream out;
  out << "class,n_min,n_max,intercept,exponent,sse,crossover_n\n";
  for (const auto& seg : fit.segments) {
    out << class_label << ',' << detail::format_g17(seg.n_min) << ','
        << detail::format_g17(seg.n_max) << ',' << detail::format_g17(seg.intercept) << ','
        << detail::format_g17(seg.exponent) << ',' << detail::format_g17(seg.sse) << ',';
    if (fit.crossover_n) out << detail::format_g17(*fit.crossover_n);
    out << '\n';
  }
  return out.str();
}

// --------------------------------------------------------------------------
// File helpers and experiment manifests.
// --------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

/// Everything needed to regenerate the outputs of a CLI invocation
/// bit-identically: the subcommand, its parameters, and the output paths.
inline std::string write_manifest_json(const std::string& command, const nlohmann::json& params,
                                       const std::vector<std::string>& outputs) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool_version"] = kToolVersion;
  doc["command"] = command;
  doc["params"] = params;
  doc["outputs"] = outputs;
  return doc.dump(2) + "\n";
}

/// Clause list metadata for 2SAT-derived models: [[var_a, neg_a, var_b, neg_b], ...],
/// 1-based variables.
inline nlohmann::json clauses_to_json(const TwoSatInstance& t) {
  auto arr = nlohmann::json::array();
  for (const auto& c : t.clauses)
    arr.push_back({c.a.var + 1, c.a.negated, c.b.var + 1, c.b.negated});
  return arr;
}

inline TwoSatInstance clauses_from_json(int n, const nlohmann::json& arr) {
  TwoSatInstance t;
  t.n = n;
  if (!arr.is_array()) throw ParseError("$.meta.clauses: must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    if (!e.is_array() || e.size() != 4)
      throw ParseError("$.meta.clauses[" + std::to_string(i) + "]: must be [var,neg,var,neg]");
    t.clauses.push_back(Clause{Literal{e[0].get<int>() - 1, e[1].get<bool>()},
                               Literal{e[2].get<int>() - 1, e[3].get<bool>()}});
  }
  t.validate();
  return t;
}

}  // namespace qubo
