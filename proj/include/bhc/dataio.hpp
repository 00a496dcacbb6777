#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bhc/continuation.hpp"
#include "bhc/errors.hpp"
#include "bhc/matrix.hpp"

namespace bhc {

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(std::move(tok));
  return out;
}

inline bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + tok.size() && tok.size() > 0;
}

inline double parse_double_or_throw(const std::string& tok, std::size_t line) {
  double v;
  if (!parse_double(tok, v)) throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace detail

// TSPLIB node-coordinate reader (EUC_2D instances such as EIL76/PR1002):
// header keys up to NODE_COORD_SECTION, then "index x y" lines with 1-based
// gap-free indices. Returns the m x 2 node matrix in file order.
inline Matrix parse_tsplib(const std::string& text) {
  const std::vector<std::string> lines = detail::split_lines(text);
  long declared_dim = -1;
  std::string edge_type;
  std::size_t i = 0;
  bool found_section = false;
  for (; i < lines.size(); ++i) {
    const std::string line = detail::trim(lines[i]);
    if (line.empty()) continue;
    if (line == "NODE_COORD_SECTION") {
      found_section = true;
      ++i;
      break;
    }
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = detail::trim(line.substr(0, colon));
    const std::string value = detail::trim(line.substr(colon + 1));
    if (key == "DIMENSION") declared_dim = std::strtol(value.c_str(), nullptr, 10);
    if (key == "EDGE_WEIGHT_TYPE") edge_type = value;
  }
  if (!found_section) throw ParseError("missing NODE_COORD_SECTION");
  if (!edge_type.empty() && edge_type != "EUC_2D")
    throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + edge_type +
                     "' (only EUC_2D node-coordinate files are supported)");

  std::vector<double> entries;
  std::size_t count = 0;
  for (; i < lines.size(); ++i) {
    const std::string line = detail::trim(lines[i]);
    if (line.empty()) continue;
    if (line == "EOF") break;
    const std::vector<std::string> toks = detail::split_ws(line);
    if (toks.size() != 3)
      throw ParseError("expected 'index x y', got '" + line + "'", i + 1);
    const double idx = detail::parse_double_or_throw(toks[0], i + 1);
    if (idx != static_cast<double>(count + 1))
      throw ParseError("node indices must be 1-based and gap-free; expected " +
                           std::to_string(count + 1),
                       i + 1);
    const double x = detail::parse_double_or_throw(toks[1], i + 1);
    const double y = detail::parse_double_or_throw(toks[2], i + 1);
    if (!std::isfinite(x) || !std::isfinite(y))
      throw ParseError("non-finite coordinate", i + 1);
    entries.push_back(x);
    entries.push_back(y);
    ++count;
  }
  if (count == 0) throw ParseError("no nodes in NODE_COORD_SECTION");
  if (declared_dim >= 0 && static_cast<std::size_t>(declared_dim) != count)
    throw ParseError("DIMENSION is " + std::to_string(declared_dim) + " but file has " +
                     std::to_string(count) + " nodes");
  return Matrix(count, 2, std::move(entries));
}

// Rectangular numeric CSV (comma or whitespace separated), with an optional
// single non-numeric header line.
inline Matrix parse_csv(const std::string& text) {
  const std::vector<std::string> lines = detail::split_lines(text);
  std::vector<double> entries;
  std::size_t rows = 0, cols = 0;
  bool header_allowed = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = detail::trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> toks;
    if (line.find(',') != std::string::npos) {
      std::istringstream iss(line);
      std::string tok;
      while (std::getline(iss, tok, ',')) toks.push_back(detail::trim(tok));
    } else {
      toks = detail::split_ws(line);
    }
    std::vector<double> row;
    row.reserve(toks.size());
    bool numeric = true;
    for (const std::string& t : toks) {
      double v;
      if (!detail::parse_double(t, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError("non-numeric value", i + 1);
    }
    header_allowed = false;
    for (double v : row)
      if (!std::isfinite(v)) throw ParseError("non-finite coordinate", i + 1);
    if (rows == 0) {
      cols = row.size();
      if (cols == 0) throw ParseError("empty row", i + 1);
    } else if (row.size() != cols) {
      throw ParseError("ragged row: expected " + std::to_string(cols) + " values, got " +
                           std::to_string(row.size()),
                       i + 1);
    }
    entries.insert(entries.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows");
  return Matrix(rows, cols, std::move(entries));
}

inline std::string to_csv(const Matrix& a) {
  std::string out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out += ',';
      out += detail::fmt(a(i, j));
    }
    out += '\n';
  }
  return out;
}

// Reads a point file, sniffing TSPLIB files by their section marker and
// treating everything else as CSV.
inline Matrix read_points_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find("NODE_COORD_SECTION") != std::string::npos) return parse_tsplib(text);
  return parse_csv(text);
}

// --- run reports ----------------------------------------------------------
//
// Line-oriented "key: value" header in a fixed key order, then TSV blocks
// for the outer trace, the final centers, and (when present) the radial
// profile. Every field is deterministic for a given (config, seed); wall
// time deliberately never enters the file. Node indices are 0-based rows
// of the parsed data matrix.

inline std::string format_report(const SolveReport& r) {
  using detail::fmt;
  std::string out;
  out += "bhc report v1\n";
  out += "model: " + model_name(r.model) + "\n";
  out += "seed: " + std::to_string(r.seed) + "\n";
  out += "start_index: " + std::to_string(r.start_index) + "\n";
  out += "gamma: " + fmt(r.gamma) + "\n";
  out += "radius: " + fmt(r.radius) + "\n";
  out += "k: " + std::to_string(r.k) + "\n";
  out += "m: " + std::to_string(r.m) + "\n";
  out += "n: " + std::to_string(r.n) + "\n";
  out += "lambda0: " + fmt(r.schedule.lambda0) + "\n";
  out += "sigma1: " + fmt(r.schedule.sigma1) + "\n";
  out += "mu0: " + fmt(r.schedule.mu0) + "\n";
  out += "sigma2: " + fmt(r.schedule.sigma2) + "\n";
  out += "lambda_max: " + fmt(r.schedule.lambda_max) + "\n";
  out += "mu_min: " + fmt(r.schedule.mu_min) + "\n";
  out += "n_outer: " + std::to_string(r.schedule.n_outer) + "\n";
  out += "n_inner: " + std::to_string(r.schedule.n_inner) + "\n";
  out += "tol: " + fmt(r.tol) + "\n";
  out += "total_inner_iterations: " + std::to_string(r.total_inner_iterations) + "\n";
  out += "snapped_cost: " + fmt(r.snapped_cost) + "\n";
  out += "cluster_centers:";
  for (std::size_t c : r.snapped.cluster_centers) out += " " + std::to_string(c);
  out += "\n";
  out += "total_center: " + std::to_string(r.snapped.total_center) + "\n";
  out += "assignment:";
  for (std::size_t s : r.snapped.assignment) out += " " + std::to_string(s);
  out += "\n";
  out += "smoothed_cost_trace:";
  for (double v : r.smoothed_cost_trace()) out += " " + fmt(v);
  out += "\n";
  out += "outer_trace:\n";
  out += "lambda\tmu\tinner_iterations\tobjective\n";
  for (const OuterTrace& o : r.outer)
    out += fmt(o.lambda) + "\t" + fmt(o.mu) + "\t" + std::to_string(o.inner_iterations) + "\t" +
           fmt(o.objective) + "\n";
  out += "end outer_trace\n";
  out += "final_centers:\n";
  for (std::size_t l = 0; l < r.final_centers.rows(); ++l) {
    for (std::size_t j = 0; j < r.final_centers.cols(); ++j) {
      if (j) out += '\t';
      out += fmt(r.final_centers(l, j));
    }
    out += '\n';
  }
  out += "end final_centers\n";
  if (!r.radial_profile.empty()) {
    out += "radial_profile:\n";
    out += "radius\tcost\n";
    for (const auto& [radius, cost] : r.radial_profile)
      out += fmt(radius) + "\t" + fmt(cost) + "\n";
    out += "end radial_profile\n";
  }
  out += "end report\n";
  return out;
}

inline void emit_report(const SolveReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << format_report(r);
  if (!out) throw IoError("write failed for '" + path + "'");
}

// Parses a report written by format_report back into a SolveReport (all
// serialized fields; oracles and timing are not part of the file).
inline SolveReport parse_report(const std::string& text) {
  const std::vector<std::string> lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != "bhc report v1") throw ParseError("not a bhc report", 1);
  SolveReport r;
  std::vector<double> cost_trace;
  std::size_t i = 1;
  auto need_value = [&](const std::string& line, std::size_t ln) {
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", ln);
    return std::make_pair(detail::trim(line.substr(0, colon)),
                          detail::trim(line.substr(colon + 1)));
  };
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line == "end report") break;
    if (line == "outer_trace:") {
      ++i;  // column header
      for (++i; i < lines.size() && lines[i] != "end outer_trace"; ++i) {
        const auto toks = detail::split_ws(lines[i]);
        if (toks.size() != 4) throw ParseError("bad outer_trace row", i + 1);
        OuterTrace o;
        o.lambda = detail::parse_double_or_throw(toks[0], i + 1);
        o.mu = detail::parse_double_or_throw(toks[1], i + 1);
        o.inner_iterations = static_cast<std::size_t>(
            detail::parse_double_or_throw(toks[2], i + 1));
        o.objective = detail::parse_double_or_throw(toks[3], i + 1);
        r.outer.push_back(o);
      }
      continue;
    }
    if (line == "final_centers:") {
      std::vector<double> entries;
      std::size_t rows = 0, cols = 0;
      for (++i; i < lines.size() && lines[i] != "end final_centers"; ++i) {
        const auto toks = detail::split_ws(lines[i]);
        if (rows == 0) cols = toks.size();
        if (toks.size() != cols) throw ParseError("ragged center row", i + 1);
        for (const std::string& t : toks)
          entries.push_back(detail::parse_double_or_throw(t, i + 1));
        ++rows;
      }
      r.final_centers = Matrix(rows, cols, std::move(entries));
      continue;
    }
    if (line == "radial_profile:") {
      ++i;  // column header
      for (++i; i < lines.size() && lines[i] != "end radial_profile"; ++i) {
        const auto toks = detail::split_ws(lines[i]);
        if (toks.size() != 2) throw ParseError("bad radial_profile row", i + 1);
        r.radial_profile.emplace_back(detail::parse_double_or_throw(toks[0], i + 1),
                                      detail::parse_double_or_throw(toks[1], i + 1));
      }
      continue;
    }
    const auto [key, value] = need_value(line, i + 1);
    if (key == "model") {
      r.model = value == "I" ? Model::one : Model::two;
    } else if (key == "seed") {
      r.seed = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "start_index") {
      r.start_index = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "gamma") {
      r.gamma = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "radius") {
      r.radius = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "k") {
      r.k = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "m") {
      r.m = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "n") {
      r.n = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "lambda0") {
      r.schedule.lambda0 = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "sigma1") {
      r.schedule.sigma1 = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "mu0") {
      r.schedule.mu0 = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "sigma2") {
      r.schedule.sigma2 = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "lambda_max") {
      r.schedule.lambda_max = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "mu_min") {
      r.schedule.mu_min = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "n_outer") {
      r.schedule.n_outer = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "n_inner") {
      r.schedule.n_inner = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "tol") {
      r.tol = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "total_inner_iterations") {
      r.total_inner_iterations = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "snapped_cost") {
      r.snapped_cost = detail::parse_double_or_throw(value, i + 1);
    } else if (key == "cluster_centers") {
      for (const std::string& t : detail::split_ws(value))
        r.snapped.cluster_centers.push_back(std::strtoull(t.c_str(), nullptr, 10));
    } else if (key == "total_center") {
      r.snapped.total_center = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "assignment") {
      for (const std::string& t : detail::split_ws(value))
        r.snapped.assignment.push_back(std::strtoull(t.c_str(), nullptr, 10));
    } else if (key == "smoothed_cost_trace") {
      for (const std::string& t : detail::split_ws(value))
        cost_trace.push_back(detail::parse_double_or_throw(t, i + 1));
    }
  }
  r.snapped.cost = r.snapped_cost;
  if (r.outer.empty())
    for (double v : cost_trace) r.outer.push_back({0.0, 0.0, 0, v, {}});
  return r;
}

}  // namespace bhc
