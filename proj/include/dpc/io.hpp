#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpc/core.hpp"

namespace dpc {

namespace detail {

inline bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Splits on any run of commas and whitespace.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\r';
  };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t begin = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > begin) out.push_back(line.substr(begin, i - begin));
  }
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// One point per line, comma- or whitespace-separated coordinates. A single
// leading header line (non-numeric first token) is skipped. Ids follow line
// order. Mixed dimensionality is a parse error that names the line.
inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  Dataset out;
  std::string line;
  std::size_t line_no = 0;
  bool maybe_header = true;  // only the first non-blank line qualifies
  bool dim_known = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (maybe_header) {
      maybe_header = false;
      double probe;
      if (!detail::parse_double(tokens.front(), probe)) continue;
    }
    if (!dim_known) {
      out.dim = static_cast<int>(tokens.size());
      dim_known = true;
    }
    if (static_cast<int>(tokens.size()) != out.dim) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected " + std::to_string(out.dim) +
                               " values, got " + std::to_string(tokens.size()));
    }
    for (const auto& token : tokens) {
      double v;
      if (!detail::parse_double(token, v))
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": invalid number '" + std::string(token) + "'");
      out.coords.push_back(v);
    }
  }
  return out;
}

inline void save_dataset(const Dataset& points, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ',';
      out << detail::format_double(p[k]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing dataset file: " + path);
}

// "id,label" per point; noise is -1, unassigned -2.
inline void export_labels(std::span<const int> labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write label file: " + path);
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << i << ',' << labels[i] << '\n';
  if (!out) throw std::runtime_error("failed writing label file: " + path);
}

inline std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<std::pair<std::size_t, int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    double id_val, label_val;
    if (tokens.size() != 2 || !detail::parse_double(tokens[0], id_val) ||
        !detail::parse_double(tokens[1], label_val))
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected 'id,label'");
    rows.emplace_back(static_cast<std::size_t>(id_val), static_cast<int>(label_val));
  }
  std::vector<int> labels(rows.size(), kUnassigned);
  std::vector<char> seen(rows.size(), 0);
  for (const auto& [id, label] : rows) {
    if (id >= labels.size() || seen[id])
      throw std::runtime_error(path + ": ids must cover 0.." +
                               std::to_string(rows.size() - 1) + " exactly once");
    seen[id] = 1;
    labels[id] = label;
  }
  return labels;
}

// "id,rho,delta" per point. The global peak's delta renders as "inf"; points
// without a density get an empty rho field.
inline void export_decision_graph(const DensityProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write decision graph file: " + path);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << i << ',';
    if (profile.has_rho(i)) out << detail::format_double(profile.rho[i]);
    out << ',';
    if (profile.delta[i] == kInfiniteDelta)
      out << "inf";
    else
      out << detail::format_double(profile.delta[i]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing decision graph file: " + path);
}

}  // namespace dpc
