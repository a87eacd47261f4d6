// Copyright 2026 The peergroup Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lp_reader.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace oracle {
namespace {

bool is_number(const std::string& t) {
  if (t.empty()) return false;
  char* end = nullptr;
  std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

bool is_sense(const std::string& t) { return t == "<=" || t == ">=" || t == "="; }

double value_of(const std::map<std::string, double>& x, const std::string& name) {
  auto it = x.find(name);
  return it == x.end() ? 0.0 : it->second;
}

// Parses "[+|-] [coef] name" sequences starting at tokens[pos] until a sense
// token or the end. Bare numbers become the constant.
std::size_t parse_terms(const std::vector<std::string>& tokens, std::size_t pos,
                        std::map<std::string, double>& terms, double& constant) {
  double sign = 1.0;
  while (pos < tokens.size() && !is_sense(tokens[pos])) {
    const std::string& t = tokens[pos];
    if (t == "+" || t == "-") {
      sign = t == "-" ? -1.0 : 1.0;
      ++pos;
      continue;
    }
    if (is_number(t)) {
      const double coef = std::strtod(t.c_str(), nullptr);
      if (pos + 1 < tokens.size() && !is_sense(tokens[pos + 1]) &&
          tokens[pos + 1] != "+" && tokens[pos + 1] != "-" && !is_number(tokens[pos + 1])) {
        terms[tokens[pos + 1]] += sign * coef;
        pos += 2;
      } else {
        constant += sign * coef;
        ++pos;
      }
    } else {
      terms[t] += sign;
      ++pos;
    }
    sign = 1.0;
  }
  return pos;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace

std::set<std::string> LpFile::variables() const {
  std::set<std::string> names;
  for (const auto& [n, c] : objective) names.insert(n);
  for (const auto& row : rows) {
    for (const auto& [n, c] : row.terms) names.insert(n);
  }
  for (const auto& [n, b] : bounds) names.insert(n);
  names.insert(binaries.begin(), binaries.end());
  return names;
}

double LpFile::objective_value(const std::map<std::string, double>& x) const {
  double total = objective_constant;
  for (const auto& [name, coef] : objective) total += coef * value_of(x, name);
  return total;
}

double LpFile::max_violation(const std::map<std::string, double>& x) const {
  double worst = 0.0;
  for (const LpRow& row : rows) {
    double lhs = 0.0;
    for (const auto& [name, coef] : row.terms) lhs += coef * value_of(x, name);
    if (row.sense == "<=") worst = std::max(worst, lhs - row.rhs);
    if (row.sense == ">=") worst = std::max(worst, row.rhs - lhs);
    if (row.sense == "=") worst = std::max(worst, std::abs(lhs - row.rhs));
  }
  for (const auto& [name, b] : bounds) {
    const double v = value_of(x, name);
    worst = std::max({worst, b.first - v, v - b.second});
  }
  for (const std::string& name : binaries) {
    const double v = value_of(x, name);
    worst = std::max({worst, -v, v - 1.0, std::abs(v - std::round(v))});
  }
  return worst;
}

LpFile parse_lp(const std::string& text) {
  LpFile lp;
  std::map<std::string, std::string> sections;
  std::string current;
  std::istringstream in(text);
  std::string line;
  bool ended = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '\\') continue;
    const std::string trimmed = line.substr(0, line.find_last_not_of(" \r") + 1);
    if (trimmed == "Maximize" || trimmed == "Minimize") {
      lp.maximize = trimmed == "Maximize";
      current = "objective";
    } else if (trimmed == "Subject To" || trimmed == "Bounds" || trimmed == "Binaries" ||
               trimmed == "General") {
      current = trimmed;
    } else if (trimmed == "End") {
      ended = true;
      break;
    } else {
      if (current.empty()) throw std::runtime_error("content before any section: " + line);
      sections[current] += line + "\n";
    }
  }
  if (!ended) throw std::runtime_error("missing End");

  {
    auto tokens = tokenize(sections["objective"]);
    if (tokens.empty() || tokens[0].back() != ':') throw std::runtime_error("objective needs a name");
    const std::size_t pos = parse_terms(tokens, 1, lp.objective, lp.objective_constant);
    if (pos != tokens.size()) throw std::runtime_error("stray token in objective");
  }
  {
    auto tokens = tokenize(sections["Subject To"]);
    std::size_t pos = 0;
    while (pos < tokens.size()) {
      LpRow row;
      if (tokens[pos].back() != ':') throw std::runtime_error("row without name at " + tokens[pos]);
      row.name = tokens[pos].substr(0, tokens[pos].size() - 1);
      double constant = 0.0;
      pos = parse_terms(tokens, pos + 1, row.terms, constant);
      if (pos + 1 >= tokens.size()) throw std::runtime_error("row " + row.name + " has no rhs");
      row.sense = tokens[pos];
      row.rhs = std::strtod(tokens[pos + 1].c_str(), nullptr) - constant;
      pos += 2;
      lp.rows.push_back(std::move(row));
    }
  }
  {
    std::istringstream bounds(sections["Bounds"]);
    while (std::getline(bounds, line)) {
      auto t = tokenize(line);
      if (t.empty()) continue;
      if (t.size() != 5 || t[1] != "<=" || t[3] != "<=") {
        throw std::runtime_error("unsupported bound line: " + line);
      }
      lp.bounds[t[2]] = {std::strtod(t[0].c_str(), nullptr), std::strtod(t[4].c_str(), nullptr)};
    }
  }
  for (const std::string& name : tokenize(sections["Binaries"])) lp.binaries.insert(name);
  return lp;
}

}  // namespace oracle
