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

#include "peergroup/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <fmt/format.h>

#include "peergroup/dynamics.hpp"
#include "peergroup/error.hpp"

namespace peergroup {
namespace {

bool plain_name(const std::string& id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) != 0;
  });
}

std::vector<std::string> node_names(const IndexedNetwork& net) {
  std::vector<std::string> names;
  bool plain = true;
  for (int i = 0; i < net.size(); ++i) plain = plain && plain_name(net.id(i));
  for (int i = 0; i < net.size(); ++i) {
    names.push_back(plain ? net.id(i) : fmt::format("v{}", i));
  }
  return names;
}

std::string number(double v) { return fmt::format("{:.17g}", v); }

struct Names {
  const std::vector<std::string>& node;
  std::string z(int a, int b) const {
    if (a > b) std::swap(a, b);
    return fmt::format("z_{}_{}", node[a], node[b]);
  }
  std::string pair(const char* prefix, int i, int j) const {
    return fmt::format("{}_{}_{}", prefix, node[i], node[j]);
  }
  std::string q(const char* prefix, int k, int i, int j) const {
    return fmt::format("{}_{}_{}_{}", prefix, node[k], node[i], node[j]);
  }
  std::string r(int j) const { return fmt::format("r_{}", node[j]); }
};

}  // namespace

int MilpModel::add_variable(std::string name, VarKind kind, double lower,
                            double upper) {
  const int index = static_cast<int>(variables.size());
  auto [it, inserted] = index_.emplace(name, index);
  if (!inserted) {
    throw Error(ErrorCode::kBadInput, fmt::format("duplicate variable '{}'", name));
  }
  variables.push_back({std::move(name), kind, lower, upper});
  return index;
}

std::optional<int> MilpModel::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double MilpModel::objective_value(std::span<const double> values) const {
  double total = objective_constant;
  for (const LinearTerm& t : objective) total += t.coef * values[t.var];
  return total;
}

double MilpModel::max_violation(std::span<const double> values) const {
  double worst = 0.0;
  for (std::size_t v = 0; v < variables.size(); ++v) {
    worst = std::max({worst, variables[v].lower - values[v], values[v] - variables[v].upper});
    if (variables[v].kind == VarKind::kBinary) {
      worst = std::max(worst, std::abs(values[v] - std::round(values[v])));
    }
  }
  for (const MilpConstraint& row : constraints) {
    double lhs = 0.0;
    for (const LinearTerm& t : row.terms) lhs += t.coef * values[t.var];
    switch (row.sense) {
      case Sense::kLessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Sense::kGreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Sense::kEqual: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

std::string instance_hash(const SocialNetwork& net) {
  std::vector<std::string> lines;
  for (const Node& node : net.nodes) {
    lines.push_back(fmt::format("n\x1f{}\x1f{}", node.id,
                                node.behavior == Behavior::kUser ? 1 : 0));
  }
  for (const Arc& arc : net.arcs) {
    lines.push_back(fmt::format("a\x1f{}\x1f{}\x1f{}", arc.from, arc.to,
                                arc.strength == TieStrength::kStrong ? 1 : 0));
  }
  std::sort(lines.begin(), lines.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& line : lines) {
    for (unsigned char c : line) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1e;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

MilpModel build_milp(const SocialNetwork& net, const ModelParams& params,
                     int group_count) {
  validate_params(params);
  const IndexedNetwork g(net);
  const int n = g.size();
  const auto counts = feasible_group_counts(n, params.capacity);
  if (std::find(counts.begin(), counts.end(), group_count) == counts.end()) {
    throw Error(ErrorCode::kInfeasibleS,
                fmt::format("{} groups cannot hold {} nodes within {}..{}", group_count,
                            n, params.capacity.lo, params.capacity.hi));
  }
  const std::vector<std::string> node = node_names(g);
  const Names names{node};
  const double ws = params.weight_strong;
  const double ww = params.weight_weak;

  MilpModel model;
  model.metadata["instance_hash"] = instance_hash(net);
  model.metadata["groups"] = std::to_string(group_count);
  model.metadata["capacity"] =
      fmt::format("{}..{}", params.capacity.lo, params.capacity.hi);
  model.metadata["omega_user_given_non"] = number(params.omega_user_given_non);
  model.metadata["omega_non_given_user"] = number(params.omega_non_given_user);
  model.metadata["weight_strong"] = number(ws);
  model.metadata["weight_weak"] = number(ww);

  // Variables, in a fixed order.
  std::vector<int> z(static_cast<std::size_t>(n) * n, -1);
  auto zv = [&](int a, int b) { return z[static_cast<std::size_t>(std::min(a, b)) * n + std::max(a, b)]; };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      z[static_cast<std::size_t>(a) * n + b] =
          model.add_variable(names.z(a, b), VarKind::kBinary, 0, 1);
    }
  }
  std::vector<int> xs(static_cast<std::size_t>(n) * n, -1), xw(xs), xn(xs), w(xs);
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      xs[at(i, j)] = model.add_variable(names.pair("xs", i, j), VarKind::kBinary, 0, 1);
      xw[at(i, j)] = model.add_variable(names.pair("xw", i, j), VarKind::kBinary, 0, 1);
      xn[at(i, j)] = model.add_variable(names.pair("xn", i, j), VarKind::kBinary, 0, 1);
      w[at(i, j)] = model.add_variable(names.pair("w", i, j), VarKind::kContinuous, 0, 1);
    }
  }
  std::vector<int> r(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) r[j] = model.add_variable(names.r(j), VarKind::kBinary, 0, 1);

  auto add_row = [&](std::string name, std::vector<LinearTerm> terms, Sense sense,
                     double rhs) {
    std::erase_if(terms, [](const LinearTerm& t) { return t.coef == 0.0; });
    model.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
  };

  // Capacity: lo <= 1 + sum_{i != j} z_ij <= hi, with z_jj = 1 folded in.
  for (int j = 0; j < n; ++j) {
    std::vector<LinearTerm> terms;
    for (int i = 0; i < n; ++i) {
      if (i != j) terms.push_back({zv(i, j), 1.0});
    }
    add_row(fmt::format("cap_lo_{}", node[j]), terms, Sense::kGreaterEqual,
            params.capacity.lo - 1.0);
    add_row(fmt::format("cap_hi_{}", node[j]), terms, Sense::kLessEqual,
            params.capacity.hi - 1.0);
  }
  // Transitivity: z_ij + z_jk - z_ki <= 1 over ordered triples.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        add_row(fmt::format("tri_{}_{}_{}", node[i], node[j], node[k]),
                {{zv(i, j), 1.0}, {zv(j, k), 1.0}, {zv(k, i), -1.0}},
                Sense::kLessEqual, 1.0);
      }
    }
  }
  // Exactly group_count groups, counted through their smallest members:
  // r_j = 1 iff no i < j shares j's group.
  for (int j = 0; j < n; ++j) {
    std::vector<LinearTerm> terms{{r[j], 1.0}};
    for (int i = 0; i < j; ++i) {
      terms.push_back({zv(i, j), 1.0});
      add_row(fmt::format("rep_hi_{}_{}", node[i], node[j]),
              {{r[j], 1.0}, {zv(i, j), 1.0}}, Sense::kLessEqual, 1.0);
    }
    add_row(fmt::format("rep_lo_{}", node[j]), terms, Sense::kGreaterEqual, 1.0);
  }
  {
    std::vector<LinearTerm> terms;
    for (int j = 0; j < n; ++j) terms.push_back({r[j], 1.0});
    add_row("group_count", terms, Sense::kEqual, group_count);
  }

  // Post-tie definitions. Behaviors and pre-ties are data, so
  //   x = z * A + (1 - z) * B   becomes   x - (A - B) z = B
  // with, for the strong tie,
  //   A = s_s + same * (s_none + s_w),          B = same * s_s
  // and for the weak tie,
  //   A = diff * (s_none + s_w),
  //   B = s_w * (1 - max(b_i, b_j)) + s_s * diff,
  // where same = |b_i + b_j - 1| and diff = |b_i - b_j|.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const PreTie pre = g.pre_tie(i, j);
      const double s_s = pre == PreTie::kStrong ? 1.0 : 0.0;
      const double s_w = pre == PreTie::kWeak ? 1.0 : 0.0;
      const double s_n = pre == PreTie::kNone ? 1.0 : 0.0;
      const int bi = g.is_user(i) ? 1 : 0;
      const int bj = g.is_user(j) ? 1 : 0;
      const double same = std::abs(bi + bj - 1);
      const double diff = std::abs(bi - bj);
      const double strong_in = s_s + same * (s_n + s_w);
      const double strong_out = same * s_s;
      const double weak_in = diff * (s_n + s_w);
      const double weak_out = s_w * (1.0 - std::max(bi, bj)) + s_s * diff;
      add_row(names.pair("def_xs", i, j),
              {{xs[at(i, j)], 1.0}, {zv(i, j), -(strong_in - strong_out)}},
              Sense::kEqual, strong_out);
      add_row(names.pair("def_xw", i, j),
              {{xw[at(i, j)], 1.0}, {zv(i, j), -(weak_in - weak_out)}},
              Sense::kEqual, weak_out);
      add_row(names.pair("onehot", i, j),
              {{xn[at(i, j)], 1.0}, {xw[at(i, j)], 1.0}, {xs[at(i, j)], 1.0}},
              Sense::kEqual, 1.0);
      // Weight only on existing post ties; also pins w to 0 for targets
      // without incoming ties, where the normalization row is vacuous.
      add_row(names.pair("support", i, j),
              {{w[at(i, j)], 1.0}, {xs[at(i, j)], -1.0}, {xw[at(i, j)], -1.0}},
              Sense::kLessEqual, 0.0);
    }
  }

  // Normalization w_ij * sum_k (Ws xs_kj + Ww xw_kj) = Ws xs_ij + Ww xw_ij,
  // with each product w_ij * x_kj replaced by q_kij under the exact
  // continuous-times-binary linearization.
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      std::vector<LinearTerm> norm;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        for (auto [prefix, x, weight] : {std::tuple{"qs", &xs, ws}, std::tuple{"qw", &xw, ww}}) {
          const int q = model.add_variable(names.q(prefix, k, i, j),
                                           VarKind::kContinuous, 0, 1);
          const int xv = (*x)[at(k, j)];
          const int wv = w[at(i, j)];
          add_row(fmt::format("lin1_{}_{}_{}_{}", prefix, node[k], node[i], node[j]),
                  {{q, 1.0}, {xv, -1.0}}, Sense::kLessEqual, 0.0);
          add_row(fmt::format("lin2_{}_{}_{}_{}", prefix, node[k], node[i], node[j]),
                  {{q, 1.0}, {wv, -1.0}}, Sense::kLessEqual, 0.0);
          add_row(fmt::format("lin3_{}_{}_{}_{}", prefix, node[k], node[i], node[j]),
                  {{q, 1.0}, {wv, -1.0}, {xv, -1.0}}, Sense::kGreaterEqual, -1.0);
          norm.push_back({q, weight});
        }
      }
      norm.push_back({xs[at(i, j)], -ws});
      norm.push_back({xw[at(i, j)], -ww});
      add_row(names.pair("norm", i, j), std::move(norm), Sense::kEqual, 0.0);
    }
  }

  // Expected non-users: non-users that stay plus users that quit.
  for (int j = 0; j < n; ++j) {
    if (!g.is_user(j)) model.objective_constant += 1.0;
    for (int i = 0; i < n; ++i) {
      if (i == j || g.is_user(i) == g.is_user(j)) continue;
      const double coef = g.is_user(j) ? params.omega_non_given_user
                                       : -params.omega_user_given_non;
      if (coef != 0.0) model.objective.push_back({w[at(i, j)], coef});
    }
  }
  return model;
}

std::vector<double> milp_point(const MilpModel& model, const SocialNetwork& net,
                               const Partition& partition, const ModelParams& params) {
  const IndexedNetwork g(net);
  const int n = g.size();
  const std::vector<int> labels = g.dense_assignment(partition);
  ModelParams plain = params;
  plain.include_facilitator = false;
  const WeightedNetwork wnet = apply_intervention(g, labels, plain);
  const std::vector<std::string> node = node_names(g);
  const Names names{node};

  std::vector<double> values(model.variables.size(), 0.0);
  auto set = [&](const std::string& name, double v) {
    auto index = model.find(name);
    if (!index) {
      throw Error(ErrorCode::kBadInput,
                  fmt::format("model has no variable '{}'", name));
    }
    values[*index] = v;
  };
  std::vector<double> xs(static_cast<std::size_t>(n) * n, 0.0), xw(xs);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool same = labels[i] == labels[j];
      if (i < j) set(names.z(i, j), same ? 1.0 : 0.0);
      const PostTie tie = tie_transition(g.behavior(i), g.behavior(j), g.pre_tie(i, j), same);
      xs[i * n + j] = tie == PostTie::kStrong ? 1.0 : 0.0;
      xw[i * n + j] = tie == PostTie::kWeak ? 1.0 : 0.0;
      set(names.pair("xs", i, j), xs[i * n + j]);
      set(names.pair("xw", i, j), xw[i * n + j]);
      set(names.pair("xn", i, j), tie == PostTie::kNone ? 1.0 : 0.0);
      set(names.pair("w", i, j), wnet.weight(i, j));
    }
  }
  for (int j = 0; j < n; ++j) {
    bool smallest = true;
    for (int i = 0; i < j; ++i) smallest = smallest && labels[i] != labels[j];
    set(names.r(j), smallest ? 1.0 : 0.0);
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double wij = wnet.weight(i, j);
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        set(names.q("qs", k, i, j), wij * xs[k * n + j]);
        set(names.q("qw", k, i, j), wij * xw[k * n + j]);
      }
    }
  }
  return values;
}

namespace {

void write_terms(std::ostream& out, const MilpModel& model,
                 const std::vector<LinearTerm>& terms) {
  int on_line = 0;
  for (const LinearTerm& t : terms) {
    if (on_line == 6) {
      out << "\n   ";
      on_line = 0;
    }
    out << (t.coef < 0 ? " - " : " + ") << number(std::abs(t.coef)) << ' '
        << model.variables[t.var].name;
    ++on_line;
  }
}

const char* sense_token(Sense sense) {
  switch (sense) {
    case Sense::kLessEqual: return "<=";
    case Sense::kEqual: return "=";
    case Sense::kGreaterEqual: return ">=";
  }
  return "=";
}

template <typename Writer>
void write_file(const MilpModel& model, const std::filesystem::path& path,
                Writer writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kSinkUnwritable,
                fmt::format("cannot open '{}' for writing", path.string()));
  }
  writer(model, out);
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kSinkUnwritable,
                fmt::format("failed writing '{}'", path.string()));
  }
}

}  // namespace

void write_lp(const MilpModel& model, std::ostream& out) {
  out << "\\ peergroup grouping model\n";
  for (const auto& [key, value] : model.metadata) {
    out << "\\ " << key << ": " << value << '\n';
  }
  out << "Maximize\n obj:";
  if (model.objective_constant != 0.0 || model.objective.empty()) {
    out << ' ' << number(model.objective_constant);
  }
  write_terms(out, model, model.objective);
  out << "\nSubject To\n";
  for (const MilpConstraint& row : model.constraints) {
    out << ' ' << row.name << ':';
    if (row.terms.empty()) {
      // A row without variables gets an explicit zero left-hand side.
      out << " 0 " << sense_token(row.sense) << ' ' << number(row.rhs) << '\n';
      continue;
    }
    write_terms(out, model, row.terms);
    out << ' ' << sense_token(row.sense) << ' ' << number(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const MilpVariable& v : model.variables) {
    if (v.kind == VarKind::kBinary) continue;
    out << ' ' << number(v.lower) << " <= " << v.name << " <= " << number(v.upper)
        << '\n';
  }
  out << "Binaries\n";
  int on_line = 0;
  for (const MilpVariable& v : model.variables) {
    if (v.kind != VarKind::kBinary) continue;
    out << ' ' << v.name;
    if (++on_line == 8) {
      out << '\n';
      on_line = 0;
    }
  }
  if (on_line != 0) out << '\n';
  out << "End\n";
}

void write_mps(const MilpModel& model, std::ostream& out) {
  out << "* peergroup grouping model\n";
  for (const auto& [key, value] : model.metadata) {
    out << "* " << key << ": " << value << '\n';
  }
  out << "NAME peergroup\nOBJSENSE\n    MAX\nROWS\n N obj\n";
  for (const MilpConstraint& row : model.constraints) {
    const char kind = row.sense == Sense::kLessEqual  ? 'L'
                      : row.sense == Sense::kEqual    ? 'E'
                                                      : 'G';
    out << ' ' << kind << ' ' << row.name << '\n';
  }
  // Column-major view of the rows.
  std::vector<std::vector<std::pair<int, double>>> columns(model.variables.size());
  for (const LinearTerm& t : model.objective) columns[t.var].emplace_back(-1, t.coef);
  for (std::size_t r = 0; r < model.constraints.size(); ++r) {
    for (const LinearTerm& t : model.constraints[r].terms) {
      columns[t.var].emplace_back(static_cast<int>(r), t.coef);
    }
  }
  out << "COLUMNS\n";
  bool in_integer = false;
  int marker = 0;
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const bool binary = model.variables[v].kind == VarKind::kBinary;
    if (binary != in_integer) {
      out << "    MARKER" << marker++ << " 'MARKER' "
          << (binary ? "'INTORG'" : "'INTEND'") << '\n';
      in_integer = binary;
    }
    const std::string& name = model.variables[v].name;
    if (columns[v].empty()) out << "    " << name << " obj 0\n";
    for (const auto& [row, coef] : columns[v]) {
      out << "    " << name << ' '
          << (row < 0 ? std::string("obj") : model.constraints[row].name) << ' '
          << number(coef) << '\n';
    }
  }
  if (in_integer) out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  if (model.objective_constant != 0.0) {
    out << "    rhs obj " << number(-model.objective_constant) << '\n';
  }
  for (const MilpConstraint& row : model.constraints) {
    if (row.rhs != 0.0) out << "    rhs " << row.name << ' ' << number(row.rhs) << '\n';
  }
  out << "BOUNDS\n";
  for (const MilpVariable& v : model.variables) {
    if (v.kind == VarKind::kBinary) {
      out << " BV bnd " << v.name << '\n';
    } else {
      out << " LO bnd " << v.name << ' ' << number(v.lower) << '\n';
      out << " UP bnd " << v.name << ' ' << number(v.upper) << '\n';
    }
  }
  out << "ENDATA\n";
}

void write_lp(const MilpModel& model, const std::filesystem::path& path) {
  write_file(model, path, [](const MilpModel& m, std::ostream& o) { write_lp(m, o); });
}

void write_mps(const MilpModel& model, const std::filesystem::path& path) {
  write_file(model, path, [](const MilpModel& m, std::ostream& o) { write_mps(m, o); });
}

}  // namespace peergroup
