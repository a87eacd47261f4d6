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

// Linearized mixed-integer model of the grouping problem for a fixed number
// of groups, plus LP/MPS writers for external solvers. Facilitators are not
// part of the exported model.
//
// Variables (node names are the ids when they are LP-safe and unique after
// sanitizing, "v<index>" otherwise):
//   z_a_b        binary, a < b: a and b share a group
//   xs_i_j       binary: post tie i -> j is strong
//   xw_i_j       binary: post tie i -> j is weak
//   xn_i_j       binary: no post tie i -> j
//   w_i_j        continuous [0, 1]: normalized weight of i -> j
//   qs_k_i_j     continuous [0, 1]: w_i_j * xs_k_j
//   qw_k_i_j     continuous [0, 1]: w_i_j * xw_k_j
//   r_j          binary: j is the smallest member of its group

#ifndef PEERGROUP_MILP_HPP_
#define PEERGROUP_MILP_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "peergroup/model.hpp"

namespace peergroup {

enum class VarKind { kBinary, kContinuous };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct MilpVariable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = 1.0;
};

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

struct MilpConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

struct MilpModel {
  std::vector<MilpVariable> variables;
  std::vector<MilpConstraint> constraints;
  std::vector<LinearTerm> objective;  // maximized
  double objective_constant = 0.0;
  std::map<std::string, std::string> metadata;

  int add_variable(std::string name, VarKind kind, double lower, double upper);
  std::optional<int> find(const std::string& name) const;

  double objective_value(std::span<const double> values) const;
  // Largest amount by which any row or bound is violated.
  double max_violation(std::span<const double> values) const;

 private:
  std::map<std::string, int> index_;
};

// Throws Error(kInfeasibleS) when group_count is not a feasible group count.
MilpModel build_milp(const SocialNetwork& net, const ModelParams& params,
                     int group_count);

// Variable values induced by a partition: z from co-membership, x from the
// tie transitions, w from normalization (facilitators off), q as products.
std::vector<double> milp_point(const MilpModel& model, const SocialNetwork& net,
                               const Partition& partition, const ModelParams& params);

void write_lp(const MilpModel& model, std::ostream& out);
void write_mps(const MilpModel& model, std::ostream& out);
// Throws Error(kSinkUnwritable) when the file cannot be written.
void write_lp(const MilpModel& model, const std::filesystem::path& path);
void write_mps(const MilpModel& model, const std::filesystem::path& path);

// FNV-1a digest of the network contents, independent of declaration order.
std::string instance_hash(const SocialNetwork& net);

}  // namespace peergroup

#endif  // PEERGROUP_MILP_HPP_
