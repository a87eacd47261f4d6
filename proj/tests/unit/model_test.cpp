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

#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "networks.hpp"
#include "peergroup/error.hpp"
#include "peergroup/model.hpp"

namespace peergroup {
namespace {

using testnet::N;
using testnet::S;
using testnet::U;
using testnet::W;

std::vector<ViolationKind> kinds(const std::vector<Violation>& vs) {
  std::vector<ViolationKind> out;
  for (const auto& v : vs) out.push_back(v.kind);
  return out;
}

TEST(ValidateNetworkTest, AcceptsWellFormedNetwork) {
  auto net = testnet::make({{"a", U}, {"b", N}}, {{"a", "b", S}, {"b", "a", W}});
  EXPECT_TRUE(validate_network(net).empty());
  EXPECT_EQ(net.user_count(), 1u);
  EXPECT_EQ(net.nonuser_count(), 1u);
}

TEST(ValidateNetworkTest, ReportsEachDefect) {
  EXPECT_EQ(kinds(validate_network(testnet::make({{"a", U}}, {{"a", "a", S}}))),
            std::vector{ViolationKind::kSelfArc});
  EXPECT_EQ(kinds(validate_network(testnet::make({{"a", U}, {"a", N}}, {}))),
            std::vector{ViolationKind::kDuplicateNode});
  EXPECT_EQ(kinds(validate_network(testnet::make({{"a", U}}, {{"a", "x", W}}))),
            std::vector{ViolationKind::kDanglingEndpoint});
  EXPECT_EQ(
      kinds(validate_network(testnet::make({{"a", U}, {"b", N}}, {{"a", "b", W}, {"a", "b", S}}))),
      std::vector{ViolationKind::kDuplicateArc});
}

TEST(ValidateNetworkTest, ReverseArcIsNotADuplicate) {
  auto net = testnet::make({{"a", U}, {"b", N}}, {{"a", "b", W}, {"b", "a", W}});
  EXPECT_TRUE(validate_network(net).empty());
}

TEST(IndexedNetworkTest, RejectsInvalidNetwork) {
  auto net = testnet::make({{"a", U}}, {{"a", "a", S}});
  try {
    IndexedNetwork indexed(net);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadInput);
  }
}

TEST(IndexedNetworkTest, OrdersNodesById) {
  auto net = testnet::make({{"c", U}, {"a", N}, {"b", U}}, {{"c", "a", S}, {"b", "a", W}});
  IndexedNetwork indexed(net);
  EXPECT_EQ(indexed.ids(), (std::vector<NodeId>{"a", "b", "c"}));
  EXPECT_EQ(indexed.user_count(), 2);
  EXPECT_EQ(indexed.pre_tie(2, 0), PreTie::kStrong);
  EXPECT_EQ(indexed.pre_tie(1, 0), PreTie::kWeak);
  EXPECT_EQ(indexed.pre_tie(0, 2), PreTie::kNone);
  const auto in = indexed.in_neighbors(0);
  EXPECT_EQ(std::vector<int>(in.begin(), in.end()), (std::vector<int>{1, 2}));
}

TEST(IndexedNetworkTest, DenseAssignmentRoundTrip) {
  auto net = testnet::make({{"b", U}, {"a", N}}, {});
  IndexedNetwork indexed(net);
  auto p = testnet::groups({{"a"}, {"b"}});
  auto labels = indexed.dense_assignment(p);
  EXPECT_EQ(labels, (std::vector<int>{0, 1}));
  EXPECT_EQ(indexed.to_partition(labels), p);

  Partition missing;
  missing.assign("a", 0);
  EXPECT_THROW(indexed.dense_assignment(missing), Error);
  missing.assign("b", 0);
  missing.assign("zz", 0);
  EXPECT_THROW(indexed.dense_assignment(missing), Error);
}

TEST(FeasibleGroupCountsTest, Examples) {
  EXPECT_EQ(feasible_group_counts(30, {3, 8}), (std::vector<int>{4, 5, 6, 7, 8, 9, 10}));
  EXPECT_EQ(feasible_group_counts(7, {4, 7}), (std::vector<int>{1}));
  EXPECT_TRUE(feasible_group_counts(3, {4, 8}).empty());
  EXPECT_TRUE(feasible_group_counts(0, {3, 8}).empty());
  EXPECT_TRUE(feasible_group_counts(10, {5, 4}).empty());
  EXPECT_EQ(feasible_group_counts(16, {3, 4}), (std::vector<int>{4, 5}));
}

// S is feasible exactly when some multiset of S sizes in [lo, hi] sums to n.
TEST(FeasibleGroupCountsTest, MatchesEnumeration) {
  for (int n = 1; n <= 40; ++n) {
    for (int lo = 1; lo <= 6; ++lo) {
      for (int hi = lo; hi <= 9; ++hi) {
        // reach[s] = set of totals reachable with s groups.
        std::vector<std::vector<bool>> reach(n + 1, std::vector<bool>(n + 1, false));
        reach[0][0] = true;
        std::vector<int> expected;
        for (int s = 1; s <= n; ++s) {
          for (int total = 0; total <= n; ++total) {
            for (int size = lo; size <= hi && size <= total; ++size) {
              if (reach[s - 1][total - size]) reach[s][total] = true;
            }
          }
          if (reach[s][n]) expected.push_back(s);
        }
        EXPECT_EQ(feasible_group_counts(n, {lo, hi}), expected)
            << "n=" << n << " lo=" << lo << " hi=" << hi;
      }
    }
  }
}

TEST(ValidatePartitionTest, Examples) {
  auto net = testnet::make({{"a", U}, {"b", N}, {"c", U}, {"d", N}}, {});
  EXPECT_TRUE(validate_partition(net, testnet::groups({{"a", "b"}, {"c", "d"}}), {2, 2}).empty());

  auto small = validate_partition(net, testnet::groups({{"a"}, {"b", "c", "d"}}), {2, 2});
  ASSERT_EQ(small.size(), 2u);
  EXPECT_EQ(small[0], (Violation{ViolationKind::kGroupTooSmall, {}, 0, 1}));
  EXPECT_EQ(small[1], (Violation{ViolationKind::kGroupTooLarge, {}, 1, 3}));

  Partition gap;
  for (auto id : {"a", "b"}) gap.assign(id, 0);
  for (auto id : {"c", "d"}) gap.assign(id, 2);
  EXPECT_EQ(kinds(validate_partition(net, gap, {2, 2})), std::vector{ViolationKind::kEmptyGroup});

  Partition partial;
  partial.assign("a", 0);
  partial.assign("b", 0);
  partial.assign("c", 0);
  partial.assign("x", -1);
  EXPECT_EQ(kinds(validate_partition(net, partial, {1, 4})),
            (std::vector{ViolationKind::kNodeUnassigned, ViolationKind::kUnknownNode}));

  Partition negative = testnet::groups({{"a", "b", "c", "d"}});
  negative.assign("d", -2);
  EXPECT_EQ(kinds(validate_partition(net, negative, {1, 4})),
            std::vector{ViolationKind::kNegativeGroup});
}

TEST(ValidateParamsTest, RejectsOutOfRange) {
  EXPECT_NO_THROW(validate_params(ModelParams{}));
  ModelParams p;
  p.omega_user_given_non = 1.5;
  EXPECT_THROW(validate_params(p), Error);
  p = {};
  p.weight_weak = 3.0;
  EXPECT_THROW(validate_params(p), Error);
  p = {};
  p.weight_weak = 0.0;
  EXPECT_THROW(validate_params(p), Error);
  p = {};
  p.capacity = {4, 3};
  EXPECT_THROW(validate_params(p), Error);
  p = {};
  p.capacity = {0, 3};
  EXPECT_THROW(validate_params(p), Error);
}

TEST(PartitionTest, Accessors) {
  auto p = testnet::groups({{"b", "a"}, {"c"}});
  EXPECT_EQ(p.group_count(), 2);
  EXPECT_EQ(p.group_of("c"), 1);
  EXPECT_FALSE(p.group_of("z").has_value());
  EXPECT_TRUE(p.same_group("a", "b"));
  EXPECT_FALSE(p.same_group("a", "c"));
  EXPECT_FALSE(p.same_group("a", "z"));
  EXPECT_EQ(p.groups(), (std::vector<std::vector<NodeId>>{{"a", "b"}, {"c"}}));
  EXPECT_EQ(Partition().group_count(), 0);
}

TEST(CanonicalLabelsTest, RelabelsByFirstAppearance) {
  const std::vector<int> labels{5, 5, 2, 7, 2, 0};
  EXPECT_EQ(canonical_labels(labels), (std::vector<int>{0, 0, 1, 2, 1, 3}));
  const auto once = canonical_labels(labels);
  EXPECT_EQ(canonical_labels(once), once);
}

TEST(ErrorTest, CodeNamesAreSnakeCase) {
  EXPECT_EQ(error_code_name(ErrorCode::kInfeasibleBounds), "infeasible_bounds");
  EXPECT_EQ(error_code_name(ErrorCode::kConflictingUpdate), "conflicting_update");
}

}  // namespace
}  // namespace peergroup
