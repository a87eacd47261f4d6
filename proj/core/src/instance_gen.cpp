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

#include "peergroup/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "peergroup/error.hpp"
#include "peergroup/random.hpp"

namespace peergroup {

std::vector<UndirectedEdge> generate_ws(const WsParams& params) {
  const int n = params.n;
  const int k = params.k;
  if (k < 2 || k % 2 != 0 || k >= n) {
    throw Error(ErrorCode::kBadDegree,
                fmt::format("ring degree k={} must be even with 2 <= k < n={}", k, n));
  }
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw Error(ErrorCode::kBadInput, "rewiring probability must lie in [0, 1]");
  }
  Rng rng(params.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> target(0, n - 1);

  auto key = [](int a, int b) { return std::pair<int, int>(std::min(a, b), std::max(a, b)); };
  std::vector<UndirectedEdge> edges;
  std::set<std::pair<int, int>> present;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= k / 2; ++j) {
    for (int u = 0; u < n; ++u) {
      const int v = (u + j) % n;
      edges.emplace_back(u, v);
      present.insert(key(u, v));
      ++degree[u];
      ++degree[v];
    }
  }
  // Rewire lap by lap so every lattice edge gets exactly one chance.
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!(coin(rng) < params.p)) continue;
    const int u = edges[e].first;
    const int v = edges[e].second;
    if (degree[u] >= n - 1) continue;
    int w = target(rng);
    while (w == u || present.contains(key(u, w))) w = target(rng);
    present.erase(key(u, v));
    present.insert(key(u, w));
    --degree[v];
    ++degree[w];
    edges[e].second = w;
  }
  return edges;
}

SocialNetwork decorate(int node_count, const std::vector<UndirectedEdge>& edges,
                       const DecorationParams& params) {
  for (double v : {params.user_ratio, params.strong_ratio, params.reciprocity}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kBadInput, "decoration ratios must lie in [0, 1]");
    }
  }
  Rng rng(params.seed);
  const int width = static_cast<int>(
      std::to_string(std::max(node_count - 1, 0)).size());
  SocialNetwork net;
  net.nodes.reserve(static_cast<std::size_t>(node_count));
  for (int i = 0; i < node_count; ++i) {
    net.nodes.push_back({fmt::format("v{:0{}}", i, width), Behavior::kNonUser});
  }
  std::vector<int> order(static_cast<std::size_t>(node_count));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto users = static_cast<std::size_t>(
      std::lround(params.user_ratio * static_cast<double>(node_count)));
  for (std::size_t t = 0; t < users && t < order.size(); ++t) {
    net.nodes[order[t]].behavior = Behavior::kUser;
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto strength = [&] {
    return coin(rng) < params.strong_ratio ? TieStrength::kStrong : TieStrength::kWeak;
  };
  for (const auto& [u, v] : edges) {
    net.arcs.push_back({net.nodes[u].id, net.nodes[v].id, strength()});
    if (coin(rng) < params.reciprocity) {
      net.arcs.push_back({net.nodes[v].id, net.nodes[u].id, strength()});
    }
  }
  return net;
}

SocialNetwork generate_instance(int n, std::uint64_t seed, double user_ratio, int k,
                                double p) {
  const auto edges = generate_ws({n, k, p, derive_seed(seed, 1)});
  DecorationParams dp;
  dp.user_ratio = user_ratio;
  dp.seed = derive_seed(seed, 2);
  return decorate(n, edges, dp);
}

double average_clustering(int node_count, const std::vector<UndirectedEdge>& edges) {
  std::vector<std::set<int>> adj(static_cast<std::size_t>(node_count));
  for (const auto& [u, v] : edges) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  double total = 0.0;
  for (int u = 0; u < node_count; ++u) {
    const std::vector<int> nb(adj[u].begin(), adj[u].end());
    const std::size_t d = nb.size();
    if (d < 2) continue;
    int links = 0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        if (adj[nb[a]].contains(nb[b])) ++links;
      }
    }
    total += 2.0 * links / static_cast<double>(d * (d - 1));
  }
  return node_count > 0 ? total / node_count : 0.0;
}

}  // namespace peergroup
