// Reference implementations used only by the tests. They follow the
// definitions literally and share no code with the library beyond the plain
// data types.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "trains/analysis.hpp"
#include "trains/engine.hpp"
#include "trains/graph.hpp"
#include "trains/protocol.hpp"

namespace oracle {

using trains::Carrier;
using trains::Configuration;
using trains::Graph;
using trains::NodeId;
using trains::Station;
using trains::StationKind;
using trains::Wagon;

inline constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

/// All-pairs shortest paths on unit weights.
inline std::vector<std::vector<std::size_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kInf));
  for (std::size_t v = 0; v < n; ++v) {
    d[v][v] = 0;
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) d[v][u] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline std::size_t eccentricity(const Graph& g, NodeId v) {
  const auto d = floyd_warshall(g);
  return *std::max_element(d[v].begin(), d[v].end());
}

inline std::uint64_t value(const std::vector<Wagon>& wagons) {
  if (wagons.empty()) return 0;
  std::uint64_t sum = 0;
  for (const Wagon& w : wagons) {
    const std::uint64_t digit = (w.bit ? 1u : 0u) + 2u * (w.carry ? 1u : 0u);
    sum += digit << (w.idx - wagons.front().idx);
  }
  return sum;
}

/// One complete train as the stations holding T_0..T_{N-1}.
using Placement = std::vector<Carrier>;

/// Every complete train, found by trying all node sequences v_0..v_m in the
/// two placements of the definition: (F,L) pairs holding (T_2k, T_2k+1), or
/// v_0.L = T_0 followed by (F,L) pairs holding (T_2k-1, T_2k). Consecutive
/// nodes must be adjacent. m = floor(N/2) so even N is covered as well.
inline std::set<Placement> enumerate_trains(const Configuration& c, const Graph& g,
                                            unsigned n_len) {
  const std::size_t n = g.size();
  const std::size_t len = n_len / 2 + 1;
  std::set<Placement> found;
  std::vector<NodeId> seq(len, 0);

  auto station = [&](Carrier k) -> const Station& {
    const auto& s = c.states[k.node];
    return k.kind == StationKind::First ? s.first : s.last;
  };
  auto try_placement = [&](bool shifted) {
    Placement p(n_len);
    for (std::size_t k = 0; k < len; ++k) {
      const long f = shifted ? 2 * static_cast<long>(k) - 1 : 2 * static_cast<long>(k);
      const long l = shifted ? 2 * static_cast<long>(k) : 2 * static_cast<long>(k) + 1;
      if (f >= 0 && f < static_cast<long>(n_len)) p[f] = {seq[k], StationKind::First};
      if (l < static_cast<long>(n_len)) p[l] = {seq[k], StationKind::Last};
    }
    std::optional<bool> flag;
    for (unsigned j = 0; j < n_len; ++j) {
      const Station& s = station(p[j]);
      if (!s || s->idx != j) return;
      if (flag && *flag != s->flag) return;
      flag = s->flag;
    }
    found.insert(p);
  };

  // Odometer over all node sequences.
  while (true) {
    bool adjacent = true;
    for (std::size_t k = 0; k + 1 < len && adjacent; ++k) adjacent = g.adjacent(seq[k], seq[k + 1]);
    if (adjacent) {
      try_placement(false);
      try_placement(true);
    }
    std::size_t pos = 0;
    while (pos < len && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == len) break;
  }
  return found;
}

/// The legitimacy definition evaluated directly: a unique leader, singleton
/// layers with (B_i.idx + i) % N = B_0.idx, and the partial-train values
/// floor(k / 2^idx) for every layer index k.
inline std::optional<NodeId> legitimate(const Configuration& c, const Graph& g, unsigned n_len) {
  std::vector<NodeId> leaders;
  for (NodeId v = 0; v < c.states.size(); ++v)
    if (c.states[v].leader) leaders.push_back(v);
  if (leaders.size() != 1) return std::nullopt;
  const NodeId root = leaders[0];

  const auto dist = floyd_warshall(g)[root];
  const std::size_t ecc = *std::max_element(dist.begin(), dist.end());
  const std::size_t top = 2 * ecc + 1;

  std::vector<Wagon> b(top + 1);
  for (std::size_t i = 0; i <= top; ++i) {
    std::optional<Wagon> common;
    for (NodeId v = 0; v < c.states.size(); ++v) {
      if (dist[v] != i / 2) continue;
      const Station& s = i % 2 == 0 ? c.states[v].last : c.states[v].first;
      if (!s) return std::nullopt;
      if (common && !(*common == *s)) return std::nullopt;
      common = *s;
    }
    b[i] = *common;
    if ((b[i].idx + i) % n_len != b[0].idx) return std::nullopt;
  }

  for (std::size_t k = 0; k <= top; ++k) {
    const std::size_t m = std::min<std::size_t>(k, n_len - 1 - b[k].idx);
    std::vector<Wagon> t;
    for (std::size_t j = 0; j <= m; ++j) {
      const Wagon& w = b[k - j];
      if (w.idx != b[k].idx + j || w.flag != b[k].flag) return std::nullopt;
      t.push_back(w);
    }
    if (value(t) != (k >> b[k].idx)) return std::nullopt;
  }
  return root;
}

}  // namespace oracle
