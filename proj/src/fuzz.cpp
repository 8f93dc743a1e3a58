#include "trains/fuzz.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

#include "trains/random.hpp"
#include "trains/trace.hpp"

namespace trains {

namespace {

struct ModeName {
  FuzzMode mode;
  std::string_view name;
};

constexpr ModeName kModeNames[] = {
    {FuzzMode::Uniform, "uniform"},
    {FuzzMode::UniformLeaderless, "uniform-leaderless"},
    {FuzzMode::NoLeaderCoherent, "no-leader-coherent"},
    {FuzzMode::AllLeaders, "all-leaders"},
    {FuzzMode::NearOverflow, "near-overflow"},
    {FuzzMode::CollidingMarked, "colliding-marked"},
    {FuzzMode::FromFile, "file"},
};

Station uniform_station(Rng& rng, unsigned n) {
  // 8N wagons plus the empty station, drawn uniformly.
  const std::uint64_t r = rng.below(8 * std::uint64_t{n} + 1);
  if (r == 8 * std::uint64_t{n}) return std::nullopt;
  return Wagon{static_cast<std::uint8_t>(r / 8), (r & 1u) != 0, (r & 2u) != 0, (r & 4u) != 0};
}

Configuration uniform(const Graph& graph, const ProtocolParams& params, Rng& rng,
                      bool leaderless) {
  Configuration c;
  c.states.resize(graph.size());
  for (auto& s : c.states) {
    s.rand = rng.coin();
    s.leader = rng.coin() && !leaderless;
    s.first = uniform_station(rng, params.train_length());
    s.last = uniform_station(rng, params.train_length());
  }
  return c;
}

/// Fills stations by layer around a root: the node at distance d carries
/// wagon(2d) in L and wagon(2d+1) in F.
template <typename WagonOfLayer>
void fill_layers(Configuration& c, const std::vector<std::size_t>& dist, WagonOfLayer wagon) {
  for (std::size_t v = 0; v < dist.size(); ++v) {
    c.states[v].last = wagon(2 * dist[v]);
    c.states[v].first = wagon(2 * dist[v] + 1);
  }
}

// Layer j holds idx (base - j) mod N. Every wagon of one train shares
// j + idx, which identifies the train.
unsigned layer_index(std::size_t base, std::size_t j, unsigned n) {
  return static_cast<unsigned>(((base % n) + n - (j % n)) % n);
}

std::vector<NodeId> line_order(const Graph& graph);

Configuration no_leader_coherent(const Graph& graph, const ProtocolParams& params, Rng& rng,
                                 std::uint64_t seed) {
  const unsigned n = params.train_length();
  Configuration c;
  c.states.resize(graph.size());
  for (auto& s : c.states) s.rand = rng.coin();
  const auto root = static_cast<NodeId>(rng.below(graph.size()));
  const std::size_t base = rng.below(n);

  // On a ring with 2n = 0 mod N the layers close up: every L has a successor,
  // nothing errs, and only an overflow can create a leader.
  const std::size_t cycle = 2 * graph.size();
  const auto order = line_order(graph);
  const bool closed = order.size() == graph.size() && graph.size() > 2 &&
                      graph.degree(order.front()) == 2 && cycle % n == 0;
  std::vector<std::size_t> dist;
  if (closed) {
    dist.resize(graph.size());
    const auto at = static_cast<std::size_t>(std::find(order.begin(), order.end(), root) - order.begin());
    for (std::size_t p = 0; p < order.size(); ++p) dist[order[(at + p) % order.size()]] = p;
  } else {
    dist = bfs_distances(graph, root);
  }
  const std::size_t depth = 2 * (*std::max_element(dist.begin(), dist.end())) + 2;
  std::vector<bool> bits(depth);
  for (std::size_t j = 0; j < depth; ++j) bits[j] = rng.coin();
  fill_layers(c, dist, [&](std::size_t j) {
    const unsigned idx = layer_index(base, j, n);
    const std::size_t train = closed ? (j + idx) % cycle : j + idx;
    const bool flag = (hash_words(seed, 0x7261696e, train) & 1u) != 0;
    return Station(Wagon{static_cast<std::uint8_t>(idx), bits[j], false, flag});
  });
  return c;
}

Configuration near_overflow(const Graph& graph, const ProtocolParams& params, Rng& rng,
                            std::uint64_t margin) {
  const unsigned n = params.train_length();
  const std::uint64_t span = std::uint64_t{1} << n;
  if (margin < 1 || margin > span) {
    throw InfeasibleFuzz("near-overflow margin must lie in [1, 2^N]");
  }
  std::vector<std::size_t> ecc(graph.size());
  for (NodeId v = 0; v < graph.size(); ++v) ecc[v] = eccentricity(graph, v);
  const std::size_t best = *std::max_element(ecc.begin(), ecc.end());
  if (2 * best < n) {
    throw InfeasibleFuzz("near-overflow needs 2*ecc >= N so a complete train can advance");
  }
  std::vector<NodeId> roots;
  for (NodeId v = 0; v < graph.size(); ++v) {
    if (ecc[v] == best) roots.push_back(v);
  }
  const NodeId root = roots[rng.below(roots.size())];

  Configuration c;
  c.states.resize(graph.size());
  for (auto& s : c.states) s.rand = rng.coin();
  // The complete train occupies layers 1..N: the root itself errs at round 1
  // (it has no successor), so a tail in layer 0 would not survive.
  const std::uint64_t target = span - margin;
  fill_layers(c, bfs_distances(graph, root), [&](std::size_t j) {
    const unsigned idx = layer_index(n, j, n);
    return Station(Wagon{static_cast<std::uint8_t>(idx), ((target >> idx) & 1u) != 0, false, true});
  });
  return c;
}

// Node order along a ring or path; shorter than the graph otherwise.
std::vector<NodeId> line_order(const Graph& graph) {
  NodeId start = 0;
  std::size_t ends = 0;
  for (NodeId v = 0; v < graph.size(); ++v) {
    if (graph.degree(v) > 2) return {};
    if (graph.degree(v) == 1 && ends++ == 0) start = v;
  }
  if (ends != 0 && ends != 2) return {};
  std::vector<NodeId> order{start};
  std::vector<bool> seen(graph.size());
  seen[start] = true;
  while (true) {
    const auto nb = graph.neighbors(order.back());
    const auto next = std::find_if(nb.begin(), nb.end(), [&](NodeId u) { return !seen[u]; });
    if (next == nb.end()) break;
    seen[*next] = true;
    order.push_back(*next);
  }
  return order;
}

Configuration colliding_marked(const Graph& graph, const ProtocolParams& params, Rng& rng) {
  const unsigned n = params.train_length();
  const auto order = line_order(graph);
  if (order.size() != graph.size()) {
    throw InfeasibleFuzz("colliding-marked needs a ring or a path");
  }
  const std::size_t half = graph.size() / 2;
  if (half < (n + 1) / 2) {
    throw InfeasibleFuzz("colliding-marked needs at least 2*ceil(N/2) nodes");
  }
  Configuration c;
  c.states.resize(graph.size());
  for (auto& s : c.states) s.rand = rng.coin();

  // Each side is layered from its outer end; the marked train's head sits in
  // the F station of the innermost node of the side.
  auto fill_side = [&](std::size_t count, auto node_at) {
    const std::size_t top = 2 * count - 1;
    const std::size_t base = top;
    for (std::size_t d = 0; d < count; ++d) {
      NodeState& s = c.states[node_at(d)];
      auto wagon = [&](std::size_t j) {
        const unsigned idx = layer_index(base, j, n);
        const bool marked = j + idx == top;
        return Station(Wagon{static_cast<std::uint8_t>(idx), rng.coin(), false, marked});
      };
      s.last = wagon(2 * d);
      s.first = wagon(2 * d + 1);
    }
  };
  const std::size_t m = graph.size();
  fill_side(half, [&](std::size_t d) { return order[d]; });
  fill_side(m - half, [&](std::size_t d) { return order[m - 1 - d]; });
  return c;
}

}  // namespace

std::string to_string(FuzzMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return std::string(name);
  }
  return "unknown";
}

FuzzSpec parse_fuzz_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  FuzzSpec spec;
  const auto* hit = std::find_if(std::begin(kModeNames), std::end(kModeNames),
                                 [&](const ModeName& m) { return m.name == name; });
  if (hit == std::end(kModeNames)) {
    throw std::invalid_argument("unknown init mode '" + std::string(name) + "'");
  }
  spec.mode = hit->mode;
  if (spec.mode == FuzzMode::FromFile) {
    if (colon == std::string_view::npos || colon + 1 == text.size()) {
      throw std::invalid_argument("file init needs a path: file:PATH");
    }
    spec.snapshot = std::string(text.substr(colon + 1));
    return spec;
  }
  if (colon != std::string_view::npos) {
    const std::string_view seed = text.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), spec.seed);
    if (ec != std::errc() || ptr != seed.data() + seed.size() || seed.empty()) {
      throw std::invalid_argument("bad init seed '" + std::string(seed) + "'");
    }
  }
  return spec;
}

Configuration generate_config(const FuzzSpec& spec, const Graph& graph,
                              const ProtocolParams& params) {
  Rng rng(hash_words(spec.seed, static_cast<std::uint64_t>(spec.mode), graph.size()));
  Configuration c;
  switch (spec.mode) {
    case FuzzMode::Uniform:
      c = uniform(graph, params, rng, false);
      break;
    case FuzzMode::UniformLeaderless:
      c = uniform(graph, params, rng, true);
      break;
    case FuzzMode::NoLeaderCoherent:
      c = no_leader_coherent(graph, params, rng, spec.seed);
      break;
    case FuzzMode::AllLeaders:
      c.states.resize(graph.size());
      for (auto& s : c.states) s = new_leader(RandomBits{rng.coin(), rng.coin()});
      break;
    case FuzzMode::NearOverflow:
      c = near_overflow(graph, params, rng, spec.overflow_margin);
      break;
    case FuzzMode::CollidingMarked:
      c = colliding_marked(graph, params, rng);
      break;
    case FuzzMode::FromFile:
      c = load_snapshot(spec.snapshot, params);
      break;
  }
  check_consistent(c, graph, params);
  return c;
}

}  // namespace trains
