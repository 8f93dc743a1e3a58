#include "trains/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "trains/random.hpp"

namespace trains {

Graph::Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) : adjacency_(n) {
  if (n < 2) throw GraphError("graph needs at least 2 nodes");
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw GraphError("edge endpoint out of range");
    if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw GraphError("duplicate edge");
    }
  }
  const auto dist = bfs_distances(*this, 0);
  if (std::find(dist.begin(), dist.end(), SIZE_MAX) != dist.end()) {
    throw GraphError("graph is not connected");
  }
}

bool Graph::adjacent(NodeId u, NodeId v) const {
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

NodeId id(std::size_t v) { return static_cast<NodeId>(v); }

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw GraphError("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

double parse_probability(std::string_view s) {
  // from_chars for double is missing from older libstdc++.
  std::string copy(s);
  std::istringstream in(copy);
  double p = 0;
  in >> p;
  if (!in || !in.eof() || p < 0.0 || p > 1.0) {
    throw GraphError("bad probability '" + copy + "'");
  }
  return p;
}

std::string format_probability(double p) {
  std::ostringstream out;
  out << p;
  return out.str();
}

}  // namespace

GraphSpec parse_graph_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw GraphError("graph spec needs KIND:ARGS");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);

  if (kind == "file") {
    if (rest.empty()) throw GraphError("file spec needs a path");
    return FileSpec{std::filesystem::path(std::string(rest))};
  }
  const auto args = split(rest, kind == "grid" ? 'x' : ':');
  auto expect = [&](std::size_t count) {
    if (args.size() != count) {
      throw GraphError("graph spec '" + std::string(text) + "' has wrong arity");
    }
  };
  if (kind == "ring") {
    expect(1);
    return RingSpec{parse_number<std::size_t>(args[0], "node count")};
  }
  if (kind == "path") {
    expect(1);
    return PathSpec{parse_number<std::size_t>(args[0], "node count")};
  }
  if (kind == "complete") {
    expect(1);
    return CompleteSpec{parse_number<std::size_t>(args[0], "node count")};
  }
  if (kind == "grid") {
    expect(2);
    return GridSpec{parse_number<std::size_t>(args[0], "rows"),
                    parse_number<std::size_t>(args[1], "cols")};
  }
  // The seed of the random kinds is optional and defaults to 0.
  if (kind == "tree") {
    if (args.size() != 1) expect(2);
    return TreeSpec{parse_number<std::size_t>(args[0], "node count"),
                    args.size() == 2 ? parse_number<std::uint64_t>(args[1], "seed") : 0};
  }
  if (kind == "gnp") {
    if (args.size() != 2) expect(3);
    return GnpSpec{parse_number<std::size_t>(args[0], "node count"), parse_probability(args[1]),
                   args.size() == 3 ? parse_number<std::uint64_t>(args[2], "seed") : 0};
  }
  throw GraphError("unknown graph kind '" + std::string(kind) + "'");
}

std::string to_string(const GraphSpec& spec) {
  struct Printer {
    std::string operator()(const RingSpec& s) const { return "ring:" + std::to_string(s.n); }
    std::string operator()(const PathSpec& s) const { return "path:" + std::to_string(s.n); }
    std::string operator()(const CompleteSpec& s) const {
      return "complete:" + std::to_string(s.n);
    }
    std::string operator()(const GridSpec& s) const {
      return "grid:" + std::to_string(s.rows) + "x" + std::to_string(s.cols);
    }
    std::string operator()(const TreeSpec& s) const {
      return "tree:" + std::to_string(s.n) + ":" + std::to_string(s.seed);
    }
    std::string operator()(const GnpSpec& s) const {
      return "gnp:" + std::to_string(s.n) + ":" + format_probability(s.p) + ":" +
             std::to_string(s.seed);
    }
    std::string operator()(const FileSpec& s) const { return "file:" + s.path.string(); }
  };
  return std::visit(Printer{}, spec);
}

Graph generate(const GraphSpec& spec) {
  struct Generator {
    Graph operator()(const RingSpec& s) const { return ring(s.n); }
    Graph operator()(const PathSpec& s) const { return path(s.n); }
    Graph operator()(const CompleteSpec& s) const { return complete(s.n); }
    Graph operator()(const GridSpec& s) const { return grid(s.rows, s.cols); }
    Graph operator()(const TreeSpec& s) const { return random_tree(s.n, s.seed); }
    Graph operator()(const GnpSpec& s) const { return gnp(s.n, s.p, s.seed); }
    Graph operator()(const FileSpec& s) const { return load_edge_list(s.path); }
  };
  return std::visit(Generator{}, spec);
}

Graph ring(std::size_t n) {
  if (n < 3) throw GraphError("ring needs at least 3 nodes");
  EdgeList edges;
  for (std::size_t v = 0; v < n; ++v) edges.emplace_back(id(v), id((v + 1) % n));
  return Graph(n, edges);
}

Graph path(std::size_t n) {
  EdgeList edges;
  for (std::size_t v = 0; v + 1 < n; ++v) edges.emplace_back(id(v), id(v + 1));
  return Graph(n, edges);
}

Graph complete(std::size_t n) {
  EdgeList edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(id(u), id(v));
  }
  return Graph(n, edges);
}

Graph grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw GraphError("grid dimensions must be positive");
  EdgeList edges;
  auto at = [cols](std::size_t r, std::size_t c) { return id(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(at(r, c), at(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(at(r, c), at(r + 1, c));
    }
  }
  return Graph(rows * cols, edges);
}

Graph random_tree(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw GraphError("tree needs at least 2 nodes");
  Rng rng(seed);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  rng.shuffle(order);
  EdgeList edges;
  for (std::size_t k = 1; k < n; ++k) {
    edges.emplace_back(order[rng.below(k)], order[k]);
  }
  return Graph(n, edges);
}

Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw GraphError("gnp needs at least 2 nodes");
  Rng rng(seed);
  for (int attempt = 0; attempt < kGnpRetryCap; ++attempt) {
    EdgeList edges;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (rng.unit() < p) edges.emplace_back(id(u), id(v));
      }
    }
    try {
      return Graph(n, edges);
    } catch (const GraphError&) {
      // disconnected sample; draw again
    }
  }
  throw GraphError("gnp(" + std::to_string(n) + ", " + format_probability(p) +
                   ") stayed disconnected after " + std::to_string(kGnpRetryCap) + " samples");
}

Graph read_edge_list(std::istream& in) {
  EdgeList edges;
  std::size_t max_node = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) {
      throw GraphError("edge list line " + std::to_string(line_no) + ": expected 'u v'");
    }
    const auto u = parse_number<NodeId>(a, "node id");
    const auto v = parse_number<NodeId>(b, "node id");
    edges.emplace_back(u, v);
    max_node = std::max<std::size_t>({max_node, u, v});
  }
  if (edges.empty()) throw GraphError("edge list is empty");
  return Graph(max_node + 1, edges);
}

Graph load_edge_list(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw GraphError("cannot open edge list '" + file.string() + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source) {
  std::vector<std::size_t> dist(g.size(), SIZE_MAX);
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == SIZE_MAX) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

std::size_t eccentricity(const Graph& g, NodeId v) {
  const auto dist = bfs_distances(g, v);
  return *std::max_element(dist.begin(), dist.end());
}

std::size_t diameter(const Graph& g) {
  std::size_t d = 0;
  for (NodeId v = 0; v < g.size(); ++v) d = std::max(d, eccentricity(g, v));
  return d;
}

}  // namespace trains
