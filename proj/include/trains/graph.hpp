#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "trains/protocol.hpp"

namespace trains {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected, connected, simple graph with sorted adjacency lists.
class Graph {
 public:
  /// Throws GraphError on self-loops, out-of-range endpoints, n < 2 or a
  /// disconnected result. Duplicate edges are rejected as well.
  Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t size() const { return adjacency_.size(); }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  bool adjacent(NodeId u, NodeId v) const;

  /// Every edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
};

struct RingSpec { std::size_t n; };
struct PathSpec { std::size_t n; };
struct CompleteSpec { std::size_t n; };
struct GridSpec { std::size_t rows; std::size_t cols; };
struct TreeSpec { std::size_t n; std::uint64_t seed; };
struct GnpSpec { std::size_t n; double p; std::uint64_t seed; };
struct FileSpec { std::filesystem::path path; };

using GraphSpec =
    std::variant<RingSpec, PathSpec, CompleteSpec, GridSpec, TreeSpec, GnpSpec, FileSpec>;

/// Parses `ring:8`, `path:8`, `complete:6`, `grid:3x3`, `tree:10:SEED`,
/// `gnp:10:0.4:SEED`, `file:PATH`. Omitted seeds default to 0.
/// Throws GraphError on malformed input.
GraphSpec parse_graph_spec(std::string_view text);
std::string to_string(const GraphSpec& spec);

/// Deterministic given the graph spec. gnp resamples until connected, up to
/// `kGnpRetryCap` attempts.
Graph generate(const GraphSpec& spec);
inline constexpr int kGnpRetryCap = 1000;

Graph ring(std::size_t n);
Graph path(std::size_t n);
Graph complete(std::size_t n);
Graph grid(std::size_t rows, std::size_t cols);
Graph random_tree(std::size_t n, std::uint64_t seed);
Graph gnp(std::size_t n, double p, std::uint64_t seed);

/// Edge-list text: one `u v` pair per line, 0-indexed; `#` starts a comment.
Graph read_edge_list(std::istream& in);
Graph load_edge_list(const std::filesystem::path& file);
void write_edge_list(std::ostream& out, const Graph& g);

std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source);
std::size_t eccentricity(const Graph& g, NodeId v);
std::size_t diameter(const Graph& g);

}  // namespace trains
