#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "trains/engine.hpp"
#include "trains/graph.hpp"
#include "trains/protocol.hpp"

namespace trains {

enum class FuzzMode {
  Uniform,            // every field drawn over its full domain
  UniformLeaderless,  // uniform with leader = 0 everywhere
  NoLeaderCoherent,   // leaderless, consistent layered trains; closed around rings with 2n = 0 mod N
  AllLeaders,         // every node freshly elected
  NearOverflow,       // coherent marked trains valued 2^N - c
  CollidingMarked,    // two marked trains heading at each other on a ring or path
  FromFile,           // snapshot restore
};

struct FuzzSpec {
  FuzzMode mode = FuzzMode::Uniform;
  std::uint64_t seed = 0;
  std::uint64_t overflow_margin = 2;  // c for NearOverflow
  std::filesystem::path snapshot;     // FromFile
};

class InfeasibleFuzz : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `MODE[:SEED]`, or `file:PATH`.
FuzzSpec parse_fuzz_spec(std::string_view text);
std::string to_string(FuzzMode mode);

/// Deterministic in (spec, graph, params). The result always passes
/// check_consistent; protocol-level invariants may be violated on purpose.
/// Throws InfeasibleFuzz when the mode cannot be built on `graph`.
Configuration generate_config(const FuzzSpec& spec, const Graph& graph,
                              const ProtocolParams& params);

}  // namespace trains
