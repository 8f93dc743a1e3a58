#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trains/analysis.hpp"
#include "trains/engine.hpp"
#include "trains/protocol.hpp"

namespace trains {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `rand,leader,F,L` where a station is `-` or `idx:bit:carry:flag`.
std::string format_node(const NodeState& state);
/// Throws FormatError on malformed tokens or idx >= N.
NodeState parse_node(std::string_view token, const ProtocolParams& params);

/// One round of a trace: `{"round":R,"states":[...],"metrics":{...}}` on a
/// single line. A snapshot is a record without metrics.
struct TraceRecord {
  std::uint64_t round = 0;
  std::vector<NodeState> states;
  std::optional<RoundMetrics> metrics;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

std::string serialize(const TraceRecord& record);
TraceRecord parse_record(std::string_view line, const ProtocolParams& params);

std::string serialize(const RoundMetrics& metrics);
RoundMetrics parse_metrics(std::string_view line);

TraceRecord to_record(const Configuration& config);
Configuration to_config(const TraceRecord& record);

/// Reads the last record of a trace or snapshot file.
Configuration load_snapshot(const std::filesystem::path& file, const ProtocolParams& params);
Configuration read_snapshot(std::istream& in, const ProtocolParams& params);
void write_snapshot(std::ostream& out, const Configuration& config);

/// Writes one record per round (the initial configuration included) and,
/// optionally, a metrics line per round to a second stream.
class TraceWriter : public RoundObserver {
 public:
  TraceWriter(std::ostream* trace, std::ostream* metrics, const Graph& graph,
              const ProtocolParams& params);

  void on_start(const Configuration& initial) override;
  ObserverVerdict on_round(const Configuration& before, const Configuration& after,
                           const RoundInfo& info) override;

 private:
  void write(const Configuration& config);

  std::ostream* trace_;
  std::ostream* metrics_;
  const Graph& graph_;
  ProtocolParams params_;
};

}  // namespace trains
