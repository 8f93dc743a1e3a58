#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trains/graph.hpp"
#include "trains/protocol.hpp"

namespace trains {

/// All node states at the end of round `round`.
struct Configuration {
  std::vector<NodeState> states;
  std::uint64_t round = 0;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Throws std::invalid_argument when the configuration does not fit the graph
/// or holds a wagon with idx >= N.
void check_consistent(const Configuration& config, const Graph& graph,
                      const ProtocolParams& params);

/// Per-node random bits. The bits of node i at round t are a pure function of
/// (source, i, t), so replays and partial re-runs see the same draws.
class RandomSource {
 public:
  enum class Mode { Seeded, ForcedZero, ForcedOne, Scripted };

  /// Scripted X values keyed by (round, node); unlisted pairs draw X = 0.
  using Script = std::map<std::pair<std::uint64_t, NodeId>, bool>;

  static RandomSource seeded(std::uint64_t seed);
  static RandomSource forced_zero();
  static RandomSource forced_one();
  static RandomSource scripted(Script script);

  /// Script text: `ROUND NODE X` per line, `#` comments. Throws
  /// std::invalid_argument on malformed lines.
  static RandomSource load_script(const std::filesystem::path& file);
  static Script parse_script(std::istream& in);

  Mode mode() const { return mode_; }
  RandomBits bits(NodeId node, std::uint64_t round) const;

 private:
  RandomSource(Mode mode, std::uint64_t seed, std::shared_ptr<const Script> script)
      : mode_(mode), seed_(seed), script_(std::move(script)) {}

  Mode mode_;
  std::uint64_t seed_;
  std::shared_ptr<const Script> script_;
};

/// Raw random bits drawn by the engine.
struct BitLedger {
  std::uint64_t raw_bits = 0;
  std::uint64_t node_rounds = 0;
};

/// One synchronous round: every node reads the pre-round snapshot and the
/// results are committed together. Draws exactly two raw bits per node.
Configuration step(const Configuration& config, const Graph& graph, const RandomSource& rng,
                   const ProtocolParams& params, BitLedger* ledger = nullptr);

/// Raised when an observer fails (typically on trace I/O).
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RoundInfo {
  std::uint64_t round = 0;           // round of `after`
  std::uint64_t raw_bits_drawn = 0;  // during this round
};

enum class ObserverVerdict { Continue, Stop };

class RoundObserver {
 public:
  virtual ~RoundObserver() = default;
  virtual void on_start(const Configuration& initial) { (void)initial; }
  virtual ObserverVerdict on_round(const Configuration& before, const Configuration& after,
                                   const RoundInfo& info) = 0;
  /// Name reported as the stop reason when this observer stops the run.
  virtual std::string stop_reason() const { return "observer"; }
};

enum class StopReason { Cap, Observer };

struct RunResult {
  Configuration final;
  StopReason reason = StopReason::Cap;
  std::string reason_text = "cap";
  std::uint64_t stop_round = 0;
  BitLedger bits;
};

/// Steps until `max_rounds` rounds have run or an observer returns Stop.
/// Observer exceptions are rethrown as RunError.
RunResult run(Configuration initial, const Graph& graph, const RandomSource& rng,
              const ProtocolParams& params, std::uint64_t max_rounds,
              const std::vector<RoundObserver*>& observers);

/// Adapter for lambdas.
class CallbackObserver : public RoundObserver {
 public:
  using Callback =
      std::function<ObserverVerdict(const Configuration&, const Configuration&, const RoundInfo&)>;
  explicit CallbackObserver(Callback cb) : cb_(std::move(cb)) {}
  ObserverVerdict on_round(const Configuration& before, const Configuration& after,
                           const RoundInfo& info) override {
    return cb_(before, after, info);
  }

 private:
  Callback cb_;
};

}  // namespace trains
