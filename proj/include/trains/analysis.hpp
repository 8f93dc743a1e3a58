#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trains/engine.hpp"
#include "trains/graph.hpp"
#include "trains/protocol.hpp"

namespace trains {

enum class StationKind : std::uint8_t { First, Last };

struct Carrier {
  NodeId node = 0;
  StationKind kind = StationKind::First;

  friend bool operator==(const Carrier&, const Carrier&) = default;
  friend auto operator<=>(const Carrier&, const Carrier&) = default;
};

const Station& station_at(const Configuration& config, Carrier c);

/// A run of wagons with consecutive indices and one flag, together with the
/// stations carrying them (wagons[j] sits in carriers[j]).
struct TrainView {
  std::vector<Wagon> wagons;
  std::vector<Carrier> carriers;
  bool flag = false;
  bool complete = false;

  friend bool operator==(const TrainView&, const TrainView&) = default;
};

/// sum_j 2^j (bit_j + 2 carry_j) over the wagons in order, i.e. the train
/// value with the 2^{-k1} factor already applied.
std::uint64_t train_value(std::span<const Wagon> wagons);
std::uint64_t train_value(const TrainView& train);

class AnalysisBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultExpansionBudget = 1'000'000;

/// All complete trains T_0..T_{N-1} in the configuration. A train is a walk
/// over stations where F is followed by the L station of the same node and L
/// by the F station of an adjacent node. Ordered by carrier sequence.
/// Throws AnalysisBudgetExceeded if the search expands more than `budget`
/// stations.
std::vector<TrainView> extract_trains(const Configuration& config, const Graph& graph,
                                      const ProtocolParams& params,
                                      std::optional<bool> flag_filter = std::nullopt,
                                      std::size_t budget = kDefaultExpansionBudget);

std::optional<std::uint64_t> min_train_value(const Configuration& config, const Graph& graph,
                                             const ProtocolParams& params, bool flag);

/// Stations grouped by layer around `root`: layer 2d holds the L stations and
/// layer 2d+1 the F stations of the nodes at distance d.
struct LayerView {
  std::size_t index = 0;
  std::vector<Station> stations;
};

std::vector<LayerView> layers(const Configuration& config, const Graph& graph, NodeId root);

struct LayerRow {
  std::size_t index = 0;
  Wagon wagon;
  std::uint64_t value = 0;     // value of the partial train ending at this layer
  std::uint64_t expected = 0;  // floor(index / 2^idx)
};

struct LegitimacyReport {
  std::optional<NodeId> leader;  // set iff legitimate
  std::string reason;            // first failed clause, empty when legitimate
  std::vector<LayerRow> rows;    // filled when legitimate
};

LegitimacyReport check_legitimacy(const Configuration& config, const Graph& graph,
                                  const ProtocolParams& params);

/// The unique leader if the configuration is legitimate.
std::optional<NodeId> is_legitimate(const Configuration& config, const Graph& graph,
                                    const ProtocolParams& params);

struct RoundMetrics {
  std::uint64_t round = 0;
  std::size_t leader_count = 0;
  std::size_t marked_wagon_count = 0;
  std::optional<std::uint64_t> min_unmarked_train_value;
  std::optional<std::uint64_t> min_marked_train_value;
  std::size_t err_trigger_count = 0;
  bool is_legitimate = false;
  std::optional<NodeId> legitimate_leader;

  friend bool operator==(const RoundMetrics&, const RoundMetrics&) = default;
};

RoundMetrics collect_metrics(const Configuration& config, const Graph& graph,
                             const ProtocolParams& params);

/// Counts of each error predicate over all nodes of a snapshot.
struct ErrorCensus {
  std::size_t err1 = 0, err2 = 0, err3 = 0, err4 = 0, err5 = 0;
  std::size_t successor = 0, overflow_last = 0, overflow_first = 0;
  std::size_t triggers = 0;  // nodes where err() holds
};

ErrorCensus error_census(const Configuration& config, const Graph& graph,
                         const ProtocolParams& params);

std::size_t marked_wagon_count(const Configuration& config);
std::size_t leader_count(const Configuration& config);

/// Checks the five conditions that hold k rounds after `root` started
/// emitting a marked train into a configuration free of marked wagons.
/// Returns one message per failed condition; empty when all hold.
std::vector<std::string> check_marked_wave(const Configuration& config, const Graph& graph,
                                           const ProtocolParams& params, NodeId root,
                                           std::size_t k);

}  // namespace trains
