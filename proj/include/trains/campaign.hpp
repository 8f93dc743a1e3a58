#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trains/analysis.hpp"
#include "trains/engine.hpp"
#include "trains/graph.hpp"
#include "trains/protocol.hpp"

namespace trains {

/// Stops a run once the configuration has stayed legitimate with one leader
/// for `window` rounds. A legitimate round followed by an illegitimate one,
/// or by a different leader, is a closure break: it is recorded and the
/// stretch restarts.
class ConvergenceObserver : public RoundObserver {
 public:
  ConvergenceObserver(const Graph& graph, const ProtocolParams& params, std::uint64_t window);

  void on_start(const Configuration& initial) override;
  ObserverVerdict on_round(const Configuration& before, const Configuration& after,
                           const RoundInfo& info) override;
  std::string stop_reason() const override { return "converged"; }

  /// First round of the current legitimate stretch.
  std::optional<std::uint64_t> converged_round() const { return start_; }
  std::optional<NodeId> leader() const { return leader_; }
  bool verified() const { return verified_; }
  const std::vector<std::string>& closure_breaks() const { return breaks_; }

 private:
  const Graph& graph_;
  ProtocolParams params_;
  std::uint64_t window_;
  std::optional<NodeId> leader_;
  std::optional<std::uint64_t> start_;
  bool verified_ = false;
  std::vector<std::string> breaks_;
};

/// Contract checks that apply to every round of every run, whatever the suite.
struct AuditCounts {
  std::uint64_t rounds = 0;
  std::uint64_t local_errors_round1 = 0;  // nodes with Err1..Err5 at round 1
  std::uint64_t local_errors_later = 0;   // same, rounds >= 2
  std::uint64_t tail_carry_round1 = 0;    // wagons with idx = N-1 and carry = 1
  std::uint64_t tail_carry_later = 0;
  std::uint64_t space_violations = 0;     // token wider than the bound or lossy
  std::uint64_t bit_violations = 0;       // rounds not drawing exactly 2 bits per node
  std::uint64_t incr_pairs = 0;           // round pairs meeting the increment precondition
  std::uint64_t incr_violations = 0;
  std::uint64_t incr_skipped = 0;         // analysis budget exceeded
  std::vector<std::string> notes;         // first few violation messages

  void merge(const AuditCounts& other);
  std::uint64_t purge_violations() const {
    return local_errors_round1 + local_errors_later + tail_carry_round1 + tail_carry_later;
  }
};

class AuditObserver : public RoundObserver {
 public:
  AuditObserver(const Graph& graph, const ProtocolParams& params, bool check_trains);

  void on_start(const Configuration& initial) override;
  ObserverVerdict on_round(const Configuration& before, const Configuration& after,
                           const RoundInfo& info) override;

  const AuditCounts& counts() const { return counts_; }

 private:
  struct FlagMinima {
    std::optional<std::uint64_t> min[2];
    bool ok = true;
  };
  FlagMinima minima(const Configuration& config);
  void check_tokens(const Configuration& config);
  void note(std::string message);

  const Graph& graph_;
  ProtocolParams params_;
  bool check_trains_;
  FlagMinima previous_;
  AuditCounts counts_;
};

enum class Suite {
  Closure,
  LeaderCreation,
  MarkedVanish,
  TrainIncr,
  LegGrow,
  Convergence,
  LocalErrorPurge,
};

Suite parse_suite(std::string_view name);
std::string to_string(Suite suite);

struct CampaignConfig {
  Suite suite = Suite::Closure;
  std::vector<std::string> graphs;
  unsigned train_length = 5;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_rounds = 1'000'000;  // convergence cap
  std::uint64_t closure_window = 5000;
  bool audit_trains = true;  // Trains^i minima every round, the costly audit
  unsigned workers = 1;
};

struct RunRow {
  std::string graph;
  std::uint64_t seed = 0;
  std::string init;
  std::string outcome;                  // converged, cap, ok, violation, infeasible
  std::optional<std::uint64_t> rounds;  // suite-specific, see README
  std::uint64_t events = 0;
  std::vector<std::string> violations;
  AuditCounts audit;
};

struct CampaignSummary {
  std::size_t runs = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t converged = 0;
  std::optional<double> median_rounds;
  std::optional<std::uint64_t> max_rounds;
  double convergence_rate = 0;
  std::vector<std::string> violations;  // campaign-level, e.g. convergence rate
  bool pass = false;
};

struct CampaignReport {
  Suite suite = Suite::Closure;
  unsigned train_length = 5;
  std::vector<RunRow> rows;
  CampaignSummary summary;
  AuditCounts audit;  // merged over all rows
};

/// Minimum fraction of converged runs for the convergence suite.
inline constexpr double kConvergenceQuorum = 0.95;

/// Throws std::invalid_argument on an unknown graph spec or N, and
/// InfeasibleFuzz when leg-grow or a crafted start cannot be built.
CampaignReport run_campaign(const CampaignConfig& config);

/// One JSON object per row, then `{"summary":{...}}`. Byte-reproducible.
void write_report(std::ostream& out, const CampaignReport& report);

}  // namespace trains
