#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace trains {

using NodeId = std::uint32_t;

/// Common knowledge shared by every node: the train length N, which is also
/// the width of the distributed counter a train carries.
class ProtocolParams {
 public:
  /// Throws std::invalid_argument unless 5 <= N <= 60.
  explicit ProtocolParams(unsigned train_length);

  unsigned train_length() const { return train_length_; }
  unsigned last_index() const { return train_length_ - 1; }

  /// True when N >= 1 + ceil(log2 n), the regime in which the counter of a
  /// train cannot overflow inside a legitimate configuration.
  bool covers(std::size_t node_count) const;

 private:
  unsigned train_length_;
};

/// ceil(log2 x) for x >= 1.
unsigned ceil_log2(std::uint64_t x);

/// One car of a train.
struct Wagon {
  std::uint8_t idx = 0;
  bool bit = false;
  bool carry = false;
  bool flag = false;  // marked train

  friend bool operator==(const Wagon&, const Wagon&) = default;
};

/// Validates idx < N. Throws std::invalid_argument otherwise.
Wagon make_wagon(unsigned idx, bool bit, bool carry, bool flag, const ProtocolParams& params);

/// A station is either empty or holds a wagon.
using Station = std::optional<Wagon>;

struct NodeState {
  bool rand = false;
  bool leader = false;
  Station first;  // F: the older wagon
  Station last;   // L: the newer wagon

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

/// True if every wagon in the state has idx < N.
bool valid_for(const NodeState& state, const ProtocolParams& params);

/// Read-only snapshot of the neighbors' states at the previous round.
///
/// Either a contiguous span of neighbor states, or a set of ids indexing into
/// the full configuration. Position order is bookkeeping only; protocol
/// results do not depend on it.
class NeighborView {
 public:
  explicit NeighborView(std::span<const NodeState> neighbors)
      : states_(neighbors), ids_(), indexed_(false) {}
  NeighborView(std::span<const NodeState> all, std::span<const NodeId> ids)
      : states_(all), ids_(ids), indexed_(true) {}

  std::size_t size() const { return indexed_ ? ids_.size() : states_.size(); }
  bool empty() const { return size() == 0; }
  const NodeState& operator[](std::size_t pos) const {
    return indexed_ ? states_[ids_[pos]] : states_[pos];
  }

 private:
  std::span<const NodeState> states_;
  std::span<const NodeId> ids_;
  bool indexed_;
};

/// Two fair raw bits; the protocol consumes their conjunction X ~ Bernoulli(1/4).
struct RandomBits {
  bool first = false;
  bool second = false;

  constexpr bool x() const { return first && second; }
  friend bool operator==(const RandomBits&, const RandomBits&) = default;
};

// --- train circulation ---------------------------------------------------

/// (idx + 1) mod N.
unsigned next_index(const Wagon& w, const ProtocolParams& params);

/// True if v expects a marked wagon next: either v.L is a marked non-tail
/// wagon, or some neighbor shows the head of a marked train in its F station.
bool succ_is_marked(const NodeState& v, NeighborView nbrs, const ProtocolParams& params);

/// Positions (in `nbrs`) of the neighbors whose F station is a correct next
/// wagon for v.L. Returns an empty set when v.L is empty.
std::vector<std::size_t> succ_set(const NodeState& v, NeighborView nbrs, bool marked,
                                  const ProtocolParams& params);

/// Moves `source` into a station while performing one bit of the ripple-carry
/// addition. The result takes idx and flag from `source`; bit and carry are
/// source.bit + 1 for a head wagon, source.bit + target.carry otherwise.
/// An empty target reads as carry 0.
Wagon add_into(const Station& target, const Wagon& source);

struct StationPair {
  Station first;
  Station last;

  friend bool operator==(const StationPair&, const StationPair&) = default;
};

/// Non-leader wagon movement. Requires v.L non-empty and a non-empty successor
/// set for succ_is_marked(v); update_state guarantees both.
StationPair wagon_update(const NodeState& v, NeighborView nbrs, const ProtocolParams& params);

// --- errors and leaders --------------------------------------------------

/// Every error predicate evaluated separately. Global predicates are only
/// evaluated when v.L is non-empty; they stay false otherwise.
struct ErrorReport {
  bool err1_no_last = false;
  bool err2_index_gap = false;
  bool err3_flag_mismatch = false;
  bool err4_first_overflow = false;
  bool err5_last_overflow = false;
  bool successor_missing = false;
  bool overflow_last = false;
  bool overflow_first = false;

  bool any_local() const {
    return err1_no_last || err2_index_gap || err3_flag_mismatch || err4_first_overflow ||
           err5_last_overflow;
  }
  bool any_global() const { return successor_missing || overflow_last || overflow_first; }
  bool any() const { return any_local() || any_global(); }
};

ErrorReport diagnose(const NodeState& v, NeighborView nbrs, const ProtocolParams& params);

bool local_errors(const NodeState& v, const ProtocolParams& params);

/// Err-Successor or Err-Overflow. Requires v.L non-empty; returns false otherwise.
bool global_errors(const NodeState& v, NeighborView nbrs, const ProtocolParams& params);

/// Leader-creation trigger: never fires at a leader.
bool err(const NodeState& v, NeighborView nbrs, const ProtocolParams& params);

/// v carries an unmarked L wagon and a neighbor shows the head of a marked train.
bool is_eliminated(const NodeState& v, NeighborView nbrs);

NodeState new_leader(RandomBits draw);

/// Leader wagon emission and rand update. An adversarial leader with an empty
/// L station restarts at the head of a train flagged with its current rand.
NodeState wagon_creation(const NodeState& v, RandomBits draw, const ProtocolParams& params);

/// The state-transition function applied at every node each round.
NodeState update_state(const NodeState& v, NeighborView nbrs, RandomBits draw,
                       const ProtocolParams& params);

// --- compact encoding ----------------------------------------------------

/// Bits needed to store one node: two stations of (present, idx, bit, carry,
/// flag) plus rand and leader, i.e. 2 * (ceil(log2 N) + 4) + 2.
unsigned state_bit_width(const ProtocolParams& params);

struct PackedState {
  std::uint64_t bits = 0;
  unsigned width = 0;

  friend bool operator==(const PackedState&, const PackedState&) = default;
};

PackedState pack_state(const NodeState& state, const ProtocolParams& params);

/// Throws std::invalid_argument on a width mismatch or an out-of-range idx.
NodeState unpack_state(const PackedState& packed, const ProtocolParams& params);

}  // namespace trains
