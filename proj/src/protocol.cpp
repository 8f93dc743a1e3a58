#include "trains/protocol.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace trains {

ProtocolParams::ProtocolParams(unsigned train_length) : train_length_(train_length) {
  if (train_length < 5) {
    throw std::invalid_argument("train length N must be at least 5, got " +
                                std::to_string(train_length));
  }
  if (train_length > 60) {
    throw std::invalid_argument("train length N above 60 overflows 64-bit train values");
  }
}

bool ProtocolParams::covers(std::size_t node_count) const {
  return train_length_ >= 1 + ceil_log2(node_count);
}

unsigned ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(x - 1));
}

Wagon make_wagon(unsigned idx, bool bit, bool carry, bool flag, const ProtocolParams& params) {
  if (idx >= params.train_length()) {
    throw std::invalid_argument("wagon idx " + std::to_string(idx) + " out of range for N=" +
                                std::to_string(params.train_length()));
  }
  return Wagon{static_cast<std::uint8_t>(idx), bit, carry, flag};
}

bool valid_for(const NodeState& state, const ProtocolParams& params) {
  auto ok = [&](const Station& s) { return !s || s->idx < params.train_length(); };
  return ok(state.first) && ok(state.last);
}

unsigned next_index(const Wagon& w, const ProtocolParams& params) {
  return (w.idx + 1u) % params.train_length();
}

namespace {

bool is_marked_head(const Station& s) { return s && s->flag && s->idx == 0; }

bool sees_marked_head(NeighborView nbrs) {
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    if (is_marked_head(nbrs[k].first)) return true;
  }
  return false;
}

bool is_successor(const Wagon& last, const Station& candidate, bool marked,
                  const ProtocolParams& params) {
  if (!candidate) return false;
  if (marked) {
    if (!candidate->flag) return false;
    return last.flag ? candidate->idx == next_index(last, params) : candidate->idx == 0;
  }
  return !candidate->flag && candidate->idx == next_index(last, params);
}

// Members of one successor set share idx and flag, so only the count and the
// first maximal-bit member matter.
struct Successors {
  std::size_t count = 0;
  std::size_t best = 0;
  bool max_bit = false;
};

Successors scan_successors(const Wagon& last, NeighborView nbrs, bool marked,
                           const ProtocolParams& params) {
  Successors out;
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const Station& f = nbrs[k].first;
    if (!is_successor(last, f, marked, params)) continue;
    if (out.count == 0 || (f->bit && !out.max_bit)) {
      out.best = k;
      out.max_bit = f->bit;
    }
    ++out.count;
  }
  return out;
}

bool expects_marked(const NodeState& v, bool marked_head_nearby, const ProtocolParams& params) {
  return (v.last && v.last->flag && v.last->idx != params.last_index()) || marked_head_nearby;
}

}  // namespace

bool succ_is_marked(const NodeState& v, NeighborView nbrs, const ProtocolParams& params) {
  return expects_marked(v, sees_marked_head(nbrs), params);
}

std::vector<std::size_t> succ_set(const NodeState& v, NeighborView nbrs, bool marked,
                                  const ProtocolParams& params) {
  std::vector<std::size_t> out;
  if (!v.last) return out;
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    if (is_successor(*v.last, nbrs[k].first, marked, params)) out.push_back(k);
  }
  return out;
}

Wagon add_into(const Station& target, const Wagon& source) {
  const unsigned sum = source.idx == 0 ? source.bit + 1u
                                       : source.bit + static_cast<unsigned>(target && target->carry);
  return Wagon{source.idx, (sum & 1u) != 0, sum == 2, source.flag};
}

StationPair wagon_update(const NodeState& v, NeighborView nbrs, const ProtocolParams& params) {
  const Wagon& last = *v.last;
  const bool marked = succ_is_marked(v, nbrs, params);

  StationPair out;
  if (!marked || last.flag || last.idx == params.last_index()) {
    out.first = add_into(v.first, last);
  }
  const Successors succ = scan_successors(last, nbrs, marked, params);
  out.last = add_into(v.last, *nbrs[succ.best].first);
  return out;
}

ErrorReport diagnose(const NodeState& v, NeighborView nbrs, const ProtocolParams& params) {
  ErrorReport r;
  const unsigned n = params.train_length();
  if (!v.last) {
    r.err1_no_last = true;
    return r;
  }
  const Wagon& last = *v.last;
  if (v.first) {
    const Wagon& first = *v.first;
    r.err2_index_gap = last.idx != (first.idx + 1u) % n;
    r.err3_flag_mismatch = last.idx != 0 && last.flag != first.flag;
    r.err4_first_overflow = first.idx == n - 1 && first.carry;
  }
  r.err5_last_overflow = last.idx == n - 1 && last.carry;

  const bool marked = succ_is_marked(v, nbrs, params);
  const Successors succ = scan_successors(last, nbrs, marked, params);
  r.successor_missing = succ.count == 0;
  r.overflow_last = last.idx == n - 2 && last.carry && succ.count > 0 && succ.max_bit &&
                    last.flag == marked;
  r.overflow_first = v.first && v.first->idx == n - 2 && v.first->carry && last.bit;
  return r;
}

bool local_errors(const NodeState& v, const ProtocolParams& params) {
  const unsigned n = params.train_length();
  if (!v.last) return true;
  const Wagon& last = *v.last;
  if (v.first) {
    const Wagon& first = *v.first;
    if (last.idx != (first.idx + 1u) % n) return true;
    if (last.idx != 0 && last.flag != first.flag) return true;
    if (first.idx == n - 1 && first.carry) return true;
  }
  return last.idx == n - 1 && last.carry;
}

bool global_errors(const NodeState& v, NeighborView nbrs, const ProtocolParams& params) {
  if (!v.last) return false;
  const ErrorReport r = diagnose(v, nbrs, params);
  return r.any_global();
}

bool err(const NodeState& v, NeighborView nbrs, const ProtocolParams& params) {
  if (v.leader) return false;
  return local_errors(v, params) || global_errors(v, nbrs, params);
}

bool is_eliminated(const NodeState& v, NeighborView nbrs) {
  return v.last && !v.last->flag && sees_marked_head(nbrs);
}

NodeState new_leader(RandomBits draw) {
  NodeState s;
  s.leader = true;
  s.first = Wagon{0, true, false, false};
  s.last = Wagon{1, false, false, false};
  s.rand = draw.x();
  return s;
}

NodeState wagon_creation(const NodeState& v, RandomBits draw, const ProtocolParams& params) {
  NodeState out = v;
  if (!v.last) {
    out.first.reset();
    out.last = Wagon{0, false, false, v.rand};
    out.rand = draw.x();
    return out;
  }
  out.first = add_into(v.first, *v.last);
  if (v.last->idx == params.last_index()) {
    out.last = Wagon{0, false, false, v.rand};
    out.rand = draw.x();
  } else {
    out.last = Wagon{static_cast<std::uint8_t>(v.last->idx + 1), false, false, v.last->flag};
    out.rand = v.rand && draw.x();
  }
  return out;
}

NodeState update_state(const NodeState& v, NeighborView nbrs, RandomBits draw,
                       const ProtocolParams& params) {
  if (err(v, nbrs, params)) return new_leader(draw);

  const bool leader = v.leader && !is_eliminated(v, nbrs);
  if (leader) return wagon_creation(v, draw, params);

  NodeState out = v;
  out.leader = false;
  StationPair moved = wagon_update(v, nbrs, params);
  out.first = moved.first;
  out.last = moved.last;
  return out;
}

unsigned state_bit_width(const ProtocolParams& params) {
  return 2 * (ceil_log2(params.train_length()) + 4) + 2;
}

namespace {

class BitWriter {
 public:
  void put(std::uint64_t value, unsigned width) {
    bits_ |= (value & ((std::uint64_t{1} << width) - 1)) << used_;
    used_ += width;
  }
  PackedState done() const { return {bits_, used_}; }

 private:
  std::uint64_t bits_ = 0;
  unsigned used_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t take(unsigned width) {
    const std::uint64_t v = (bits_ >> used_) & ((std::uint64_t{1} << width) - 1);
    used_ += width;
    return v;
  }

 private:
  std::uint64_t bits_;
  unsigned used_ = 0;
};

void put_station(BitWriter& w, const Station& s, unsigned idx_width) {
  w.put(s.has_value(), 1);
  const Wagon wagon = s.value_or(Wagon{});
  w.put(wagon.idx, idx_width);
  w.put(wagon.bit, 1);
  w.put(wagon.carry, 1);
  w.put(wagon.flag, 1);
}

Station take_station(BitReader& r, unsigned idx_width, const ProtocolParams& params) {
  const bool present = r.take(1) != 0;
  const auto idx = static_cast<unsigned>(r.take(idx_width));
  const bool bit = r.take(1) != 0;
  const bool carry = r.take(1) != 0;
  const bool flag = r.take(1) != 0;
  if (!present) return std::nullopt;
  return make_wagon(idx, bit, carry, flag, params);
}

}  // namespace

PackedState pack_state(const NodeState& state, const ProtocolParams& params) {
  const unsigned idx_width = ceil_log2(params.train_length());
  BitWriter w;
  w.put(state.rand, 1);
  w.put(state.leader, 1);
  put_station(w, state.first, idx_width);
  put_station(w, state.last, idx_width);
  return w.done();
}

NodeState unpack_state(const PackedState& packed, const ProtocolParams& params) {
  if (packed.width != state_bit_width(params)) {
    throw std::invalid_argument("packed state width mismatch");
  }
  const unsigned idx_width = ceil_log2(params.train_length());
  BitReader r(packed.bits);
  NodeState s;
  s.rand = r.take(1) != 0;
  s.leader = r.take(1) != 0;
  s.first = take_station(r, idx_width, params);
  s.last = take_station(r, idx_width, params);
  return s;
}

}  // namespace trains
