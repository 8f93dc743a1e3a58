#include "trains/engine.hpp"

#include <fstream>
#include <sstream>

#include "trains/random.hpp"

namespace trains {

void check_consistent(const Configuration& config, const Graph& graph,
                      const ProtocolParams& params) {
  if (config.states.size() != graph.size()) {
    throw std::invalid_argument("configuration has " + std::to_string(config.states.size()) +
                                " nodes, graph has " + std::to_string(graph.size()));
  }
  for (const auto& s : config.states) {
    if (!valid_for(s, params)) {
      throw std::invalid_argument("wagon idx out of range for N=" +
                                  std::to_string(params.train_length()));
    }
  }
}

RandomSource RandomSource::seeded(std::uint64_t seed) { return {Mode::Seeded, seed, nullptr}; }
RandomSource RandomSource::forced_zero() { return {Mode::ForcedZero, 0, nullptr}; }
RandomSource RandomSource::forced_one() { return {Mode::ForcedOne, 0, nullptr}; }

RandomSource RandomSource::scripted(Script script) {
  return {Mode::Scripted, 0, std::make_shared<const Script>(std::move(script))};
}

RandomSource::Script RandomSource::parse_script(std::istream& in) {
  Script script;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::uint64_t round = 0;
    NodeId node = 0;
    int x = 0;
    if (!(fields >> round)) {
      if (fields.eof()) continue;
      throw std::invalid_argument("rng script line " + std::to_string(line_no) + " is malformed");
    }
    std::string extra;
    if (!(fields >> node >> x) || (x != 0 && x != 1) || (fields >> extra)) {
      throw std::invalid_argument("rng script line " + std::to_string(line_no) +
                                  ": expected 'ROUND NODE X' with X in {0,1}");
    }
    script[{round, node}] = x == 1;
  }
  return script;
}

RandomSource RandomSource::load_script(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open rng script '" + file.string() + "'");
  return scripted(parse_script(in));
}

RandomBits RandomSource::bits(NodeId node, std::uint64_t round) const {
  switch (mode_) {
    case Mode::Seeded: {
      const std::uint64_t h = hash_words(seed_, node, round);
      return {(h & 1u) != 0, (h & 2u) != 0};
    }
    case Mode::ForcedZero:
      return {false, false};
    case Mode::ForcedOne:
      return {true, true};
    case Mode::Scripted: {
      const auto it = script_->find({round, node});
      const bool x = it != script_->end() && it->second;
      return {x, x};
    }
  }
  return {};
}

Configuration step(const Configuration& config, const Graph& graph, const RandomSource& rng,
                   const ProtocolParams& params, BitLedger* ledger) {
  const std::size_t n = graph.size();
  Configuration next;
  next.round = config.round + 1;
  next.states.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    // Drawn before the branch is known, whatever the node ends up doing.
    const RandomBits draw = rng.bits(v, config.round);
    if (ledger != nullptr) {
      ledger->raw_bits += 2;
      ++ledger->node_rounds;
    }
    const NeighborView nbrs(config.states, graph.neighbors(v));
    next.states[v] = update_state(config.states[v], nbrs, draw, params);
  }
  return next;
}

RunResult run(Configuration initial, const Graph& graph, const RandomSource& rng,
              const ProtocolParams& params, std::uint64_t max_rounds,
              const std::vector<RoundObserver*>& observers) {
  check_consistent(initial, graph, params);
  RunResult result;
  result.final = std::move(initial);
  result.stop_round = result.final.round;

  auto guarded = [](auto&& fn) {
    try {
      return fn();
    } catch (const RunError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError(std::string("observer failed: ") + e.what());
    }
  };

  for (RoundObserver* obs : observers) {
    guarded([&] {
      obs->on_start(result.final);
      return 0;
    });
  }

  for (std::uint64_t k = 0; k < max_rounds; ++k) {
    BitLedger round_bits;
    Configuration next = step(result.final, graph, rng, params, &round_bits);
    result.bits.raw_bits += round_bits.raw_bits;
    result.bits.node_rounds += round_bits.node_rounds;
    const RoundInfo info{next.round, round_bits.raw_bits};

    const RoundObserver* stopper = nullptr;
    for (RoundObserver* obs : observers) {
      const auto verdict = guarded([&] { return obs->on_round(result.final, next, info); });
      if (verdict == ObserverVerdict::Stop && stopper == nullptr) stopper = obs;
    }
    result.final = std::move(next);
    result.stop_round = result.final.round;
    if (stopper != nullptr) {
      result.reason = StopReason::Observer;
      result.reason_text = stopper->stop_reason();
      return result;
    }
  }
  result.reason = StopReason::Cap;
  result.reason_text = "cap";
  return result;
}

}  // namespace trains
