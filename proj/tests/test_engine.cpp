#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "trains/engine.hpp"
#include "trains/fuzz.hpp"

using namespace trains;

namespace {

const ProtocolParams P5(5);

Configuration start(const Graph& g, FuzzMode mode, std::uint64_t seed) {
  FuzzSpec spec;
  spec.mode = mode;
  spec.seed = seed;
  return generate_config(spec, g, P5);
}

}  // namespace

TEST_CASE("random sources") {
  const auto a = RandomSource::seeded(9);
  CHECK(a.bits(3, 17) == RandomSource::seeded(9).bits(3, 17));
  CHECK(RandomSource::forced_zero().bits(0, 0).x() == false);
  CHECK(RandomSource::forced_one().bits(5, 9).x() == true);

  std::size_t ones = 0, firsts = 0;
  const std::size_t trials = 40000;
  for (NodeId v = 0; v < 40; ++v)
    for (std::uint64_t r = 0; r < trials / 40; ++r) {
      ones += a.bits(v, r).x();
      firsts += a.bits(v, r).first;
    }
  // Binomial(40000, 1/4): sd ~ 87. Five sd either way.
  CHECK(ones > 10000 - 435);
  CHECK(ones < 10000 + 435);
  CHECK(firsts > 20000 - 500);
  CHECK(firsts < 20000 + 500);
}

TEST_CASE("rng scripts") {
  std::istringstream in("# round node x\n3 1 1\n4 1 0\n\n5 2 1 # tail\n");
  const auto script = RandomSource::parse_script(in);
  CHECK(script.size() == 3);
  const auto src = RandomSource::scripted(script);
  CHECK(src.bits(1, 3).x());
  CHECK_FALSE(src.bits(1, 4).x());
  CHECK(src.bits(2, 5).x());
  CHECK_FALSE(src.bits(0, 0).x());

  std::istringstream bad("3 1 2\n");
  CHECK_THROWS_AS(RandomSource::parse_script(bad), std::invalid_argument);
  std::istringstream extra("3 1 1 9\n");
  CHECK_THROWS_AS(RandomSource::parse_script(extra), std::invalid_argument);
  std::istringstream word("x 1 1\n");
  CHECK_THROWS_AS(RandomSource::parse_script(word), std::invalid_argument);
}

TEST_CASE("step applies update_state to a snapshot") {
  const Graph g = gnp(7, 0.4, 3);
  const auto rng = RandomSource::seeded(5);
  const Configuration c = start(g, FuzzMode::Uniform, 1);
  BitLedger ledger;
  const Configuration next = step(c, g, rng, P5, &ledger);
  CHECK(next.round == c.round + 1);
  CHECK(ledger.raw_bits == 2 * g.size());
  CHECK(ledger.node_rounds == g.size());
  for (NodeId v = 0; v < g.size(); ++v) {
    std::vector<NodeState> nbrs;
    for (NodeId u : g.neighbors(v)) nbrs.push_back(c.states[u]);
    CHECK(next.states[v] ==
          update_state(c.states[v], NeighborView(std::span<const NodeState>(nbrs)),
                       rng.bits(v, c.round), P5));
  }
}

TEST_CASE("every erring node becomes a fresh leader") {
  const Graph g = ring(6);
  Configuration c;
  c.states.assign(6, NodeState{});
  const Configuration next = step(c, g, RandomSource::forced_one(), P5);
  for (const auto& s : next.states) CHECK(s == new_leader(RandomBits{true, true}));
}

TEST_CASE("replay determinism") {
  const Graph g = grid(3, 3);
  const Configuration c = start(g, FuzzMode::Uniform, 4);
  for (const auto& rng : {RandomSource::seeded(2), RandomSource::forced_zero()}) {
    Configuration a = c, b = c;
    for (int r = 0; r < 200; ++r) {
      a = step(a, g, rng, P5);
      b = step(b, g, rng, P5);
      REQUIRE(a == b);
    }
  }
}

TEST_CASE("run: cap, observers and stop reasons") {
  const Graph g = ring(8);
  const Configuration c = start(g, FuzzMode::AllLeaders, 1);
  const auto rng = RandomSource::seeded(1);

  const RunResult none = run(c, g, rng, P5, 0, {});
  CHECK(none.final == c);
  CHECK(none.reason == StopReason::Cap);
  CHECK(none.stop_round == 0);

  std::uint64_t seen = 0;
  CallbackObserver count([&](const Configuration& before, const Configuration& after,
                             const RoundInfo& info) {
    CHECK(after.round == before.round + 1);
    CHECK(info.round == after.round);
    CHECK(info.raw_bits_drawn == 16);
    ++seen;
    return after.round == 25 ? ObserverVerdict::Stop : ObserverVerdict::Continue;
  });
  const RunResult r = run(c, g, rng, P5, 100, {&count});
  CHECK(seen == 25);
  CHECK(r.stop_round == 25);
  CHECK(r.reason == StopReason::Observer);
  CHECK(r.bits.raw_bits == 25 * 16);

  Configuration manual = c;
  for (int k = 0; k < 25; ++k) manual = step(manual, g, rng, P5);
  CHECK(manual == r.final);

  CallbackObserver failing([](const Configuration&, const Configuration&, const RoundInfo&)
                               -> ObserverVerdict { throw std::runtime_error("disk full"); });
  CHECK_THROWS_AS(run(c, g, rng, P5, 5, {&failing}), RunError);

  Configuration wrong = c;
  wrong.states.pop_back();
  CHECK_THROWS_AS(run(wrong, g, rng, P5, 1, {}), std::invalid_argument);
}

TEST_CASE("a legitimate configuration stays legitimate with the same leader") {
  const Graph g = ring(6);
  Configuration c = start(g, FuzzMode::AllLeaders, 3);
  const auto rng = RandomSource::seeded(3);
  std::uint64_t r = 0;
  while (!oracle::legitimate(c, g, 5) && r++ < 100000) c = step(c, g, rng, P5);
  const auto leader = oracle::legitimate(c, g, 5);
  REQUIRE(leader);
  for (int k = 0; k < 500; ++k) {
    c = step(c, g, rng, P5);
    REQUIRE(oracle::legitimate(c, g, 5) == leader);
  }
}
