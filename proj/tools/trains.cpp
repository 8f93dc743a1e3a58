// Command-line driver: simulate, check, campaign.
//
// Exit codes: 0 success (converged / legitimate / no violations), 1 usage or
// I/O error, 2 round cap reached, 3 snapshot not legitimate, 4 campaign
// violations.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trains/analysis.hpp"
#include "trains/campaign.hpp"
#include "trains/engine.hpp"
#include "trains/fuzz.hpp"
#include "trains/graph.hpp"
#include "trains/protocol.hpp"
#include "trains/trace.hpp"

namespace {

using namespace trains;
using Json = nlohmann::ordered_json;

enum Exit : int { kOk = 0, kError = 1, kCap = 2, kIllegitimate = 3, kViolations = 4 };

struct SimulateArgs {
  std::string graph;
  unsigned bign = 5;
  std::uint64_t seed = 0;
  std::string init = "uniform";
  std::uint64_t max_rounds = 1'000'000;
  std::string trace;
  std::string metrics;
  std::string rng = "seeded";
  std::uint64_t verify_window = 1000;
  bool allow_small = false;
};

struct CheckArgs {
  std::string snapshot;
  std::string graph;
  unsigned bign = 5;
};

struct CampaignArgs {
  std::string suite;
  std::vector<std::string> graphs;
  unsigned bign = 5;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::string report;
  std::uint64_t max_rounds = 1'000'000;
  std::uint64_t closure_window = 5000;
  bool skip_train_audit = false;
  unsigned workers = 0;
};

RandomSource make_rng(const std::string& text, std::uint64_t seed) {
  if (text == "seeded") return RandomSource::seeded(seed);
  if (text == "zero") return RandomSource::forced_zero();
  if (text == "one") return RandomSource::forced_one();
  if (text.rfind("script:", 0) == 0) return RandomSource::load_script(text.substr(7));
  throw std::invalid_argument("unknown --rng '" + text + "'");
}

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  if (path.empty()) return nullptr;
  auto out = std::make_unique<std::ofstream>(path);
  if (!*out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

Json metrics_object(const RoundMetrics& m) { return Json::parse(serialize(m)); }

int simulate(const SimulateArgs& a) {
  const Graph graph = generate(parse_graph_spec(a.graph));
  const ProtocolParams params(a.bign);
  const bool in_regime = params.covers(graph.size());
  if (!in_regime && !a.allow_small) {
    throw std::invalid_argument("N=" + std::to_string(a.bign) + " is below 1+ceil(log2 " +
                                std::to_string(graph.size()) +
                                "); pass --allow-small-N to run anyway");
  }
  FuzzSpec spec = parse_fuzz_spec(a.init);
  if (spec.mode != FuzzMode::FromFile && a.init.find(':') == std::string::npos) {
    spec.seed = a.seed;
  }
  Configuration initial = generate_config(spec, graph, params);
  const RandomSource rng = make_rng(a.rng, a.seed);

  auto trace = open_output(a.trace);
  auto metrics = open_output(a.metrics);
  TraceWriter writer(trace.get(), metrics.get(), graph, params);
  ConvergenceObserver conv(graph, params, a.verify_window);
  std::optional<std::uint64_t> last_marked;
  if (marked_wagon_count(initial) > 0) last_marked = initial.round;
  CallbackObserver marked([&](const Configuration&, const Configuration& after, const RoundInfo&) {
    if (marked_wagon_count(after) > 0) last_marked = after.round;
    return ObserverVerdict::Continue;
  });

  const RunResult result =
      run(std::move(initial), graph, rng, params, a.max_rounds, {&writer, &marked, &conv});
  const RoundMetrics final_metrics = collect_metrics(result.final, graph, params);

  Json s;
  s["stop_reason"] = result.reason_text;
  s["stop_round"] = result.stop_round;
  s["legitimate"] = final_metrics.is_legitimate;
  s["leader"] = final_metrics.legitimate_leader ? Json(*final_metrics.legitimate_leader)
                                                : Json(nullptr);
  s["converged_round"] = conv.verified() ? Json(*conv.converged_round()) : Json(nullptr);
  s["closure_breaks"] = conv.closure_breaks().size();
  s["last_marked_round"] = last_marked ? Json(*last_marked) : Json(nullptr);
  s["regime"] = in_regime ? "in-regime" : "out-of-regime";
  s["raw_bits"] = result.bits.raw_bits;
  s["node_rounds"] = result.bits.node_rounds;
  s["metrics"] = metrics_object(final_metrics);
  Json line;
  line["summary"] = std::move(s);
  std::cout << line.dump() << '\n';
  return conv.verified() ? kOk : kCap;
}

int check(const CheckArgs& a) {
  const Graph graph = generate(parse_graph_spec(a.graph));
  const ProtocolParams params(a.bign);
  const Configuration config = load_snapshot(a.snapshot, params);
  if (config.states.size() != graph.size()) {
    throw std::invalid_argument("snapshot has " + std::to_string(config.states.size()) +
                                " nodes, graph has " + std::to_string(graph.size()));
  }
  check_consistent(config, graph, params);
  const LegitimacyReport report = check_legitimacy(config, graph, params);
  if (!report.leader) {
    std::cout << "not legitimate: " << report.reason << '\n';
    return kIllegitimate;
  }
  std::cout << "legitimate: leader " << *report.leader << '\n';
  std::cout << std::setw(6) << "layer" << std::setw(6) << "idx" << std::setw(6) << "flag"
            << std::setw(8) << "value" << std::setw(10) << "expected" << '\n';
  for (const auto& row : report.rows) {
    std::cout << std::setw(6) << row.index << std::setw(6) << unsigned{row.wagon.idx}
              << std::setw(6) << row.wagon.flag << std::setw(8) << row.value << std::setw(10)
              << row.expected << '\n';
  }
  return kOk;
}

unsigned default_workers() {
  if (const char* env = std::getenv("TRAINS_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int campaign(const CampaignArgs& a) {
  CampaignConfig cfg;
  cfg.suite = parse_suite(a.suite);
  cfg.graphs = a.graphs;
  cfg.train_length = a.bign;
  cfg.runs = a.runs;
  cfg.seed = a.seed;
  cfg.max_rounds = a.max_rounds;
  cfg.closure_window = a.closure_window;
  cfg.audit_trains = !a.skip_train_audit;
  cfg.workers = a.workers ? a.workers : default_workers();

  const CampaignReport report = run_campaign(cfg);
  if (a.report.empty()) {
    write_report(std::cout, report);
  } else {
    auto out = open_output(a.report);
    write_report(*out, report);
    if (!*out) throw std::runtime_error("cannot write '" + a.report + "'");
    const auto& s = report.summary;
    std::cout << to_string(cfg.suite) << ": " << s.passed << "/" << s.runs << " runs passed"
              << (s.pass ? "" : ", FAILED") << '\n';
  }
  return report.summary.pass ? kOk : kViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-stabilizing leader election by circulating trains"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run one simulation");
  s->add_option("--graph", sim.graph, "ring:8, path:8, complete:6, grid:3x3, tree:N[:S], "
                                      "gnp:N:P[:S], file:PATH")->required();
  s->add_option("--bign", sim.bign, "Train length N (>= 5)");
  s->add_option("--seed", sim.seed, "Seed for the random bits and a seedless --init");
  s->add_option("--init", sim.init, "MODE[:SEED] or file:PATH");
  s->add_option("--max-rounds", sim.max_rounds, "Round cap");
  s->add_option("--trace", sim.trace, "Trace output, one record per round");
  s->add_option("--metrics", sim.metrics, "Metrics output, one record per round");
  s->add_option("--rng", sim.rng, "seeded, zero, one or script:PATH");
  s->add_option("--verify-window", sim.verify_window,
                "Rounds a legitimate configuration must persist to count as converged");
  s->add_flag("--allow-small-N", sim.allow_small, "Permit N < 1+ceil(log2 n)");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "Check a snapshot for legitimacy");
  c->add_option("--snapshot", chk.snapshot, "Snapshot or trace file (last record)")->required();
  c->add_option("--graph", chk.graph, "Graph spec")->required();
  c->add_option("--bign", chk.bign, "Train length N");

  CampaignArgs camp;
  auto* k = app.add_subcommand("campaign", "Run a property campaign");
  k->add_option("--suite", camp.suite,
                "closure, leader-creation, marked-vanish, train-incr, leg-grow, convergence, "
                "local-error-purge")->required();
  k->add_option("--graphs", camp.graphs, "Comma-separated graph specs")
      ->required()
      ->delimiter(',');
  k->add_option("--bign", camp.bign, "Train length N");
  k->add_option("--runs", camp.runs, "Runs per graph");
  k->add_option("--seed", camp.seed, "First seed; run r uses seed + r");
  k->add_option("--report", camp.report, "Report output (default stdout)");
  k->add_option("--max-rounds", camp.max_rounds, "Convergence cap");
  k->add_option("--closure-window", camp.closure_window, "Rounds verified after convergence");
  k->add_flag("--skip-train-audit", camp.skip_train_audit,
              "Skip the per-round train minimum audit");
  k->add_option("--workers", camp.workers, "Worker threads (default TRAINS_WORKERS or cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (s->parsed()) return simulate(sim);
    if (c->parsed()) return check(chk);
    return campaign(camp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
