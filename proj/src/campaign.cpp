#include "trains/campaign.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "trains/fuzz.hpp"
#include "trains/random.hpp"
#include "trains/trace.hpp"

namespace trains {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxNotes = 5;

std::string describe(const NodeState& s) { return format_node(s); }

}  // namespace

// --- ConvergenceObserver ---------------------------------------------------

ConvergenceObserver::ConvergenceObserver(const Graph& graph, const ProtocolParams& params,
                                         std::uint64_t window)
    : graph_(graph), params_(params), window_(window) {}

void ConvergenceObserver::on_start(const Configuration& initial) {
  leader_ = is_legitimate(initial, graph_, params_);
  start_ = leader_ ? std::optional(initial.round) : std::nullopt;
  verified_ = leader_ && window_ == 0;
}

ObserverVerdict ConvergenceObserver::on_round(const Configuration&, const Configuration& after,
                                              const RoundInfo&) {
  const auto now = is_legitimate(after, graph_, params_);
  if (leader_ && now != leader_) {
    breaks_.push_back("round " + std::to_string(after.round) + ": legitimate with leader " +
                      std::to_string(*leader_) + " followed by " +
                      (now ? "leader " + std::to_string(*now) : std::string("illegitimate")));
    start_.reset();
  }
  if (now && !start_) start_ = after.round;
  if (!now) start_.reset();
  leader_ = now;
  if (start_ && after.round - *start_ >= window_) {
    verified_ = true;
    return ObserverVerdict::Stop;
  }
  return ObserverVerdict::Continue;
}

// --- AuditObserver ---------------------------------------------------------

void AuditCounts::merge(const AuditCounts& o) {
  rounds += o.rounds;
  local_errors_round1 += o.local_errors_round1;
  local_errors_later += o.local_errors_later;
  tail_carry_round1 += o.tail_carry_round1;
  tail_carry_later += o.tail_carry_later;
  space_violations += o.space_violations;
  bit_violations += o.bit_violations;
  incr_pairs += o.incr_pairs;
  incr_violations += o.incr_violations;
  incr_skipped += o.incr_skipped;
  for (const auto& n : o.notes) {
    if (notes.size() < kMaxNotes) notes.push_back(n);
  }
}

AuditObserver::AuditObserver(const Graph& graph, const ProtocolParams& params, bool check_trains)
    : graph_(graph), params_(params), check_trains_(check_trains) {}

void AuditObserver::note(std::string message) {
  if (counts_.notes.size() < kMaxNotes) counts_.notes.push_back(std::move(message));
}

void AuditObserver::on_start(const Configuration& initial) {
  check_tokens(initial);
  if (check_trains_) previous_ = minima(initial);
}

AuditObserver::FlagMinima AuditObserver::minima(const Configuration& config) {
  FlagMinima m;
  try {
    for (const auto& t : extract_trains(config, graph_, params_)) {
      auto& slot = m.min[t.flag ? 1 : 0];
      const std::uint64_t v = train_value(t);
      if (!slot || v < *slot) slot = v;
    }
  } catch (const AnalysisBudgetExceeded&) {
    m.ok = false;
    ++counts_.incr_skipped;
  }
  return m;
}

void AuditObserver::check_tokens(const Configuration& config) {
  const unsigned n = params_.train_length();
  const unsigned bound = 2 * (ceil_log2(n) + 4) + 2;
  for (std::size_t v = 0; v < config.states.size(); ++v) {
    const NodeState& s = config.states[v];
    const auto packed = pack_state(s, params_);
    const bool lossless = unpack_state(packed, params_) == s &&
                          parse_node(format_node(s), params_) == s;
    if (packed.width > bound || !lossless) {
      ++counts_.space_violations;
      note("round " + std::to_string(config.round) + " node " + std::to_string(v) +
           ": token " + describe(s) + " packs to " + std::to_string(packed.width) + " bits");
    }
  }
}

ObserverVerdict AuditObserver::on_round(const Configuration&, const Configuration& after,
                                        const RoundInfo& info) {
  ++counts_.rounds;
  if (info.raw_bits_drawn != 2 * after.states.size()) {
    ++counts_.bit_violations;
    note("round " + std::to_string(after.round) + ": drew " +
         std::to_string(info.raw_bits_drawn) + " raw bits");
  }
  check_tokens(after);

  const bool first_round = after.round == 1;
  for (std::size_t v = 0; v < after.states.size(); ++v) {
    const NodeState& s = after.states[v];
    if (local_errors(s, params_)) {
      ++(first_round ? counts_.local_errors_round1 : counts_.local_errors_later);
      note("round " + std::to_string(after.round) + " node " + std::to_string(v) +
           ": local error in " + describe(s));
    }
    for (const Station* st : {&s.first, &s.last}) {
      if (*st && (*st)->idx == params_.last_index() && (*st)->carry) {
        ++(first_round ? counts_.tail_carry_round1 : counts_.tail_carry_later);
        note("round " + std::to_string(after.round) + " node " + std::to_string(v) +
             ": tail wagon with carry in " + describe(s));
      }
    }
  }

  if (check_trains_) {
    const FlagMinima now = minima(after);
    for (int flag = 0; flag < 2; ++flag) {
      const bool leader_holds = std::any_of(
          after.states.begin(), after.states.end(), [&](const NodeState& s) {
            return s.leader && ((s.first && s.first->flag == (flag == 1)) ||
                                (s.last && s.last->flag == (flag == 1)));
          });
      if (leader_holds || !previous_.ok || !now.ok || !previous_.min[flag] || !now.min[flag]) {
        continue;
      }
      ++counts_.incr_pairs;
      if (*now.min[flag] < *previous_.min[flag] + 1) {
        ++counts_.incr_violations;
        note("rounds " + std::to_string(after.round - 1) + "-" + std::to_string(after.round) +
             ": flag " + std::to_string(flag) + " minimum went " +
             std::to_string(*previous_.min[flag]) + " -> " + std::to_string(*now.min[flag]));
      }
    }
    previous_ = now;
  }
  return ObserverVerdict::Continue;
}

// --- suites ----------------------------------------------------------------

namespace {

struct SuiteName {
  Suite suite;
  std::string_view name;
};

constexpr SuiteName kSuiteNames[] = {
    {Suite::Closure, "closure"},
    {Suite::LeaderCreation, "leader-creation"},
    {Suite::MarkedVanish, "marked-vanish"},
    {Suite::TrainIncr, "train-incr"},
    {Suite::LegGrow, "leg-grow"},
    {Suite::Convergence, "convergence"},
    {Suite::LocalErrorPurge, "local-error-purge"},
};

struct RunContext {
  const CampaignConfig& cfg;
  const std::string& spec;
  const Graph& graph;
  const ProtocolParams& params;
  std::uint64_t seed;
};

/// Window of rounds a leaderless stretch may last.
std::uint64_t leader_window(const ProtocolParams& p) {
  return (std::uint64_t{1} << p.train_length()) + p.train_length();
}

/// First round from which no marked wagon may exist under forced-zero draws.
std::uint64_t marked_free_round(const ProtocolParams& p) {
  const std::uint64_t n = p.train_length();
  return n + (std::uint64_t{1} << n) + 2 * n - 2;
}

/// Builds the start named `mode`, falling back to uniform when the crafted
/// mode does not fit the graph. The returned label reproduces it.
std::pair<Configuration, std::string> fuzz_start(const RunContext& ctx, FuzzMode mode) {
  FuzzSpec spec;
  spec.mode = mode;
  spec.seed = ctx.seed;
  try {
    return {generate_config(spec, ctx.graph, ctx.params), to_string(mode) + ":" +
                                                              std::to_string(ctx.seed)};
  } catch (const InfeasibleFuzz&) {
    spec.mode = FuzzMode::Uniform;
    return {generate_config(spec, ctx.graph, ctx.params),
            "uniform:" + std::to_string(ctx.seed)};
  }
}

RunRow base_row(const RunContext& ctx, std::string init) {
  RunRow row;
  row.graph = ctx.spec;
  row.seed = ctx.seed;
  row.init = std::move(init);
  return row;
}

void finish_row(RunRow& row, const AuditObserver& audit, bool count_increments) {
  row.audit = audit.counts();
  if (row.audit.space_violations) {
    row.violations.push_back(std::to_string(row.audit.space_violations) +
                             " node tokens exceed the state bound or do not round-trip");
  }
  if (row.audit.bit_violations) {
    row.violations.push_back(std::to_string(row.audit.bit_violations) +
                             " rounds drew other than 2 raw bits per node");
  }
  if (count_increments && row.audit.incr_violations) {
    row.violations.push_back(std::to_string(row.audit.incr_violations) +
                             " round pairs where the minimum train value did not rise");
  }
  if (row.outcome.empty()) row.outcome = row.violations.empty() ? "ok" : "violation";
}

RunRow converge_run(const RunContext& ctx, FuzzMode mode, std::uint64_t window) {
  auto [initial, label] = fuzz_start(ctx, mode);
  RunRow row = base_row(ctx, label);
  ConvergenceObserver conv(ctx.graph, ctx.params, window);
  AuditObserver audit(ctx.graph, ctx.params, ctx.cfg.audit_trains);
  run(std::move(initial), ctx.graph, RandomSource::seeded(ctx.seed), ctx.params,
      ctx.cfg.max_rounds + window, {&conv, &audit});
  row.violations = conv.closure_breaks();
  row.outcome = conv.verified() ? "converged" : "cap";
  if (conv.verified()) {
    row.rounds = conv.converged_round();
    row.events = window;
  }
  finish_row(row, audit, true);
  return row;
}

RunRow closure_run(const RunContext& ctx) {
  return converge_run(ctx, FuzzMode::AllLeaders, ctx.cfg.closure_window);
}

RunRow leader_creation_run(const RunContext& ctx, std::size_t index) {
  const FuzzMode mode =
      index % 2 == 0 ? FuzzMode::NoLeaderCoherent : FuzzMode::UniformLeaderless;
  auto [initial, label] = fuzz_start(ctx, mode);
  RunRow row = base_row(ctx, label);
  const std::uint64_t window = leader_window(ctx.params);

  // Any window of `window` consecutive rounds must see a leader, not only
  // the first one.
  std::uint64_t streak = leader_count(initial) == 0 ? 1 : 0;
  std::uint64_t longest = streak;
  std::optional<std::uint64_t> first = streak == 0 ? std::optional<std::uint64_t>(0) : std::nullopt;
  CallbackObserver watch([&](const Configuration&, const Configuration& after, const RoundInfo&) {
    if (leader_count(after) == 0) {
      longest = std::max(longest, ++streak);
    } else {
      streak = 0;
      if (!first) first = after.round;
    }
    return ObserverVerdict::Continue;
  });
  AuditObserver audit(ctx.graph, ctx.params, ctx.cfg.audit_trains);
  run(std::move(initial), ctx.graph, RandomSource::seeded(ctx.seed), ctx.params, 8 * window,
      {&watch, &audit});
  row.rounds = first;
  row.events = longest;
  if (longest >= window) {
    row.violations.push_back("no leader during " + std::to_string(longest) +
                             " consecutive rounds, bound is " + std::to_string(window - 1));
  }
  finish_row(row, audit, true);
  return row;
}

RunRow marked_vanish_run(const RunContext& ctx, std::size_t index) {
  constexpr std::array kModes{FuzzMode::Uniform, FuzzMode::NoLeaderCoherent,
                              FuzzMode::AllLeaders, FuzzMode::NearOverflow,
                              FuzzMode::CollidingMarked};
  auto [initial, label] = fuzz_start(ctx, kModes[index % kModes.size()]);
  RunRow row = base_row(ctx, label);
  const std::uint64_t bound = marked_free_round(ctx.params);

  std::optional<std::uint64_t> last_marked;
  if (marked_wagon_count(initial) > 0) last_marked = 0;
  CallbackObserver watch([&](const Configuration&, const Configuration& after, const RoundInfo&) {
    if (marked_wagon_count(after) > 0) {
      last_marked = after.round;
      ++row.events;
      if (after.round >= bound && row.violations.size() < kMaxNotes) {
        row.violations.push_back("round " + std::to_string(after.round) + ": " +
                                 std::to_string(marked_wagon_count(after)) + " marked wagons");
      }
    }
    return ObserverVerdict::Continue;
  });
  AuditObserver audit(ctx.graph, ctx.params, ctx.cfg.audit_trains);
  run(std::move(initial), ctx.graph, RandomSource::forced_zero(), ctx.params, 2 * bound,
      {&watch, &audit});
  row.rounds = last_marked;
  finish_row(row, audit, true);
  return row;
}

RunRow train_incr_run(const RunContext& ctx) {
  auto [initial, label] = fuzz_start(ctx, FuzzMode::NearOverflow);
  RunRow row = base_row(ctx, label);
  if (label.rfind("near-overflow", 0) != 0) {
    throw InfeasibleFuzz("near-overflow start does not fit graph " + ctx.spec);
  }
  AuditObserver audit(ctx.graph, ctx.params, true);
  run(std::move(initial), ctx.graph, RandomSource::seeded(ctx.seed), ctx.params,
      8 * leader_window(ctx.params), {&audit});
  row.events = audit.counts().incr_pairs;
  if (row.events == 0) row.violations.push_back("no round pair met the increment precondition");
  finish_row(row, audit, true);
  return row;
}

/// Bound on the rounds between the marked emission and legitimacy.
std::uint64_t leg_grow_deadline(const ProtocolParams& p, std::size_t diam) {
  const std::uint64_t n = p.train_length();
  const std::uint64_t tau = (std::uint64_t{1} << (n + 2)) + n;
  const std::uint64_t tau_prime = (std::uint64_t{1} << n) + 2 * n;
  return tau + tau_prime + 2 * diam + 1;
}

RunRow leg_grow_run(const RunContext& ctx, std::size_t index) {
  constexpr std::array kModes{FuzzMode::Uniform, FuzzMode::NoLeaderCoherent,
                              FuzzMode::AllLeaders};
  auto [initial, label] = fuzz_start(ctx, kModes[index % kModes.size()]);
  RunRow row = base_row(ctx, label);
  const ProtocolParams& params = ctx.params;
  const unsigned n = params.train_length();
  AuditObserver audit(ctx.graph, params, ctx.cfg.audit_trains);

  // Drive with X = 0 until a leader has just emitted a tail in a system free
  // of marked wagons.
  const std::uint64_t settle = marked_free_round(params);
  std::vector<NodeId> candidates;
  CallbackObserver find([&](const Configuration&, const Configuration& after, const RoundInfo&) {
    if (after.round < settle || marked_wagon_count(after) > 0) return ObserverVerdict::Continue;
    for (NodeId v = 0; v < after.states.size(); ++v) {
      const NodeState& s = after.states[v];
      if (s.leader && s.last && s.last->idx == params.last_index()) candidates.push_back(v);
    }
    return candidates.empty() ? ObserverVerdict::Continue : ObserverVerdict::Stop;
  });
  auto phase1 = run(std::move(initial), ctx.graph, RandomSource::forced_zero(), params,
                    settle + 64 * n, {&find, &audit});
  if (candidates.empty()) {
    row.outcome = "infeasible";
    row.violations.push_back("no leader reached idx N-1 without marked wagons");
    finish_row(row, audit, true);
    return row;
  }
  const NodeId root = candidates[hash_words(ctx.seed, 0x6c6567, candidates.size()) %
                                 candidates.size()];
  const std::uint64_t r0 = phase1.final.round;

  // X = 1 at the root for one full phase keeps its rand at 1 until the next
  // wrap, which then emits a marked head at round t.
  RandomSource::Script script;
  for (std::uint64_t j = 0; j < n; ++j) script[{r0 + j, root}] = true;
  const std::uint64_t t = r0 + n + 1;
  const std::size_t top = 2 * eccentricity(ctx.graph, root) + 1;
  const std::uint64_t deadline = t + leg_grow_deadline(params, diameter(ctx.graph));

  std::optional<std::uint64_t> legit_at;
  CallbackObserver watch([&](const Configuration&, const Configuration& after, const RoundInfo&) {
    const std::uint64_t r = after.round;
    if (r + 1 == t && marked_wagon_count(after) > 0) {
      row.violations.push_back("marked wagons present the round before the emission");
      return ObserverVerdict::Stop;
    }
    if (r == t) {
      const Station& head = after.states[root].last;
      if (!after.states[root].leader || !head || head->idx != 0 || !head->flag) {
        row.violations.push_back("node " + std::to_string(root) +
                                 " did not emit a marked head at round " + std::to_string(t));
        return ObserverVerdict::Stop;
      }
    }
    if (r >= t && r - t <= top) {
      ++row.events;
      for (const auto& msg : check_marked_wave(after, ctx.graph, params, root, r - t)) {
        row.violations.push_back("k=" + std::to_string(r - t) + ": " + msg);
      }
    }
    if (r >= t && !legit_at && is_legitimate(after, ctx.graph, params) == root) legit_at = r;
    const bool wave_done = r >= t + top;
    return wave_done && legit_at ? ObserverVerdict::Stop : ObserverVerdict::Continue;
  });
  run(phase1.final, ctx.graph, RandomSource::scripted(std::move(script)), params,
      std::max<std::uint64_t>(deadline, t + top) - r0, {&watch, &audit});

  if (legit_at) {
    row.rounds = *legit_at - t;
  } else if (row.violations.empty()) {
    row.violations.push_back("not legitimate with leader " + std::to_string(root) +
                             " by round " + std::to_string(deadline));
  }
  row.init += " emitter=" + std::to_string(root) + " emission=" + std::to_string(t);
  finish_row(row, audit, true);
  return row;
}

RunRow local_error_purge_run(const RunContext& ctx, std::size_t index) {
  constexpr std::array kModes{FuzzMode::Uniform,       FuzzMode::UniformLeaderless,
                              FuzzMode::NoLeaderCoherent, FuzzMode::AllLeaders,
                              FuzzMode::NearOverflow,  FuzzMode::CollidingMarked};
  auto [initial, label] = fuzz_start(ctx, kModes[index % kModes.size()]);
  RunRow row = base_row(ctx, label);
  AuditObserver audit(ctx.graph, ctx.params, ctx.cfg.audit_trains);
  run(std::move(initial), ctx.graph, RandomSource::seeded(ctx.seed), ctx.params,
      leader_window(ctx.params) + 3 * ctx.params.train_length(), {&audit});
  const auto& a = audit.counts();
  row.events = a.rounds;
  if (a.local_errors_round1 + a.local_errors_later) {
    row.violations.push_back(std::to_string(a.local_errors_round1) + " local errors at round 1, " +
                             std::to_string(a.local_errors_later) + " later");
  }
  if (a.tail_carry_round1 + a.tail_carry_later) {
    row.violations.push_back(std::to_string(a.tail_carry_round1) +
                             " tail wagons with carry at round 1, " +
                             std::to_string(a.tail_carry_later) + " later");
  }
  finish_row(row, audit, true);
  return row;
}

bool is_line(const Graph& g) {
  std::size_t ends = 0;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (g.degree(v) > 2) return false;
    ends += g.degree(v) == 1;
  }
  return ends == 0 || ends == 2;
}

double median(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return static_cast<double>(values[m]);
  return (static_cast<double>(values[m - 1]) + static_cast<double>(values[m])) / 2.0;
}

CampaignSummary summarize(Suite suite, const std::vector<RunRow>& rows) {
  CampaignSummary s;
  s.runs = rows.size();
  std::vector<std::uint64_t> rounds;
  for (const auto& r : rows) {
    (r.violations.empty() ? s.passed : s.failed)++;
    if (r.outcome == "converged") ++s.converged;
    if (r.rounds) rounds.push_back(*r.rounds);
  }
  if (!rounds.empty()) {
    s.median_rounds = median(rounds);
    s.max_rounds = *std::max_element(rounds.begin(), rounds.end());
  }
  s.convergence_rate = s.runs ? static_cast<double>(s.converged) / static_cast<double>(s.runs) : 0;
  if (suite == Suite::Convergence && s.convergence_rate < kConvergenceQuorum) {
    s.violations.push_back("convergence rate below " + std::to_string(kConvergenceQuorum));
  }
  s.pass = s.failed == 0 && s.violations.empty();
  return s;
}

Json audit_json(const AuditCounts& a) {
  Json j;
  j["rounds"] = a.rounds;
  j["local_errors_round1"] = a.local_errors_round1;
  j["local_errors_later"] = a.local_errors_later;
  j["tail_carry_round1"] = a.tail_carry_round1;
  j["tail_carry_later"] = a.tail_carry_later;
  j["space_violations"] = a.space_violations;
  j["bit_violations"] = a.bit_violations;
  j["incr_pairs"] = a.incr_pairs;
  j["incr_violations"] = a.incr_violations;
  j["incr_skipped"] = a.incr_skipped;
  j["notes"] = a.notes;
  return j;
}

}  // namespace

Suite parse_suite(std::string_view name) {
  for (const auto& [suite, text] : kSuiteNames) {
    if (text == name) return suite;
  }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

std::string to_string(Suite suite) {
  for (const auto& [s, text] : kSuiteNames) {
    if (s == suite) return std::string(text);
  }
  return "unknown";
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  const ProtocolParams params(cfg.train_length);
  std::vector<Graph> graphs;
  for (const auto& spec : cfg.graphs) {
    graphs.push_back(generate(parse_graph_spec(spec)));
    if (cfg.suite == Suite::LegGrow && !is_line(graphs.back())) {
      throw InfeasibleFuzz("leg-grow needs a ring or a path, got " + spec);
    }
  }

  struct Task {
    std::size_t graph;
    std::size_t index;
    std::uint64_t seed;
    FuzzMode mode;  // convergence suite only
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      if (cfg.suite == Suite::Convergence) {
        tasks.push_back({g, r, cfg.seed + r, FuzzMode::Uniform});
        tasks.push_back({g, r, cfg.seed + r, FuzzMode::AllLeaders});
      } else {
        tasks.push_back({g, r, cfg.seed + r, FuzzMode::Uniform});
      }
    }
  }

  auto execute = [&](const Task& task) {
    const RunContext ctx{cfg, cfg.graphs[task.graph], graphs[task.graph], params, task.seed};
    switch (cfg.suite) {
      case Suite::Closure:
        return closure_run(ctx);
      case Suite::LeaderCreation:
        return leader_creation_run(ctx, task.index);
      case Suite::MarkedVanish:
        return marked_vanish_run(ctx, task.index);
      case Suite::TrainIncr:
        return train_incr_run(ctx);
      case Suite::LegGrow:
        return leg_grow_run(ctx, task.index);
      case Suite::Convergence:
        return converge_run(ctx, task.mode, 2 * params.train_length());
      case Suite::LocalErrorPurge:
        return local_error_purge_run(ctx, task.index);
    }
    throw std::logic_error("unhandled suite");
  };

  CampaignReport report;
  report.suite = cfg.suite;
  report.train_length = cfg.train_length;
  report.rows.resize(tasks.size());

  // Rows land at their task index, so the report never depends on timing.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        report.rows[i] = execute(tasks[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const unsigned count =
      static_cast<unsigned>(std::clamp<std::size_t>(cfg.workers, 1, std::max<std::size_t>(tasks.size(), 1)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& row : report.rows) report.audit.merge(row.audit);
  report.summary = summarize(cfg.suite, report.rows);
  return report;
}

void write_report(std::ostream& out, const CampaignReport& report) {
  const std::string suite = to_string(report.suite);
  for (const auto& r : report.rows) {
    Json j;
    j["suite"] = suite;
    j["graph"] = r.graph;
    j["seed"] = r.seed;
    j["N"] = report.train_length;
    j["init"] = r.init;
    j["outcome"] = r.outcome;
    j["rounds"] = r.rounds ? Json(*r.rounds) : Json(nullptr);
    j["events"] = r.events;
    j["violations"] = r.violations;
    j["audit"] = audit_json(r.audit);
    out << j.dump() << '\n';
  }
  const auto& s = report.summary;
  Json sum;
  sum["suite"] = suite;
  sum["runs"] = s.runs;
  sum["passed"] = s.passed;
  sum["failed"] = s.failed;
  sum["converged"] = s.converged;
  sum["median_rounds"] = s.median_rounds ? Json(*s.median_rounds) : Json(nullptr);
  sum["max_rounds"] = s.max_rounds ? Json(*s.max_rounds) : Json(nullptr);
  sum["convergence_rate"] = s.convergence_rate;
  sum["violations"] = s.violations;
  sum["audit"] = audit_json(report.audit);
  sum["pass"] = s.pass;
  Json j;
  j["summary"] = std::move(sum);
  out << j.dump() << '\n';
}

}  // namespace trains
