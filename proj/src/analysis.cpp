#include "trains/analysis.hpp"

#include <algorithm>

namespace trains {

const Station& station_at(const Configuration& config, Carrier c) {
  const NodeState& s = config.states[c.node];
  return c.kind == StationKind::First ? s.first : s.last;
}

std::uint64_t train_value(std::span<const Wagon> wagons) {
  std::uint64_t value = 0;
  for (std::size_t j = wagons.size(); j-- > 0;) {
    value = 2 * value + wagons[j].bit + 2u * wagons[j].carry;
  }
  return value;
}

std::uint64_t train_value(const TrainView& train) { return train_value(train.wagons); }

namespace {

class TrainSearch {
 public:
  TrainSearch(const Configuration& config, const Graph& graph, const ProtocolParams& params,
              std::size_t budget)
      : config_(config), graph_(graph), length_(params.train_length()), budget_(budget) {}

  void from(Carrier start, std::vector<TrainView>& out) {
    const Station& s = station_at(config_, start);
    if (!s || s->idx != 0) return;
    path_.assign(1, start);
    extend(s->flag, out);
  }

 private:
  void extend(bool flag, std::vector<TrainView>& out) {
    if (++expanded_ > budget_) {
      throw AnalysisBudgetExceeded("train extraction exceeded " + std::to_string(budget_) +
                                   " station expansions");
    }
    if (path_.size() == length_) {
      TrainView t;
      t.carriers = path_;
      for (Carrier c : path_) t.wagons.push_back(*station_at(config_, c));
      t.flag = flag;
      t.complete = true;
      out.push_back(std::move(t));
      return;
    }
    const Carrier here = path_.back();
    const auto want = static_cast<unsigned>(path_.size());
    auto try_next = [&](Carrier c) {
      const Station& s = station_at(config_, c);
      if (!s || s->idx != want || s->flag != flag) return;
      path_.push_back(c);
      extend(flag, out);
      path_.pop_back();
    };
    if (here.kind == StationKind::First) {
      try_next({here.node, StationKind::Last});
    } else {
      for (NodeId u : graph_.neighbors(here.node)) try_next({u, StationKind::First});
    }
  }

  const Configuration& config_;
  const Graph& graph_;
  std::size_t length_;
  std::size_t budget_;
  std::size_t expanded_ = 0;
  std::vector<Carrier> path_;
};

}  // namespace

std::vector<TrainView> extract_trains(const Configuration& config, const Graph& graph,
                                      const ProtocolParams& params,
                                      std::optional<bool> flag_filter, std::size_t budget) {
  std::vector<TrainView> out;
  TrainSearch search(config, graph, params, budget);
  for (NodeId v = 0; v < graph.size(); ++v) {
    for (StationKind kind : {StationKind::First, StationKind::Last}) {
      const Station& s = station_at(config, {v, kind});
      if (!s || (flag_filter && s->flag != *flag_filter)) continue;
      search.from({v, kind}, out);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TrainView& a, const TrainView& b) { return a.carriers < b.carriers; });
  return out;
}

std::optional<std::uint64_t> min_train_value(const Configuration& config, const Graph& graph,
                                             const ProtocolParams& params, bool flag) {
  std::optional<std::uint64_t> best;
  for (const auto& t : extract_trains(config, graph, params, flag)) {
    const auto v = train_value(t);
    if (!best || v < *best) best = v;
  }
  return best;
}

std::vector<LayerView> layers(const Configuration& config, const Graph& graph, NodeId root) {
  const auto dist = bfs_distances(graph, root);
  const std::size_t ecc = *std::max_element(dist.begin(), dist.end());
  std::vector<LayerView> out(2 * ecc + 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  for (NodeId v = 0; v < graph.size(); ++v) {
    out[2 * dist[v]].stations.push_back(config.states[v].last);
    out[2 * dist[v] + 1].stations.push_back(config.states[v].first);
  }
  return out;
}

namespace {

std::uint64_t floor_shift(std::uint64_t k, unsigned idx) { return idx >= 64 ? 0 : k >> idx; }

// Layer i must be a single repeated wagon B_i with (B_i.idx + i) % N = B_0.idx.
std::optional<std::string> layer_singleton(const std::vector<LayerView>& ls, std::size_t i,
                                           const ProtocolParams& params) {
  const auto& st = ls[i].stations;
  for (const Station& s : st) {
    if (!s) return "layer " + std::to_string(i) + " has an empty station";
    if (*s != *st.front()) return "layer " + std::to_string(i) + " is not a singleton";
  }
  const unsigned n = params.train_length();
  if ((st.front()->idx + i) % n != ls[0].stations.front()->idx) {
    return "layer " + std::to_string(i) + " breaks the index relation";
  }
  return std::nullopt;
}

// Partial train B_k, B_{k-1}, ..., B_{k-m} with m = min(k, N-1-B_k.idx).
std::optional<std::string> layer_value(const std::vector<LayerView>& ls, std::size_t k,
                                       const ProtocolParams& params, LayerRow* row) {
  const Wagon head = *ls[k].stations.front();
  const std::size_t m = std::min<std::size_t>(k, params.last_index() - head.idx);
  std::vector<Wagon> wagons;
  for (std::size_t j = 0; j <= m; ++j) {
    const Wagon w = *ls[k - j].stations.front();
    if (w.idx != head.idx + j) {
      return "partial train at layer " + std::to_string(k) + " has non-consecutive indices";
    }
    if (w.flag != head.flag) {
      return "partial train at layer " + std::to_string(k) + " mixes flags";
    }
    wagons.push_back(w);
  }
  const std::uint64_t value = train_value(wagons);
  const std::uint64_t expected = floor_shift(k, head.idx);
  if (row != nullptr) *row = LayerRow{k, head, value, expected};
  if (value != expected) {
    return "partial train at layer " + std::to_string(k) + " has value " + std::to_string(value) +
           ", expected " + std::to_string(expected);
  }
  return std::nullopt;
}

}  // namespace

LegitimacyReport check_legitimacy(const Configuration& config, const Graph& graph,
                                  const ProtocolParams& params) {
  LegitimacyReport report;
  std::optional<NodeId> leader;
  for (NodeId v = 0; v < config.states.size(); ++v) {
    if (!config.states[v].leader) continue;
    if (leader) {
      report.reason = "more than one leader";
      return report;
    }
    leader = v;
  }
  if (!leader) {
    report.reason = "no leader";
    return report;
  }
  const auto ls = layers(config, graph, *leader);
  if (!ls[0].stations.front()) {
    report.reason = "layer 0 has an empty station";
    return report;
  }
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (auto why = layer_singleton(ls, i, params)) {
      report.reason = *why;
      return report;
    }
  }
  std::vector<LayerRow> rows(ls.size());
  for (std::size_t k = 0; k < ls.size(); ++k) {
    if (auto why = layer_value(ls, k, params, &rows[k])) {
      report.reason = *why;
      return report;
    }
  }
  report.leader = leader;
  report.rows = std::move(rows);
  return report;
}

std::optional<NodeId> is_legitimate(const Configuration& config, const Graph& graph,
                                    const ProtocolParams& params) {
  return check_legitimacy(config, graph, params).leader;
}

std::size_t marked_wagon_count(const Configuration& config) {
  std::size_t count = 0;
  for (const auto& s : config.states) {
    count += (s.first && s.first->flag) + (s.last && s.last->flag);
  }
  return count;
}

std::size_t leader_count(const Configuration& config) {
  return static_cast<std::size_t>(std::count_if(config.states.begin(), config.states.end(),
                                                [](const NodeState& s) { return s.leader; }));
}

ErrorCensus error_census(const Configuration& config, const Graph& graph,
                         const ProtocolParams& params) {
  ErrorCensus c;
  for (NodeId v = 0; v < graph.size(); ++v) {
    const NodeState& s = config.states[v];
    const NeighborView nbrs(config.states, graph.neighbors(v));
    const ErrorReport r = diagnose(s, nbrs, params);
    c.err1 += r.err1_no_last;
    c.err2 += r.err2_index_gap;
    c.err3 += r.err3_flag_mismatch;
    c.err4 += r.err4_first_overflow;
    c.err5 += r.err5_last_overflow;
    c.successor += r.successor_missing;
    c.overflow_last += r.overflow_last;
    c.overflow_first += r.overflow_first;
    c.triggers += !s.leader && r.any();
  }
  return c;
}

RoundMetrics collect_metrics(const Configuration& config, const Graph& graph,
                             const ProtocolParams& params) {
  RoundMetrics m;
  m.round = config.round;
  m.leader_count = leader_count(config);
  m.marked_wagon_count = marked_wagon_count(config);
  for (const auto& t : extract_trains(config, graph, params)) {
    auto& slot = t.flag ? m.min_marked_train_value : m.min_unmarked_train_value;
    const auto v = train_value(t);
    if (!slot || v < *slot) slot = v;
  }
  m.err_trigger_count = error_census(config, graph, params).triggers;
  m.legitimate_leader = is_legitimate(config, graph, params);
  m.is_legitimate = m.legitimate_leader.has_value();
  return m;
}

std::vector<std::string> check_marked_wave(const Configuration& config, const Graph& graph,
                                           const ProtocolParams& params, NodeId root,
                                           std::size_t k) {
  std::vector<std::string> failures;
  const auto dist = bfs_distances(graph, root);
  const auto ls = layers(config, graph, root);
  const std::size_t top = ls.size() - 1;  // 2 * ecc(root) + 1
  if (k > top) {
    failures.push_back("k=" + std::to_string(k) + " exceeds 2*ecc+1=" + std::to_string(top));
    return failures;
  }

  for (NodeId u = 0; u < graph.size(); ++u) {
    if (u != root && 2 * dist[u] <= k && config.states[u].leader) {
      failures.push_back("(i) node " + std::to_string(u) + " at distance " +
                         std::to_string(dist[u]) + " is still a leader");
      break;
    }
  }

  bool layers_ok = static_cast<bool>(ls[0].stations.front());
  if (!layers_ok) failures.push_back("(ii) layer 0 has an empty station");
  for (std::size_t i = 0; layers_ok && i <= k; ++i) {
    if (auto why = layer_singleton(ls, i, params)) {
      failures.push_back("(ii) " + *why);
      layers_ok = false;
    }
  }
  for (std::size_t i = 0; layers_ok && i <= k; ++i) {
    if (auto why = layer_value(ls, i, params, nullptr)) {
      failures.push_back("(iii) " + *why);
      break;
    }
  }

  for (std::size_t i = k + 1; i <= top; ++i) {
    const auto& st = ls[i].stations;
    if (std::any_of(st.begin(), st.end(), [](const Station& s) { return s && s->flag; })) {
      failures.push_back("(iv) marked wagon in layer " + std::to_string(i));
      break;
    }
  }

  if (layers_ok) {
    const Wagon& front = *ls[k].stations.front();
    if (front.idx != 0 || !front.flag) {
      failures.push_back("(v) layer " + std::to_string(k) + " does not hold a marked head");
    }
  }
  return failures;
}

}  // namespace trains
