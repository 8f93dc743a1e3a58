#include "trains/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace trains {

using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

unsigned parse_uint(std::string_view s, std::string_view token) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("malformed node token '" + std::string(token) + "'");
  }
  return v;
}

bool parse_bit(std::string_view s, std::string_view token) {
  const unsigned v = parse_uint(s, token);
  if (v > 1) throw FormatError("expected 0 or 1 in node token '" + std::string(token) + "'");
  return v == 1;
}

void put_station(std::string& out, const Station& s) {
  if (!s) {
    out += '-';
    return;
  }
  out += std::to_string(s->idx);
  out += ':';
  out += s->bit ? '1' : '0';
  out += ':';
  out += s->carry ? '1' : '0';
  out += ':';
  out += s->flag ? '1' : '0';
}

Station parse_station(std::string_view s, std::string_view token, const ProtocolParams& params) {
  if (s == "-") return std::nullopt;
  const auto f = split(s, ':');
  if (f.size() != 4) throw FormatError("malformed station in node token '" + std::string(token) + "'");
  const unsigned idx = parse_uint(f[0], token);
  if (idx >= params.train_length()) {
    throw FormatError("wagon idx " + std::to_string(idx) + " out of range in '" +
                      std::string(token) + "'");
  }
  return Wagon{static_cast<std::uint8_t>(idx), parse_bit(f[1], token), parse_bit(f[2], token),
               parse_bit(f[3], token)};
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json metrics_json(const RoundMetrics& m) {
  Json j;
  j["round"] = m.round;
  j["leader_count"] = m.leader_count;
  j["marked_wagon_count"] = m.marked_wagon_count;
  j["min_unmarked_train_value"] = optional_json(m.min_unmarked_train_value);
  j["min_marked_train_value"] = optional_json(m.min_marked_train_value);
  j["err_trigger_count"] = m.err_trigger_count;
  j["is_legitimate"] = m.is_legitimate;
  j["legitimate_leader"] = optional_json(m.legitimate_leader);
  return j;
}

template <typename T>
std::optional<T> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

RoundMetrics metrics_from(const Json& j) {
  RoundMetrics m;
  m.round = j.at("round").get<std::uint64_t>();
  m.leader_count = j.at("leader_count").get<std::size_t>();
  m.marked_wagon_count = j.at("marked_wagon_count").get<std::size_t>();
  m.min_unmarked_train_value = optional_from<std::uint64_t>(j.at("min_unmarked_train_value"));
  m.min_marked_train_value = optional_from<std::uint64_t>(j.at("min_marked_train_value"));
  m.err_trigger_count = j.at("err_trigger_count").get<std::size_t>();
  m.is_legitimate = j.at("is_legitimate").get<bool>();
  m.legitimate_leader = optional_from<NodeId>(j.at("legitimate_leader"));
  return m;
}

Json parse_json_line(std::string_view line) {
  try {
    return Json::parse(line);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
}

}  // namespace

std::string format_node(const NodeState& state) {
  std::string out;
  out += state.rand ? '1' : '0';
  out += ',';
  out += state.leader ? '1' : '0';
  out += ',';
  put_station(out, state.first);
  out += ',';
  put_station(out, state.last);
  return out;
}

NodeState parse_node(std::string_view token, const ProtocolParams& params) {
  const auto f = split(token, ',');
  if (f.size() != 4) throw FormatError("node token '" + std::string(token) + "' needs 4 fields");
  NodeState s;
  s.rand = parse_bit(f[0], token);
  s.leader = parse_bit(f[1], token);
  s.first = parse_station(f[2], token, params);
  s.last = parse_station(f[3], token, params);
  return s;
}

std::string serialize(const TraceRecord& record) {
  Json j;
  j["round"] = record.round;
  Json states = Json::array();
  for (const auto& s : record.states) states.push_back(format_node(s));
  j["states"] = std::move(states);
  if (record.metrics) j["metrics"] = metrics_json(*record.metrics);
  return j.dump();
}

TraceRecord parse_record(std::string_view line, const ProtocolParams& params) {
  const Json j = parse_json_line(line);
  try {
    if (!j.is_object() || !j.at("round").is_number_unsigned() || !j.at("states").is_array())
      throw FormatError("malformed record: expected round >= 0 and a states array");
    TraceRecord r;
    r.round = j.at("round").get<std::uint64_t>();
    for (const auto& tok : j.at("states")) r.states.push_back(parse_node(tok.get<std::string>(), params));
    if (j.contains("metrics")) r.metrics = metrics_from(j.at("metrics"));
    return r;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
}

std::string serialize(const RoundMetrics& metrics) { return metrics_json(metrics).dump(); }

RoundMetrics parse_metrics(std::string_view line) {
  try {
    return metrics_from(parse_json_line(line));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed metrics: ") + e.what());
  }
}

TraceRecord to_record(const Configuration& config) {
  return TraceRecord{config.round, config.states, std::nullopt};
}

Configuration to_config(const TraceRecord& record) {
  return Configuration{record.states, record.round};
}

Configuration read_snapshot(std::istream& in, const ProtocolParams& params) {
  std::string line, last;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) last = line;
  }
  if (last.empty()) throw FormatError("snapshot holds no record");
  return to_config(parse_record(last, params));
}

Configuration load_snapshot(const std::filesystem::path& file, const ProtocolParams& params) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open snapshot '" + file.string() + "'");
  return read_snapshot(in, params);
}

void write_snapshot(std::ostream& out, const Configuration& config) {
  out << serialize(to_record(config)) << '\n';
}

TraceWriter::TraceWriter(std::ostream* trace, std::ostream* metrics, const Graph& graph,
                         const ProtocolParams& params)
    : trace_(trace), metrics_(metrics), graph_(graph), params_(params) {}

void TraceWriter::on_start(const Configuration& initial) { write(initial); }

ObserverVerdict TraceWriter::on_round(const Configuration&, const Configuration& after,
                                      const RoundInfo&) {
  write(after);
  return ObserverVerdict::Continue;
}

void TraceWriter::write(const Configuration& config) {
  if (trace_ != nullptr) {
    *trace_ << serialize(to_record(config)) << '\n';
    if (!*trace_) throw RunError("trace write failed at round " + std::to_string(config.round));
  }
  if (metrics_ != nullptr) {
    *metrics_ << serialize(collect_metrics(config, graph_, params_)) << '\n';
    if (!*metrics_) {
      throw RunError("metrics write failed at round " + std::to_string(config.round));
    }
  }
}

}  // namespace trains
