#include "cascade/export.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>

namespace cascade {

using nlohmann::json;

std::string format_significant(double v, int digits) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

namespace {

std::string trajectory_csv(const Trajectory& traj) {
  const std::size_t n = traj.states.front().values.size();
  std::string out = "t";
  for (std::size_t i = 1; i <= n; ++i) out += ",V_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) out += ",phi_" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& st = traj.states[k];
    out += std::to_string(st.t);
    for (double v : st.values) out += "," + format_significant(v);
    for (auto f : traj.indicators[k].flags) out += f ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::string trajectory_json(const Trajectory& traj) {
  json doc;
  doc["converged"] = traj.converged;
  doc["settle_time"] = traj.settle_time ? json(*traj.settle_time) : json(nullptr);
  doc["n"] = traj.states.front().values.size();
  json states = json::array();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    states.push_back({{"t", traj.states[k].t},
                      {"V", traj.states[k].values},
                      {"phi", traj.indicators[k].flags}});
  }
  doc["states"] = std::move(states);
  return doc.dump(1) + "\n";
}

}  // namespace

std::string export_trajectory(const Trajectory& traj, TrajectoryFormat format) {
  if (traj.states.empty() || traj.states.size() != traj.indicators.size()) {
    throw Error(ErrorCode::IoFailure, "cannot export an empty or malformed trajectory");
  }
  return format == TrajectoryFormat::Csv ? trajectory_csv(traj) : trajectory_json(traj);
}

Trajectory parse_trajectory_json(std::string_view document) {
  try {
    const json doc = json::parse(document);
    Trajectory traj;
    traj.converged = doc.at("converged").get<bool>();
    if (!doc.at("settle_time").is_null()) traj.settle_time = doc.at("settle_time").get<std::size_t>();
    for (const auto& st : doc.at("states")) {
      traj.states.push_back({st.at("t").get<std::size_t>(), st.at("V").get<Vector>()});
      traj.indicators.push_back({st.at("phi").get<std::vector<std::uint8_t>>()});
    }
    return traj;
  } catch (const json::exception& e) {
    throw ParseError(0, "trajectory", e.what());
  }
}

TopologySnapshot make_topology(const FinancialNetwork& network, const EquityState& state,
                               const std::vector<std::string>& names) {
  const std::size_t n = network.organizations();
  if (state.values.size() != n || names.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "topology needs " + std::to_string(n) +
                                               " values and names");
  }
  const FailureIndicator phi = failure_indicator(state.values, network.thresholds());
  TopologySnapshot snap;
  snap.t = state.t;
  for (std::size_t i = 0; i < n; ++i) snap.nodes.push_back({names[i], state.values[i], phi.flags[i] != 0});
  const Matrix& c = network.cross_holdings();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c(i, j) > 0.0) snap.edges.push_back({i, j, c(i, j)});
  return snap;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string topology_dot(const TopologySnapshot& snap) {
  std::string out = "digraph network {\n";
  out += "  label=\"t = " + std::to_string(snap.t) + "\";\n";
  out += "  node [shape=circle, style=filled];\n";
  for (const auto& node : snap.nodes) {
    out += "  " + quoted(node.id) + " [label=" + quoted(node.id) +
           ", class=" + (node.failed ? "\"failed\"" : "\"healthy\"") +
           ", fillcolor=" + (node.failed ? "\"red\"" : "\"blue\"") +
           ", value=" + quoted(format_significant(node.value)) + "];\n";
  }
  for (const auto& e : snap.edges) {
    out += "  " + quoted(snap.nodes[e.from].id) + " -> " + quoted(snap.nodes[e.to].id) +
           " [weight=" + quoted(format_significant(e.weight)) + "];\n";
  }
  out += "}\n";
  return out;
}

std::string topology_json(const TopologySnapshot& snap) {
  json doc;
  doc["t"] = snap.t;
  doc["nodes"] = json::array();
  for (const auto& node : snap.nodes) {
    doc["nodes"].push_back({{"id", node.id},
                            {"value", node.value},
                            {"class", node.failed ? "failed" : "healthy"}});
  }
  doc["edges"] = json::array();
  for (const auto& e : snap.edges) {
    doc["edges"].push_back(
        {{"from", snap.nodes[e.from].id}, {"to", snap.nodes[e.to].id}, {"weight", e.weight}});
  }
  return doc.dump(1) + "\n";
}

}  // namespace

std::string export_topology(const TopologySnapshot& snapshot, TopologyFormat format) {
  return format == TopologyFormat::Dot ? topology_dot(snapshot) : topology_json(snapshot);
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace cascade
