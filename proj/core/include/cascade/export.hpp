#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/dynamics.hpp"

namespace cascade {

enum class TrajectoryFormat { Csv, Json };
enum class TopologyFormat { Dot, Json };

/// CSV: header `t,V_1..V_n,phi_1..phi_n`, one row per state, 12 significant digits.
/// JSON: {"converged", "settle_time", "n", "states": [{"t", "V", "phi"}...]} at full precision.
/// Throws IoFailure for an empty trajectory.
std::string export_trajectory(const Trajectory& traj, TrajectoryFormat format);

/// Inverse of the JSON export. Throws ParseError.
Trajectory parse_trajectory_json(std::string_view document);

struct TopologyNode {
  std::string id;
  double value = 0.0;
  bool failed = false;
};

struct TopologyEdge {
  std::size_t from = 0;  // holder i
  std::size_t to = 0;    // held organization j
  double weight = 0.0;   // C(i, j) > 0
};

/// Network picture at one instant: organizations coloured by failure, edges
/// for every nonzero cross-holding.
struct TopologySnapshot {
  std::size_t t = 0;
  std::vector<TopologyNode> nodes;
  std::vector<TopologyEdge> edges;
};

/// Throws LengthMismatch when the state or names do not match the network.
TopologySnapshot make_topology(const FinancialNetwork& network, const EquityState& state,
                               const std::vector<std::string>& names);

std::string export_topology(const TopologySnapshot& snapshot, TopologyFormat format);

/// Writes bytes to a file. Throws IoFailure.
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// printf %.12g equivalent.
std::string format_significant(double v, int digits = 12);

}  // namespace cascade
