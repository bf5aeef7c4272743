#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/export.hpp"

namespace cascade::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kInfeasible = 3,
  kInternalError = 4,
};

struct CommandOutcome {
  int exit_code = kSuccess;
  std::string report;
  std::vector<std::string> artifacts_written;
};

struct GlobalOptions {
  bool json = false;
  std::filesystem::path out_dir = "cascade_out";
  std::optional<std::uint64_t> seed_override;
  bool force = false;
};

struct SimulateOptions {
  std::optional<std::vector<std::size_t>> snapshot_times;  // defaults to the scenario's
  TopologyFormat topology_format = TopologyFormat::Dot;
};

struct EquilibriaOptions {
  bool enumerate = false;  // neither flag set: regime always, enumeration when n fits
  bool regime = false;
  std::optional<std::vector<std::size_t>> certificate_indices;  // 0-based
  bool certificate_all = false;
  std::size_t max_n = 20;
};

enum class SignDirection { Worst, Best, Both };

struct SigniterOptions {
  SignDirection direction = SignDirection::Both;
  bool trace = false;
};

int exit_code_for(ErrorCode code);

/// Each command accepts a scenario file or a directory of *.scenario files
/// (processed in name order).
CommandOutcome cmd_simulate(const std::filesystem::path& scenario, const GlobalOptions& global,
                            const SimulateOptions& options = {});
CommandOutcome cmd_equilibria(const std::filesystem::path& scenario, const GlobalOptions& global,
                              const EquilibriaOptions& options = {});
CommandOutcome cmd_signiter(const std::filesystem::path& scenario, const GlobalOptions& global,
                            const SigniterOptions& options = {});
CommandOutcome cmd_validate(const std::filesystem::path& scenario, const GlobalOptions& global);

}  // namespace cascade::cli
