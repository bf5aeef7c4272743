#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/dynamics.hpp"
#include "cascade/model.hpp"

namespace cascade {

inline constexpr int kScenarioSchemaVersion = 1;

/// A vector or matrix as written in a scenario file. Constructor forms are kept
/// unexpanded so serialization preserves seeds and shorthand.
struct ArrayExpr {
  enum class Kind { Literal, Constant, Identity, RandomUniform };

  Kind kind = Kind::Literal;
  bool is_matrix = false;
  std::size_t rows = 0;  // vector length when !is_matrix
  std::size_t cols = 1;
  std::vector<double> values;  // Literal, row-major
  double value = 0.0;          // Constant
  double lo = 0.0, hi = 0.0;   // RandomUniform
  std::uint64_t seed = 0;      // RandomUniform
  bool zero_diagonal = false;  // matrices only

  static ArrayExpr literal_vector(Vector v);
  static ArrayExpr literal_matrix(const Matrix& m);
  static ArrayExpr constant_vector(std::size_t len, double value);

  bool random() const noexcept { return kind == Kind::RandomUniform; }
  Vector evaluate_vector() const;
  Matrix evaluate_matrix() const;

  friend bool operator==(const ArrayExpr&, const ArrayExpr&) = default;
};

struct PriceOverrideExpr {
  std::size_t start = 0;
  std::size_t end_exclusive = 0;
  ArrayExpr prices;
  friend bool operator==(const PriceOverrideExpr&, const PriceOverrideExpr&) = default;
};

/// The serializable content of a scenario file.
struct ScenarioDefinition {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  std::string note;
  std::vector<std::string> labels;
  ArrayExpr cross_holdings;
  ArrayExpr asset_holdings;
  ArrayExpr prices;
  ArrayExpr failure_costs;
  ArrayExpr thresholds;
  std::vector<PriceOverrideExpr> price_overrides;
  ArrayExpr initial_state;
  std::size_t horizon = 0;
  double conv_tol = 1e-9;
  std::size_t confirm_window = 5;
  std::vector<std::size_t> snapshot_times{0, 1, 2, 3};
  bool seeds_pinned = false;

  friend bool operator==(const ScenarioDefinition&, const ScenarioDefinition&) = default;
};

/// A definition together with the validated objects built from it.
class ScenarioFile {
 public:
  /// Throws ValidationFailure (network, price signal, initial state, labels, snapshot times).
  static ScenarioFile build(ScenarioDefinition definition);

  const ScenarioDefinition& definition() const noexcept { return definition_; }
  const std::string& name() const noexcept { return definition_.name; }
  const FinancialNetwork& network() const noexcept { return network_; }
  const PriceSignal& prices() const noexcept { return prices_; }
  const Vector& initial_state() const noexcept { return initial_state_; }
  SimulationOptions options() const;
  /// Node names: the labels when given, otherwise "1".."n".
  std::vector<std::string> node_names() const;

 private:
  ScenarioFile(ScenarioDefinition def, FinancialNetwork net, PriceSignal prices, Vector initial);

  ScenarioDefinition definition_;
  FinancialNetwork network_;
  PriceSignal prices_;
  Vector initial_state_;
};

/// Throws ParseError with the offending line and field, or ValidationFailure.
ScenarioFile parse_scenario(std::string_view document);
ScenarioDefinition parse_scenario_definition(std::string_view document);
std::string serialize_scenario(const ScenarioDefinition& definition);

/// Reads and parses a file. Throws IoFailure when it cannot be read.
ScenarioFile load_scenario(const std::filesystem::path& path);

/// True when any array in the definition draws from a seeded generator.
bool uses_random_seeds(const ScenarioDefinition& definition);
/// Replaces every generator seed.
ScenarioDefinition with_seed(ScenarioDefinition definition, std::uint64_t seed);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace cascade
