#pragma once

#include <filesystem>
#include <string>

#include "cascade/cascade.hpp"

#ifndef CASCADE_SCENARIO_DIR
#error "CASCADE_SCENARIO_DIR must point at the bundled scenarios"
#endif

namespace fixture {

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(CASCADE_SCENARIO_DIR) / (name + ".scenario");
}

inline cascade::ScenarioFile scenario(const std::string& name) {
  return cascade::load_scenario(scenario_path(name));
}

/// Two organizations, two assets, base price 20.
inline cascade::NetworkData example1_data(double price = 20.0) {
  return {cascade::Matrix{{0.0, 0.025}, {0.005, 0.0}},
          cascade::Matrix(2, 2, 0.05),
          {price, price},
          {1.0, 1.0},
          {1.5, 1.5}};
}

inline cascade::FinancialNetwork example1(double price = 20.0) {
  return cascade::FinancialNetwork::validate(example1_data(price));
}

/// Uncoupled network: C = 0, D = I, so D p = income.
inline cascade::FinancialNetwork decoupled(const cascade::Vector& income, const cascade::Vector& beta,
                                           const cascade::Vector& thresholds) {
  const std::size_t n = income.size();
  return cascade::FinancialNetwork::validate(
      {cascade::Matrix(n, n, 0.0), cascade::Matrix::identity(n), income, beta, thresholds});
}

}  // namespace fixture
