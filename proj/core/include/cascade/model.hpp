#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/matrix.hpp"

namespace cascade {

/// Raw, unchecked network parameters. Promote with FinancialNetwork::validate.
struct NetworkData {
  Matrix cross_holdings;  // C, n x n: C(i, j) = fraction of j owned by i
  Matrix asset_holdings;  // D, n x m
  Vector prices;          // p, length m
  Vector failure_costs;   // beta, length n
  Vector thresholds;      // failure thresholds, length n
};

/// Validated, immutable network. Invariants:
///   C >= 0, diag(C) = 0, every column sum of C < 1;
///   D >= 0 and (D p)_i > 0;  p >= 0, p != 0;  beta > 0.
class FinancialNetwork {
 public:
  /// Throws ValidationFailure listing every violated invariant.
  static FinancialNetwork validate(NetworkData data);
  /// Every violated invariant, empty when the data is valid.
  static std::vector<Violation> check(const NetworkData& data);

  std::size_t organizations() const noexcept { return data_.cross_holdings.rows(); }
  std::size_t assets() const noexcept { return data_.asset_holdings.cols(); }

  const Matrix& cross_holdings() const noexcept { return data_.cross_holdings; }
  const Matrix& asset_holdings() const noexcept { return data_.asset_holdings; }
  const Vector& prices() const noexcept { return data_.prices; }
  const Vector& failure_costs() const noexcept { return data_.failure_costs; }
  const Vector& thresholds() const noexcept { return data_.thresholds; }
  const NetworkData& data() const noexcept { return data_; }

  /// D p for the base prices.
  const Vector& asset_income() const noexcept { return asset_income_; }

 private:
  explicit FinancialNetwork(NetworkData data);

  NetworkData data_;
  Vector asset_income_;
};

struct EquityState {
  std::size_t t = 0;
  Vector values;
  friend bool operator==(const EquityState&, const EquityState&) = default;
};

/// phi_i = 1 when organization i is below its threshold.
struct FailureIndicator {
  std::vector<std::uint8_t> flags;

  std::size_t size() const noexcept { return flags.size(); }
  std::size_t failed_count() const noexcept;
  std::vector<std::size_t> failed() const;
  friend bool operator==(const FailureIndicator&, const FailureIndicator&) = default;
};

/// phi_i = 1 iff values_i < thresholds_i; equality counts as healthy.
/// Throws LengthMismatch.
FailureIndicator failure_indicator(std::span<const double> values,
                                   std::span<const double> thresholds);

/// Binary pattern of orthant k, component 0 is the most significant bit
/// (n = 3: k = 1 -> [0,0,1], k = 4 -> [1,0,0]). Throws IndexOutOfRange unless k < 2^n.
FailureIndicator orthant_sign_pattern(std::uint64_t k, std::size_t n);

/// Inverse of orthant_sign_pattern. Throws TooLarge for patterns longer than 64.
std::uint64_t orthant_index(const FailureIndicator& pattern);

}  // namespace cascade
