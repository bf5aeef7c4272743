#include "cascade/model.hpp"

#include <cmath>
#include <string>

namespace cascade {

namespace {

std::string at(std::size_t i) { return "[" + std::to_string(i) + "]"; }
std::string at(std::size_t i, std::size_t j) {
  return "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

void check_finite(const char* field, std::span<const double> values, std::vector<Violation>& out) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) out.push_back({field + at(i), "not finite"});
}

}  // namespace

std::vector<Violation> FinancialNetwork::check(const NetworkData& d) {
  std::vector<Violation> out;
  const Matrix& c = d.cross_holdings;
  const Matrix& dm = d.asset_holdings;
  const std::size_t n = c.rows();
  const std::size_t m = dm.cols();

  if (!c.square()) {
    out.push_back({"C", "must be square, got " + std::to_string(c.rows()) + "x" +
                            std::to_string(c.cols())});
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (c(i, j) < 0.0) out.push_back({"C" + at(i, j), "negative entry"});
      }
      if (c(i, i) != 0.0) out.push_back({"C" + at(i, i), "nonzero diagonal"});
    }
    const Vector sums = c.column_sums();
    for (std::size_t j = 0; j < n; ++j)
      if (!(sums[j] < 1.0)) {
        out.push_back({"C column " + std::to_string(j),
                       "column sum " + std::to_string(sums[j]) + " is not < 1"});
      }
  }

  if (dm.rows() != n) {
    out.push_back({"D", "has " + std::to_string(dm.rows()) + " rows, expected " +
                            std::to_string(n)});
  }
  for (std::size_t i = 0; i < dm.rows(); ++i)
    for (std::size_t k = 0; k < m; ++k)
      if (dm(i, k) < 0.0) out.push_back({"D" + at(i, k), "negative entry"});

  check_finite("p", d.prices, out);
  check_finite("beta", d.failure_costs, out);
  check_finite("v_threshold", d.thresholds, out);

  if (d.prices.size() != m) {
    out.push_back({"p", "length " + std::to_string(d.prices.size()) + ", expected " +
                            std::to_string(m)});
  } else {
    bool nonnull = false;
    for (std::size_t k = 0; k < m; ++k) {
      if (d.prices[k] < 0.0) out.push_back({"p" + at(k), "negative price"});
      if (d.prices[k] != 0.0) nonnull = true;
    }
    if (!nonnull) out.push_back({"p", "price vector must be nonnull"});
    if (dm.rows() == n) {
      const Vector income = multiply(dm, d.prices);
      for (std::size_t i = 0; i < n; ++i)
        if (!(income[i] > 0.0)) out.push_back({"Dp" + at(i), "asset income must be > 0"});
    }
  }

  if (d.failure_costs.size() != n) {
    out.push_back({"beta", "length " + std::to_string(d.failure_costs.size()) + ", expected " +
                               std::to_string(n)});
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (!(d.failure_costs[i] > 0.0)) out.push_back({"beta" + at(i), "failure cost must be > 0"});
  }

  if (d.thresholds.size() != n) {
    out.push_back({"v_threshold", "length " + std::to_string(d.thresholds.size()) +
                                      ", expected " + std::to_string(n)});
  }
  return out;
}

FinancialNetwork FinancialNetwork::validate(NetworkData data) {
  auto violations = check(data);
  if (!violations.empty()) throw ValidationFailure(std::move(violations));
  return FinancialNetwork(std::move(data));
}

FinancialNetwork::FinancialNetwork(NetworkData data)
    : data_(std::move(data)), asset_income_(multiply(data_.asset_holdings, data_.prices)) {}

std::size_t FailureIndicator::failed_count() const noexcept {
  std::size_t count = 0;
  for (auto f : flags) count += f;
  return count;
}

std::vector<std::size_t> FailureIndicator::failed() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) out.push_back(i);
  return out;
}

FailureIndicator failure_indicator(std::span<const double> values,
                                   std::span<const double> thresholds) {
  if (values.size() != thresholds.size()) {
    throw Error(ErrorCode::LengthMismatch, "values length " + std::to_string(values.size()) +
                                               " vs thresholds " +
                                               std::to_string(thresholds.size()));
  }
  FailureIndicator phi;
  phi.flags.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) phi.flags[i] = values[i] < thresholds[i] ? 1 : 0;
  return phi;
}

FailureIndicator orthant_sign_pattern(std::uint64_t k, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::IndexOutOfRange, "pattern length must be >= 1");
  if (n < 64 && k >= (std::uint64_t{1} << n)) {
    throw Error(ErrorCode::IndexOutOfRange,
                "orthant " + std::to_string(k) + " >= 2^" + std::to_string(n));
  }
  FailureIndicator phi;
  phi.flags.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = n - 1 - i;
    if (bit < 64) phi.flags[i] = static_cast<std::uint8_t>((k >> bit) & 1U);
  }
  return phi;
}

std::uint64_t orthant_index(const FailureIndicator& pattern) {
  const std::size_t n = pattern.size();
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!pattern.flags[i]) continue;
    const std::size_t bit = n - 1 - i;
    if (bit >= 64) throw Error(ErrorCode::TooLarge, "orthant index exceeds 64 bits");
    k |= std::uint64_t{1} << bit;
  }
  return k;
}

}  // namespace cascade
