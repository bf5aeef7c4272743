#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cascade/model.hpp"

namespace cascade {

struct PriceWindow {
  std::size_t start = 0;
  std::size_t end_exclusive = 0;
  Vector prices;

  friend bool operator==(const PriceWindow&, const PriceWindow&) = default;
};

/// Asset prices over time: `base` everywhere except inside the override windows.
class PriceSignal {
 public:
  /// Windows must be nonempty, sorted by start and disjoint; every price
  /// vector nonnegative, nonnull and as long as `base`. Throws ValidationFailure.
  explicit PriceSignal(Vector base, std::vector<PriceWindow> overrides = {});

  const Vector& at(std::size_t t) const noexcept;
  const Vector& base() const noexcept { return base_; }
  const std::vector<PriceWindow>& overrides() const noexcept { return overrides_; }
  /// First t from which the prices stay at `base` forever.
  std::size_t settled_from() const noexcept;

  friend bool operator==(const PriceSignal&, const PriceSignal&) = default;

 private:
  Vector base_;
  std::vector<PriceWindow> overrides_;
};

struct Trajectory {
  std::vector<EquityState> states;            // V(0), ..., V(horizon)
  std::vector<FailureIndicator> indicators;   // phi(V(t) - thresholds), same length
  bool converged = false;
  std::optional<std::size_t> settle_time;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct SimulationOptions {
  std::size_t horizon = 1000;
  double conv_tol = 1e-9;
  std::size_t confirm_window = 5;
};

/// V(t+1) = C V + D p_t - B phi(V - thresholds). Throws LengthMismatch.
Vector step(const FinancialNetwork& network, std::span<const double> values,
            std::span<const double> prices);

/// Runs the full horizon. Convergence is declared at the first t >= prices.settled_from()
/// such that the next confirm_window steps each move less than conv_tol (inf-norm)
/// and the failure indicator stays constant across them.
Trajectory simulate(const FinancialNetwork& network, std::span<const double> initial,
                    const PriceSignal& prices, const SimulationOptions& options = {});

/// D p - beta for the base prices.
Vector positivity_margin(const FinancialNetwork& network);

/// D p - beta >= 0: with it, nonnegative initial states stay nonnegative.
bool check_positivity_condition(const FinancialNetwork& network);

}  // namespace cascade
