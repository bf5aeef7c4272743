#include "cascade/dynamics.hpp"

#include <string>

namespace cascade {

PriceSignal::PriceSignal(Vector base, std::vector<PriceWindow> overrides)
    : base_(std::move(base)), overrides_(std::move(overrides)) {
  std::vector<Violation> out;
  auto check_prices = [&](const Vector& p, const std::string& field) {
    if (p.size() != base_.size()) {
      out.push_back({field, "length " + std::to_string(p.size()) + ", expected " +
                                std::to_string(base_.size())});
      return;
    }
    bool nonnull = false;
    for (double v : p) {
      if (v < 0.0) out.push_back({field, "negative price"});
      if (v != 0.0) nonnull = true;
    }
    if (!nonnull) out.push_back({field, "price vector must be nonnull"});
  };

  check_prices(base_, "prices.base");
  for (std::size_t w = 0; w < overrides_.size(); ++w) {
    const auto& win = overrides_[w];
    const std::string field = "prices.override[" + std::to_string(w) + "]";
    if (win.end_exclusive <= win.start) out.push_back({field, "empty window"});
    if (w > 0 && win.start < overrides_[w - 1].end_exclusive) {
      out.push_back({field, "windows must be sorted and disjoint"});
    }
    check_prices(win.prices, field);
  }
  if (!out.empty()) throw ValidationFailure(std::move(out));
}

const Vector& PriceSignal::at(std::size_t t) const noexcept {
  for (const auto& win : overrides_) {
    if (t < win.start) break;
    if (t < win.end_exclusive) return win.prices;
  }
  return base_;
}

std::size_t PriceSignal::settled_from() const noexcept {
  return overrides_.empty() ? 0 : overrides_.back().end_exclusive;
}

Vector step(const FinancialNetwork& network, std::span<const double> values,
            std::span<const double> prices) {
  const std::size_t n = network.organizations();
  if (values.size() != n) {
    throw Error(ErrorCode::LengthMismatch,
                "state length " + std::to_string(values.size()) + ", expected " + std::to_string(n));
  }
  if (prices.size() != network.assets()) {
    throw Error(ErrorCode::LengthMismatch, "price length " + std::to_string(prices.size()) +
                                               ", expected " + std::to_string(network.assets()));
  }
  const Vector held = multiply(network.cross_holdings(), values);
  const Vector income = multiply(network.asset_holdings(), prices);
  const Vector& beta = network.failure_costs();
  const Vector& thresholds = network.thresholds();
  Vector next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = held[i] + income[i] - (values[i] < thresholds[i] ? beta[i] : 0.0);
  }
  return next;
}

Trajectory simulate(const FinancialNetwork& network, std::span<const double> initial,
                    const PriceSignal& prices, const SimulationOptions& options) {
  if (options.horizon == 0) throw ValidationFailure("horizon", "must be >= 1");
  if (options.confirm_window == 0) throw ValidationFailure("confirm_window", "must be >= 1");
  if (prices.base().size() != network.assets()) {
    throw Error(ErrorCode::LengthMismatch, "price signal has " +
                                               std::to_string(prices.base().size()) +
                                               " assets, network has " +
                                               std::to_string(network.assets()));
  }

  Trajectory traj;
  traj.states.reserve(options.horizon + 1);
  traj.indicators.reserve(options.horizon + 1);
  traj.states.push_back({0, Vector(initial.begin(), initial.end())});
  traj.indicators.push_back(failure_indicator(initial, network.thresholds()));

  for (std::size_t t = 0; t < options.horizon; ++t) {
    Vector next = step(network, traj.states.back().values, prices.at(t));
    traj.indicators.push_back(failure_indicator(next, network.thresholds()));
    traj.states.push_back({t + 1, std::move(next)});
  }

  // Count of consecutive small, sign-preserving steps ending at t.
  std::size_t run = 0;
  const std::size_t first = prices.settled_from();
  for (std::size_t t = first; t < options.horizon; ++t) {
    const auto& cur = traj.states[t].values;
    const auto& nxt = traj.states[t + 1].values;
    const bool quiet = norm_inf(subtract(nxt, cur)) < options.conv_tol &&
                       traj.indicators[t + 1] == traj.indicators[t];
    run = quiet ? run + 1 : 0;
    if (run == options.confirm_window) {
      traj.converged = true;
      traj.settle_time = t + 1 - options.confirm_window;
      break;
    }
  }
  return traj;
}

Vector positivity_margin(const FinancialNetwork& network) {
  return subtract(network.asset_income(), network.failure_costs());
}

bool check_positivity_condition(const FinancialNetwork& network) {
  for (double v : positivity_margin(network))
    if (v < 0.0) return false;
  return true;
}

}  // namespace cascade
