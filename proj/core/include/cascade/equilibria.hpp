#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cascade/model.hpp"

namespace cascade {

/// The network in threshold-relative coordinates x = V - thresholds:
///   x(t+1) = C x(t) + r - B phi(x(t)),   r = (C - I) thresholds + D p.
struct TranslatedSystem {
  Matrix cross_holdings;  // C
  Matrix inverse;         // P = (I - C)^{-1}, elementwise >= 0
  Vector drive;           // r
  Vector failure_costs;   // beta
};

/// Throws NotSchur / Singular from the inverse.
TranslatedSystem translate(const FinancialNetwork& network);

/// A candidate rest point for one fixed failure pattern.
struct OrthantEquilibrium {
  std::uint64_t k = 0;
  FailureIndicator pattern;  // phi^[k]
  Vector values;             // (I - C)^{-1} (D p - B phi^[k])
  Vector translated;         // values - thresholds
  bool consistent = false;   // phi(values - thresholds) == pattern
  bool on_boundary = false;  // some |values_i - thresholds_i| < kBoundaryTolerance
};

inline constexpr double kBoundaryTolerance = 1e-9;
inline constexpr std::size_t kDefaultEnumerationLimit = 20;

/// Throws IndexOutOfRange unless k < 2^n.
OrthantEquilibrium orthant_equilibrium(const TranslatedSystem& ts, const FinancialNetwork& network,
                                       std::uint64_t k);

/// All consistent candidates in increasing k, boundary ones included but flagged.
/// Throws TooLarge when n > max_n.
std::vector<OrthantEquilibrium> enumerate_equilibria(const TranslatedSystem& ts,
                                                     const FinancialNetwork& network,
                                                     std::size_t max_n = kDefaultEnumerationLimit);

/// Existence and uniqueness of the all-healthy (x >= 0) and all-failed (x < 0)
/// equilibria, read off P r and P (r - beta), plus the bounds on the number of
/// failed organizations at any equilibrium.
struct RegimeReport {
  bool positivity_ok = false;          // D p - beta >= 0
  bool pos_eq_exists = false;          // P r >= 0
  bool pos_eq_unique_overall = false;  // P (r - beta) >= 0
  bool neg_eq_exists = false;          // P (r - beta) < 0
  bool neg_eq_unique_overall = false;  // P r < 0
  std::size_t n_f_lower = 0;           // count of (P r)_i < 0
  std::size_t n_f_upper = 0;           // count of (P (r - beta))_i < 0
  Vector upper_bound;                  // P r, the largest possible equilibrium
  Vector lower_bound;                  // P (r - beta), the smallest
};

/// Everything except positivity_ok, which needs the untranslated network.
RegimeReport classify_translated(const TranslatedSystem& ts);
RegimeReport classify_regime(const TranslatedSystem& ts, const FinancialNetwork& network);

struct NoAllFailCertificate {
  bool holds = false;
  double frobenius = 0.0;  // lambda_F of the principal submatrix
  Vector bounds;           // (D p - beta)_i / (1 - lambda_F)
};

/// Tests thresholds_i < (D p - beta)_i / (1 - lambda_F(C[indices, indices])) for every i.
/// When it holds no all-failed equilibrium exists.
NoAllFailCertificate no_all_fail_certificate(const FinancialNetwork& network,
                                             std::span<const std::size_t> indices);

struct StabilityRecord {
  std::uint64_t k = 0;
  bool stable = false;   // interior of its orthant: locally asymptotically stable
  bool fragile = false;  // sits on a discontinuity boundary
  double contraction = 0.0;      // ||C||_1, per-step error contraction inside the orthant
  double spectral_radius = 0.0;  // lambda_F(C)
};

/// Throws InconsistentEquilibrium when eq is not a rest point.
StabilityRecord stability_report(const OrthantEquilibrium& eq, const FinancialNetwork& network);

}  // namespace cascade
